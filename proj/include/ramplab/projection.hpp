#pragma once

#include <array>
#include <optional>
#include <string>

#include "ramplab/geo.hpp"
#include "ramplab/image.hpp"

namespace ramplab {

// A viewing direction on the sphere: compass bearing (theta, degrees
// clockwise from north, wrapped to [-180, 180)) and elevation (phi, degrees
// above the horizon, [-90, 90]).
struct Direction {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
};

// Continuous pano pixel position; x in [0, width), y in [0, height]
// (y = height only at the exact south pole).
struct PanoPixel {
    double x = 0.0;
    double y = 0.0;
};

// Continuous crop pixel position; u across (0 at left edge), v down.
struct CropPixel {
    double u = 0.0;
    double v = 0.0;
};

// Geometry of one perspective crop rendered from a pano. A virtual square
// pinhole sensor (sensor_px wide, fov_deg across) is aimed at absolute
// bearing yaw_deg with pitch pitch_deg; only the middle-third column band
// [band_x0, band_x0 + width) of that sensor is kept, giving a tall crop that
// hugs the vertical centerline where curb ramps appear.
struct CropSpec {
    std::string pano_id;
    std::string ramp_id;  // candidate the crop was aimed at ("" when n/a)
    double yaw_deg = 0.0;
    double pitch_deg = -30.0;
    double fov_deg = 90.0;
    int sensor_px = 1024;
    int band_x0 = 341;
    int width = 341;
    int height = 1024;

    // Optical axis in crop coordinates: (sensor_px/2 - band_x0, sensor_px/2).
    double axis_u() const { return sensor_px / 2.0 - band_x0; }
    double axis_v() const { return sensor_px / 2.0; }

    std::string to_json() const;
    static CropSpec from_json(const std::string& text);
};

// Pano pixel <-> direction. Column x=width/2 looks along the pano heading;
// row y=height/2 is the horizon.
Direction pano_pixel_to_direction(const PanoPixel& p, const PanoMeta& pano);
PanoPixel direction_to_pano_pixel(const Direction& d, const PanoMeta& pano);

// Unit vector in the world frame (east, down, north) for a direction, and
// back. Exposed for renderers and geometry tests.
std::array<double, 3> direction_to_unit(const Direction& d);
Direction unit_to_direction(const std::array<double, 3>& v);

// Crop pixel <-> direction for a given crop geometry (pinhole model).
// pano-independent: directions are absolute. direction_to_crop_pixel returns
// std::nullopt when the direction is outside the crop's view frustum.
Direction crop_pixel_to_direction(const CropPixel& c, const CropSpec& spec);
std::optional<CropPixel> direction_to_crop_pixel(const Direction& d, const CropSpec& spec);

// Composed point transfer between a crop and its source pano.
PanoPixel crop_point_to_pano(const CropPixel& c, const CropSpec& spec, const PanoMeta& pano);
std::optional<CropPixel> pano_point_to_crop(const PanoPixel& p, const CropSpec& spec,
                                            const PanoMeta& pano);

// Renders the crop by bilinear sampling of the pano (wrap in x, clamp in y).
// `trace`, when given, accumulates the integer texel bounds actually read.
ImageRgb extract_crop(const ImageRgb& pano_img, const PanoMeta& pano, const CropSpec& spec,
                      SampleBounds* trace = nullptr);

}  // namespace ramplab
