#pragma once

#include <string>
#include <vector>

#include "ramplab/image.hpp"

namespace ramplab {

// A labeled point in image pixel coordinates (pano or crop).
struct PointLabel {
    double x = 0.0;
    double y = 0.0;
    double confidence = 1.0;
    std::string source;   // provenance tag, e.g. "auto", "heatmap"
    std::string ramp_id;  // originating ramp record, "" when unknown

    bool operator==(const PointLabel& o) const {
        return x == o.x && y == o.y && confidence == o.confidence && source == o.source &&
               ramp_id == o.ramp_id;
    }
};

struct HeatmapConfig {
    double sigma = 10.0;          // gaussian std-dev, in heatmap cells
    double peak_threshold = 0.55; // decode keeps maxima at/above this
    int downscale = 4;            // image px per heatmap cell
    double nms_radius = 5.0;      // min peak separation, in heatmap cells
};

// Single-channel float raster at image_dims / downscale (ceil).
struct Heatmap {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Heatmap() = default;
    Heatmap(int w, int h) : width(w), height(h), values(static_cast<std::size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
};

int heatmap_dim(int image_dim, int downscale);

// Renders point labels as unit-height gaussians, combined with max (not sum),
// so overlapping labels keep their own peaks. Point (x, y) lands at heatmap
// position (x / downscale, y / downscale).
Heatmap encode_heatmap(const std::vector<PointLabel>& points, int image_w, int image_h,
                       const HeatmapConfig& cfg = {});

// Recovers points from a heatmap: strict 8-neighbour local maxima at/above
// peak_threshold, greedy non-maximum suppression at nms_radius, then per-axis
// sub-cell refinement by a quadratic fit in log space (exact for gaussian
// peaks). Output is in image pixels, sorted by confidence descending then
// (y, x); confidence is the refined peak height, clamped to <= 1.
std::vector<PointLabel> decode_heatmap(const Heatmap& hm, int image_w, int image_h,
                                       const HeatmapConfig& cfg = {});

// Mirrors point labels about the vertical image axis (x -> width-1-x).
std::vector<PointLabel> hflip_points(const std::vector<PointLabel>& points, int image_w);

// Mirrors a heatmap raster (used by codec symmetry tests).
Heatmap hflip_heatmap(const Heatmap& hm);

}  // namespace ramplab
