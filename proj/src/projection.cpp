#include "ramplab/projection.hpp"

#include <cmath>

#include <json.hpp>

namespace ramplab {

namespace {

// World frame: x = east, y = down, z = north. A direction (theta, phi) maps
// to the unit vector below; note +y points down so phi > 0 gives y < 0.
struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 dir_to_vec(const Direction& d) {
    const double t = deg2rad(d.theta_deg);
    const double p = deg2rad(d.phi_deg);
    return {std::cos(p) * std::sin(t), -std::sin(p), std::cos(p) * std::cos(t)};
}

Direction vec_to_dir(const Vec3& v) {
    Direction d;
    d.theta_deg = rad2deg(std::atan2(v.x, v.z));
    d.phi_deg = rad2deg(std::atan2(-v.y, std::hypot(v.x, v.z)));
    return d;
}

// Pitch tilts the camera about its x (right) axis. With pitch p the forward
// ray (0,0,1) goes to (0, -sin p, cos p): negative pitch looks down (+y).
Vec3 apply_pitch(const Vec3& v, double pitch_deg) {
    const double c = std::cos(deg2rad(pitch_deg));
    const double s = std::sin(deg2rad(pitch_deg));
    return {v.x, v.y * c - v.z * s, v.y * s + v.z * c};
}

// Yaw rotates about the vertical so forward (north) goes to bearing yaw:
// (0,0,1) -> (sin yaw, 0, cos yaw).
Vec3 apply_yaw(const Vec3& v, double yaw_deg) {
    const double c = std::cos(deg2rad(yaw_deg));
    const double s = std::sin(deg2rad(yaw_deg));
    return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

double focal_px(const CropSpec& spec) {
    return (spec.sensor_px / 2.0) / std::tan(deg2rad(spec.fov_deg / 2.0));
}

}  // namespace

std::array<double, 3> direction_to_unit(const Direction& d) {
    const Vec3 v = dir_to_vec(d);
    return {v.x, v.y, v.z};
}

Direction unit_to_direction(const std::array<double, 3>& v) {
    return vec_to_dir({v[0], v[1], v[2]});
}

Direction pano_pixel_to_direction(const PanoPixel& p, const PanoMeta& pano) {
    Direction d;
    d.theta_deg = wrap180(pano.heading_deg + (p.x / pano.width - 0.5) * 360.0);
    d.phi_deg = (0.5 - p.y / pano.height) * 180.0;
    return d;
}

PanoPixel direction_to_pano_pixel(const Direction& d, const PanoMeta& pano) {
    PanoPixel p;
    p.x = (wrap180(d.theta_deg - pano.heading_deg) / 360.0 + 0.5) * pano.width;
    if (p.x >= pano.width) p.x -= pano.width;  // guard the wrap180(=180-eps) edge
    p.y = (0.5 - d.phi_deg / 180.0) * pano.height;
    return p;
}

Direction crop_pixel_to_direction(const CropPixel& c, const CropSpec& spec) {
    const double f = focal_px(spec);
    const double half = spec.sensor_px / 2.0;
    // Camera frame: +x right, +y down, +z forward; sensor is pixel-centered.
    Vec3 ray{spec.band_x0 + c.u - half, c.v - half, f};
    ray = apply_yaw(apply_pitch(ray, spec.pitch_deg), spec.yaw_deg);
    return vec_to_dir(ray);
}

std::optional<CropPixel> direction_to_crop_pixel(const Direction& d, const CropSpec& spec) {
    // Undo yaw then pitch (inverse rotations in reverse order).
    Vec3 cam = apply_pitch(apply_yaw(dir_to_vec(d), -spec.yaw_deg), -spec.pitch_deg);
    if (!(cam.z > 0.0)) return std::nullopt;  // behind the camera
    const double f = focal_px(spec);
    const double half = spec.sensor_px / 2.0;
    const double sx = cam.x / cam.z * f + half;
    const double sy = cam.y / cam.z * f + half;
    CropPixel out{sx - spec.band_x0, sy};
    if (out.u < 0.0 || out.u >= spec.width || out.v < 0.0 || out.v >= spec.height) {
        return std::nullopt;
    }
    return out;
}

PanoPixel crop_point_to_pano(const CropPixel& c, const CropSpec& spec, const PanoMeta& pano) {
    return direction_to_pano_pixel(crop_pixel_to_direction(c, spec), pano);
}

std::optional<CropPixel> pano_point_to_crop(const PanoPixel& p, const CropSpec& spec,
                                            const PanoMeta& pano) {
    return direction_to_crop_pixel(pano_pixel_to_direction(p, pano), spec);
}

ImageRgb extract_crop(const ImageRgb& pano_img, const PanoMeta& pano, const CropSpec& spec,
                      SampleBounds* trace) {
    ImageRgb out(spec.width, spec.height);
    for (int v = 0; v < spec.height; ++v) {
        for (int u = 0; u < spec.width; ++u) {
            const PanoPixel src = crop_point_to_pano({static_cast<double>(u), static_cast<double>(v)},
                                                     spec, pano);
            out.set(u, v, sample_wrap_clamp(pano_img, src.x, src.y, trace));
        }
    }
    return out;
}

std::string CropSpec::to_json() const {
    nlohmann::json j;
    j["pano_id"] = pano_id;
    j["ramp_id"] = ramp_id;
    j["yaw_deg"] = yaw_deg;
    j["pitch_deg"] = pitch_deg;
    j["fov_deg"] = fov_deg;
    j["sensor_px"] = sensor_px;
    j["band_x0"] = band_x0;
    j["width"] = width;
    j["height"] = height;
    return j.dump(2) + "\n";
}

CropSpec CropSpec::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    CropSpec s;
    s.pano_id = j.at("pano_id").get<std::string>();
    s.ramp_id = j.at("ramp_id").get<std::string>();
    s.yaw_deg = j.at("yaw_deg").get<double>();
    s.pitch_deg = j.at("pitch_deg").get<double>();
    s.fov_deg = j.at("fov_deg").get<double>();
    s.sensor_px = j.at("sensor_px").get<int>();
    s.band_x0 = j.at("band_x0").get<int>();
    s.width = j.at("width").get<int>();
    s.height = j.at("height").get<int>();
    return s;
}

}  // namespace ramplab
