#include "ramplab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "ramplab/projection.hpp"
#include "ramplab/rng.hpp"

namespace ramplab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr Rgb kSkyColor{140, 180, 220};
constexpr Rgb kGroundColor{90, 90, 90};

double meters_per_deg() { return kEarthRadiusM * kPi / 180.0; }

// Small local offsets in meters (east, north) -> a nearby GeoPoint. Only used
// for placement; every measured quantity downstream goes through the exact
// great-circle functions.
GeoPoint offset_m(const GeoPoint& base, double east_m, double north_m) {
    const double dlat = north_m / meters_per_deg();
    const double dlon = east_m / (meters_per_deg() * std::cos(deg2rad(base.lat)));
    return GeoPoint(base.lat + dlat, base.lon + dlon);
}

std::string pano_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "SP%06zu", i);
    return buf;
}

std::string ramp_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "R%06zu", i);
    return buf;
}

double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// 3D viewing geometry of a marker from a pano: unit direction to the disc
// center (camera sits camera_height_m above the pano's ground point) and the
// angular radius of its silhouette.
struct MarkerView {
    std::array<double, 3> dir;
    double center_dist = 0.0;   // 3D distance to the disc center
    double ang_radius = 0.0;    // radians
    double ground_dist = 0.0;
    double bearing_deg = 0.0;
    double phi_deg = 0.0;
};

MarkerView view_marker(const GeoPoint& pano, const GeoPoint& marker, double camera_h, double r) {
    MarkerView v;
    v.ground_dist = haversine_m(pano, marker);
    v.bearing_deg = initial_bearing_deg(pano, marker);
    v.phi_deg = -rad2deg(std::atan2(camera_h, v.ground_dist));
    v.center_dist = std::hypot(v.ground_dist, camera_h);
    v.ang_radius = std::asin(std::min(1.0, r / v.center_dist));
    v.dir = direction_to_unit({v.bearing_deg, v.phi_deg});
    return v;
}

// True when a marker at `pos` keeps every silhouette disjoint: from each
// cluster pano, the new marker and every existing marker must be separated by
// more than the sum of their angular radii (plus 1 degree of slack). This is
// what guarantees the pixel-level localizer can never see merged or occluded
// fiducials.
bool marker_placement_ok(const GeoPoint& pos, const std::vector<GeoPoint>& cluster_panos,
                         const std::vector<GeoPoint>& cluster_markers, const WorldSpec& spec) {
    for (const auto& p : cluster_panos) {
        if (haversine_m(p, pos) < 3.0) return false;
    }
    for (const auto& m : cluster_markers) {
        if (haversine_m(m, pos) < 2.5) return false;
    }
    const double slack = deg2rad(1.0);
    for (const auto& p : cluster_panos) {
        const MarkerView nv = view_marker(p, pos, spec.camera_height_m, spec.marker_radius_m);
        for (const auto& m : cluster_markers) {
            const MarkerView ov = view_marker(p, m, spec.camera_height_m, spec.marker_radius_m);
            const double ang = std::acos(std::clamp(dot3(nv.dir, ov.dir), -1.0, 1.0));
            if (ang < nv.ang_radius + ov.ang_radius + slack) return false;
        }
    }
    return true;
}

}  // namespace

Rgb marker_color(std::size_t ordinal) {
    return {255, static_cast<std::uint8_t>(ordinal % 256),
            static_cast<std::uint8_t>((ordinal / 256) % 256)};
}

SyntheticWorld generate_world(const WorldSpec& spec) {
    if (spec.n_panos <= 0) throw std::invalid_argument("n_panos must be positive");
    if (spec.null_cell_fraction < 0.0 || spec.null_cell_fraction >= 1.0) {
        throw std::invalid_argument("null_cell_fraction must be in [0, 1)");
    }
    if (!valid_pano_dims(spec.pano_width, spec.pano_height)) {
        throw std::invalid_argument("pano dims must be 2:1");
    }
    // Placement scatter must stay well inside a cell so clusters cannot
    // interact across any radius the pipeline uses.
    if (spec.cell_pitch_m < 2.0 * (spec.cluster_radius_m + spec.extra_ramp_max_m) + 100.0) {
        throw std::invalid_argument("cell_pitch_m too small for the configured radii");
    }

    SyntheticWorld world;
    world.spec = spec;
    world.ramps.city = spec.city;

    const int cols = std::max(2, static_cast<int>(std::ceil(std::sqrt(spec.n_panos / 1.7))));
    std::vector<PanoMeta> panos;
    std::vector<CurbRampRecord> ramps;

    auto make_pano = [&](const GeoPoint& pos, Rng& rng) {
        PanoMeta m;
        m.pano_id = pano_name(panos.size());
        m.location = pos;
        m.heading_deg = rng.uniform(0.0, 360.0);
        m.captured_on = add_days(Date{2019, 1, 1}, static_cast<long>(rng.below(1000)));
        m.width = spec.pano_width;
        m.height = spec.pano_height;
        panos.push_back(std::move(m));
    };

    auto make_ramp = [&](const GeoPoint& pos, std::optional<Date> installed) {
        CurbRampRecord r;
        r.ramp_id = ramp_name(ramps.size());
        r.location = pos;
        r.installed_on = installed;
        world.markers.push_back({pos, installed, marker_color(ramps.size())});
        ramps.push_back(std::move(r));
    };

    for (std::size_t cell = 0; static_cast<int>(panos.size()) < spec.n_panos; ++cell) {
        Rng rng(Rng::mix(spec.seed, 0xCE11ULL * 1000003ULL + cell));
        const long row = static_cast<long>(cell) / cols;
        const long col = static_cast<long>(cell) % cols;
        const GeoPoint cell_center = offset_m(spec.origin, (col + 0.5) * spec.cell_pitch_m,
                                              (row + 0.5) * spec.cell_pitch_m);

        if (rng.uniform() < spec.null_cell_fraction) {
            make_pano(offset_m(cell_center, rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0)),
                      rng);
            continue;
        }

        std::size_t k = 1 + rng.below(3);
        k = std::min<std::size_t>(k, spec.n_panos - panos.size());
        const GeoPoint cluster_center =
            offset_m(cell_center, rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0));

        std::vector<GeoPoint> cluster_panos;
        for (std::size_t i = 0; i < k; ++i) {
            GeoPoint pos = cluster_center;
            for (int attempt = 0; attempt < 100; ++attempt) {
                const double r = rng.uniform(0.0, spec.cluster_radius_m);
                const double b = deg2rad(rng.uniform(0.0, 360.0));
                pos = offset_m(cluster_center, r * std::sin(b), r * std::cos(b));
                bool ok = true;
                for (const auto& other : cluster_panos) {
                    if (haversine_m(other, pos) < spec.pano_min_sep_m) ok = false;
                }
                if (ok) break;
            }
            cluster_panos.push_back(pos);
            make_pano(pos, rng);
        }

        std::vector<GeoPoint> cluster_markers;
        auto place_ramp = [&](const GeoPoint& owner, double min_m, double max_m, int tries,
                              GeoPoint* out) {
            for (int attempt = 0; attempt < tries; ++attempt) {
                const double d = rng.uniform(min_m, max_m);
                const double b = deg2rad(rng.uniform(0.0, 360.0));
                const GeoPoint pos = offset_m(owner, d * std::sin(b), d * std::cos(b));
                if (marker_placement_ok(pos, cluster_panos, cluster_markers, spec)) {
                    *out = pos;
                    return true;
                }
            }
            return false;
        };

        for (const auto& owner : cluster_panos) {
            GeoPoint pos;
            if (!place_ramp(owner, spec.first_ramp_min_m, spec.first_ramp_max_m, 500, &pos)) {
                throw std::runtime_error("synthetic world: could not place a mandatory ramp; "
                                         "loosen the spacing parameters");
            }
            std::optional<Date> installed;
            if (rng.uniform() >= spec.missing_date_rate) {
                installed = add_days(Date{2008, 1, 1}, static_cast<long>(rng.below(3650)));
            }
            cluster_markers.push_back(pos);
            make_ramp(pos, installed);

            const std::size_t extras = rng.below(static_cast<std::uint64_t>(spec.max_extra_ramps) + 1);
            for (std::size_t e = 0; e < extras; ++e) {
                GeoPoint epos;
                if (!place_ramp(owner, spec.extra_ramp_min_m, spec.extra_ramp_max_m, 60, &epos)) {
                    continue;  // crowded cluster; extras are optional
                }
                std::optional<Date> edate;
                const double roll = rng.uniform();
                if (roll < spec.future_ramp_rate) {
                    // Installed after every capture date: must be rejected by
                    // the temporal filter and never rendered.
                    edate = add_days(Date{2035, 1, 1}, static_cast<long>(rng.below(365)));
                } else if (roll >= spec.future_ramp_rate + spec.missing_date_rate) {
                    edate = add_days(Date{2008, 1, 1}, static_cast<long>(rng.below(3650)));
                }
                cluster_markers.push_back(epos);
                make_ramp(epos, edate);
            }
        }
    }

    // Creation order produces zero-padded ids, so this sort is a no-op today;
    // it pins the catalog invariant regardless.
    std::sort(panos.begin(), panos.end(),
              [](const PanoMeta& a, const PanoMeta& b) { return a.pano_id < b.pano_id; });
    std::sort(ramps.begin(), ramps.end(),
              [](const CurbRampRecord& a, const CurbRampRecord& b) { return a.ramp_id < b.ramp_id; });
    world.catalog.panos = std::move(panos);
    world.ramps.ramps = std::move(ramps);

    // Analytic ground truth: one point per (pano, visible ramp) pair, from
    // the same great-circle + depression-angle math the renderer draws with.
    std::vector<GeoPoint> marker_pts;
    marker_pts.reserve(world.ramps.ramps.size());
    for (const auto& r : world.ramps.ramps) marker_pts.push_back(r.location);
    SpatialIndex marker_index(marker_pts);

    for (const auto& pano : world.catalog.panos) {
        std::vector<PointLabel>& labels = world.ground_truth[pano.pano_id];
        for (std::size_t i : marker_index.within(pano.location, spec.render_limit_m)) {
            const CurbRampRecord& ramp = world.ramps.ramps[i];
            if (ramp.installed_on && !(*ramp.installed_on < pano.captured_on)) continue;
            const MarkerView v =
                view_marker(pano.location, ramp.location, spec.camera_height_m, spec.marker_radius_m);
            const PanoPixel px = direction_to_pano_pixel({v.bearing_deg, v.phi_deg}, pano);
            PointLabel l;
            l.x = px.x;
            l.y = px.y;
            l.confidence = 1.0;
            l.source = "ground_truth";
            l.ramp_id = ramp.ramp_id;
            labels.push_back(std::move(l));
        }
        // Index order is by ramp index, which matches ramp_id order already;
        // keep the invariant explicit.
        std::sort(labels.begin(), labels.end(),
                  [](const PointLabel& a, const PointLabel& b) { return a.ramp_id < b.ramp_id; });
    }
    return world;
}

ImageRgb SyntheticWorld::render(const std::string& pano_id) const {
    const PanoMeta* pano = catalog.find(pano_id);
    if (!pano) throw std::runtime_error("unknown pano: " + pano_id);

    ImageRgb img(pano->width, pano->height);
    for (int y = 0; y < pano->height; ++y) {
        const double phi = (0.5 - static_cast<double>(y) / pano->height) * 180.0;
        const Rgb c = phi < 0.0 ? kGroundColor : kSkyColor;
        for (int x = 0; x < pano->width; ++x) img.set(x, y, c);
    }

    // Visible markers, farthest first so nearer discs paint over farther ones.
    struct Visible {
        MarkerView view;
        Rgb color;
    };
    std::vector<Visible> vis;
    for (const auto& m : markers) {
        if (haversine_m(pano->location, m.pos) > spec.render_limit_m) continue;
        if (m.installed_on && !(*m.installed_on < pano->captured_on)) continue;
        vis.push_back({view_marker(pano->location, m.pos, spec.camera_height_m,
                                   spec.marker_radius_m),
                       m.color});
    }
    std::sort(vis.begin(), vis.end(), [](const Visible& a, const Visible& b) {
        return a.view.center_dist > b.view.center_dist;
    });

    for (const auto& mv : vis) {
        const double alpha_deg = rad2deg(mv.view.ang_radius);
        const double cos_thresh = std::sqrt(std::max(
            0.0, mv.view.center_dist * mv.view.center_dist -
                     spec.marker_radius_m * spec.marker_radius_m)) / mv.view.center_dist;

        const double phi_hi = mv.view.phi_deg + alpha_deg + 0.6;
        const double phi_lo = mv.view.phi_deg - alpha_deg - 0.6;
        int y0 = static_cast<int>(std::floor((0.5 - phi_hi / 180.0) * pano->height));
        int y1 = static_cast<int>(std::ceil((0.5 - phi_lo / 180.0) * pano->height));
        y0 = std::max(0, y0);
        y1 = std::min(pano->height - 1, y1);

        // Longitude span widens with |phi|; pad generously, the exact dot
        // test trims the box.
        const double max_abs_phi = std::min(89.0, std::abs(mv.view.phi_deg) + alpha_deg + 0.6);
        const double dtheta_deg = alpha_deg / std::cos(deg2rad(max_abs_phi)) + 0.6;
        const double xc = direction_to_pano_pixel({mv.view.bearing_deg, 0.0}, *pano).x;
        const double half_w = dtheta_deg / 360.0 * pano->width + 2.0;
        const int xi0 = static_cast<int>(std::floor(xc - half_w));
        const int xi1 = static_cast<int>(std::ceil(xc + half_w));

        for (int y = y0; y <= y1; ++y) {
            for (int xi = xi0; xi <= xi1; ++xi) {
                const int x = ((xi % pano->width) + pano->width) % pano->width;
                const Direction d = pano_pixel_to_direction(
                    {static_cast<double>(x), static_cast<double>(y)}, *pano);
                if (dot3(direction_to_unit(d), mv.view.dir) >= cos_thresh) {
                    img.set(x, y, mv.color);
                }
            }
        }
    }
    return img;
}

std::vector<LabelRecord> SyntheticWorld::ground_truth_records() const {
    std::vector<LabelRecord> out;
    out.reserve(ground_truth.size());
    for (const auto& [pano_id, labels] : ground_truth) {
        LabelRecord r;
        r.pano_id = pano_id;
        r.city = spec.city;
        r.width = spec.pano_width;
        r.height = spec.pano_height;
        r.labels = labels;
        out.push_back(std::move(r));
    }
    return out;
}

std::optional<ImageRgb> SyntheticImageProvider::fetch(const std::string& pano_id) {
    if (!world_->catalog.find(pano_id)) return std::nullopt;
    return world_->render(pano_id);
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::vector<LabelRecord> perturb_labels(const std::vector<LabelRecord>& records,
                                        const PerturbConfig& cfg, PerturbLog* log) {
    if (cfg.drop_rate < 0.0 || cfg.drop_rate > 1.0) {
        throw std::invalid_argument("drop_rate must be in [0, 1]");
    }
    std::vector<LabelRecord> out;
    out.reserve(records.size());
    for (const auto& rec : records) {
        LabelRecord copy = rec;
        copy.labels.clear();
        for (std::size_t i = 0; i < rec.labels.size(); ++i) {
            // Per-label stream keyed by (pano, index): reordering records
            // cannot change any label's fate.
            Rng rng(Rng::mix(cfg.seed, fnv1a(rec.pano_id) + i * 0x9e3779b97f4a7c15ULL));
            if (rng.uniform() < cfg.drop_rate) {
                if (log) {
                    const std::string& rid = rec.labels[i].ramp_id;
                    log->dropped.push_back(rec.pano_id + ":" +
                                           (rid.empty() ? std::to_string(i) : rid));
                }
                continue;
            }
            PointLabel l = rec.labels[i];
            if (cfg.noise_px > 0.0) {
                l.x += rng.gaussian() * cfg.noise_px;
                l.y += rng.gaussian() * cfg.noise_px;
                l.x = std::fmod(l.x, static_cast<double>(rec.width));
                if (l.x < 0.0) l.x += rec.width;
                l.y = std::clamp(l.y, 0.0, static_cast<double>(rec.height - 1));
                if (log) ++log->moved;
            }
            copy.labels.push_back(std::move(l));
        }
        out.push_back(std::move(copy));
    }
    return out;
}

}  // namespace ramplab
