#include "ramplab/selection.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "ramplab/rng.hpp"

namespace ramplab {

namespace {

// Meters per degree of latitude on the reference sphere (exact for this
// project's haversine, which uses the same radius).
constexpr double kMetersPerDegLat = kEarthRadiusM * 3.14159265358979323846 / 180.0;

std::int64_t cell_coord(double deg, double cell_deg) {
    return static_cast<std::int64_t>(std::floor(deg / cell_deg));
}

std::uint64_t cell_key(std::int64_t cx, std::int64_t cy) {
    // Pack two signed 32-bit-ish coords; ranges here are tiny (|deg|/cell_deg
    // fits easily), so a shift-xor pack is collision-free.
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
}

}  // namespace

SpatialIndex::SpatialIndex(std::vector<GeoPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        cells_[cell_key(cell_coord(p.lon, cell_deg_), cell_coord(p.lat, cell_deg_))].push_back(
            static_cast<std::uint32_t>(i));
    }
}

std::vector<std::size_t> SpatialIndex::within(const GeoPoint& center, double radius_m) const {
    if (radius_m < 0.0) throw std::invalid_argument("radius must be >= 0");
    std::vector<std::size_t> out;
    if (points_.empty()) return out;

    // Conservative degree margins: latitude is uniform; longitude shrinks by
    // cos(lat), so use the widest latitude the query box can reach.
    const double margin = 1.0 + 1e-9;
    const double dlat = radius_m / kMetersPerDegLat * margin + 1e-12;
    double max_abs_lat = std::min(90.0, std::max(std::abs(center.lat - dlat), std::abs(center.lat + dlat)));
    double cos_lat = std::cos(deg2rad(max_abs_lat));
    if (cos_lat < 1e-6) cos_lat = 1e-6;  // near-pole: scan a wide band, exact check prunes
    const double dlon = std::min(360.0, radius_m / (kMetersPerDegLat * cos_lat) * margin + 1e-12);

    const std::int64_t cy0 = cell_coord(center.lat - dlat, cell_deg_);
    const std::int64_t cy1 = cell_coord(center.lat + dlat, cell_deg_);
    const std::int64_t cx0 = cell_coord(center.lon - dlon, cell_deg_);
    const std::int64_t cx1 = cell_coord(center.lon + dlon, cell_deg_);

    for (std::int64_t cy = cy0; cy <= cy1; ++cy) {
        for (std::int64_t cx = cx0; cx <= cx1; ++cx) {
            // Candidate cells may wrap the antimeridian; normalize the lon
            // cell index into the canonical [-180, 180) band.
            std::int64_t cells_per_wrap = static_cast<std::int64_t>(std::llround(360.0 / cell_deg_));
            std::int64_t cxn = cx % cells_per_wrap;
            const std::int64_t lo = cell_coord(-180.0, cell_deg_);
            while (cxn < lo) cxn += cells_per_wrap;
            while (cxn >= lo + cells_per_wrap) cxn -= cells_per_wrap;
            auto it = cells_.find(cell_key(cxn, cy));
            if (it == cells_.end()) continue;
            for (std::uint32_t i : it->second) {
                if (haversine_m(center, points_[i]) <= radius_m) out.push_back(i);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string SelectionReport::to_json() const {
    nlohmann::json j;
    j["panos_selected"] = panos_selected;
    j["candidates"] = candidates;
    j["nulls_sampled"] = nulls_sampled;
    j["null_shortfall"] = null_shortfall;
    j["rejected_temporal"] = rejected_temporal;
    j["rejected_spatial"] = rejected_spatial;
    return j.dump(2) + "\n";
}

std::vector<std::string> select_panos(const PanoCatalog& cat, const RampDataset& ramps,
                                      double pano_radius_m) {
    std::vector<GeoPoint> pts;
    pts.reserve(ramps.ramps.size());
    for (const auto& r : ramps.ramps) pts.push_back(r.location);
    SpatialIndex index(std::move(pts));

    std::vector<std::string> out;
    for (const auto& p : cat.panos) {
        if (!index.within(p.location, pano_radius_m).empty()) out.push_back(p.pano_id);
    }
    return out;  // catalog is sorted by pano_id already
}

std::vector<LabelCandidate> label_candidates(const PanoMeta& pano, const RampDataset& ramps,
                                             const SpatialIndex& ramp_index, double cand_radius_m,
                                             SelectionReport* report) {
    std::vector<LabelCandidate> out;
    for (std::size_t i : ramp_index.within(pano.location, cand_radius_m)) {
        const CurbRampRecord& ramp = ramps.ramps[i];
        // A ramp installed on/after the capture date cannot appear in the
        // image; unknown install dates are assumed pre-existing.
        if (ramp.installed_on && !(*ramp.installed_on < pano.captured_on)) {
            if (report) ++report->rejected_temporal;
            continue;
        }
        LabelCandidate c;
        c.pano_id = pano.pano_id;
        c.ramp_id = ramp.ramp_id;
        c.distance_m = haversine_m(pano.location, ramp.location);
        c.bearing_deg = c.distance_m > 0.0 ? initial_bearing_deg(pano.location, ramp.location) : 0.0;
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(),
              [](const LabelCandidate& a, const LabelCandidate& b) { return a.ramp_id < b.ramp_id; });
    if (report) report->candidates += out.size();
    return out;
}

std::vector<std::string> sample_null_panos(const PanoCatalog& cat, const RampDataset& ramps,
                                           const std::vector<std::string>& positive_ids,
                                           double null_min_dist_m, double null_fraction,
                                           std::uint64_t seed, SelectionReport* report) {
    if (null_fraction < 0.0 || null_fraction >= 1.0) {
        throw std::invalid_argument("null_fraction must be in [0, 1)");
    }
    const std::size_t want = static_cast<std::size_t>(
        std::llround(null_fraction / (1.0 - null_fraction) * static_cast<double>(positive_ids.size())));

    std::vector<GeoPoint> pts;
    pts.reserve(ramps.ramps.size());
    for (const auto& r : ramps.ramps) pts.push_back(r.location);
    SpatialIndex index(std::move(pts));

    const std::set<std::string> positives(positive_ids.begin(), positive_ids.end());
    std::vector<std::string> eligible;
    for (const auto& p : cat.panos) {
        if (positives.count(p.pano_id)) continue;
        // Null panos must be clear of every ramp: nothing strictly inside
        // null_min_dist_m.
        if (index.within(p.location, std::nextafter(null_min_dist_m, 0.0)).empty()) {
            eligible.push_back(p.pano_id);
        } else if (report) {
            ++report->rejected_spatial;
        }
    }

    // `eligible` is sorted (catalog order); shuffle with the run seed and take
    // the prefix so the same seed always picks the same panos.
    Rng rng(Rng::mix(seed, 0x6e756c6cULL));  // "null" stream
    deterministic_shuffle(eligible, rng);
    if (eligible.size() > want) eligible.resize(want);
    std::sort(eligible.begin(), eligible.end());

    if (report) {
        report->nulls_sampled = eligible.size();
        report->null_shortfall = want > eligible.size() ? want - eligible.size() : 0;
    }
    return eligible;
}

}  // namespace ramplab
