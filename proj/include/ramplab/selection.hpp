#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ramplab/geo.hpp"
#include "ramplab/ingest.hpp"

namespace ramplab {

// Uniform lat/lon grid over a point set for radius queries. The grid is a
// conservative prefilter; every hit is confirmed with the exact great-circle
// distance, so results match a linear scan exactly.
class SpatialIndex {
public:
    explicit SpatialIndex(std::vector<GeoPoint> points);

    // Indices of all points with haversine_m(center, p) <= radius_m,
    // ascending. radius_m must be >= 0.
    std::vector<std::size_t> within(const GeoPoint& center, double radius_m) const;

    std::size_t size() const { return points_.size(); }
    const GeoPoint& point(std::size_t i) const { return points_[i]; }

private:
    std::vector<GeoPoint> points_;
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> cells_;
    double cell_deg_ = 0.0005;  // ~55 m of latitude per cell
};

// One (pano, ramp) pairing that survived the distance and temporal filters:
// the ramp should be visible from the pano.
struct LabelCandidate {
    std::string pano_id;
    std::string ramp_id;
    double distance_m = 0.0;
    double bearing_deg = 0.0;  // from pano toward ramp, [0, 360)
};

// Bookkeeping for one selection run; serialized into selection.json.
struct SelectionReport {
    std::size_t panos_selected = 0;
    std::size_t candidates = 0;
    std::size_t nulls_sampled = 0;
    std::size_t null_shortfall = 0;
    std::size_t rejected_temporal = 0;
    std::size_t rejected_spatial = 0;

    std::string to_json() const;
};

// Panos with at least one ramp within pano_radius_m (closed ball), sorted by
// pano_id.
std::vector<std::string> select_panos(const PanoCatalog& cat, const RampDataset& ramps,
                                      double pano_radius_m = 10.0);

// All ramps within cand_radius_m of the pano whose install date (when known)
// precedes the capture date. Sorted by ramp_id. Temporal rejections are
// tallied in `report` when given.
std::vector<LabelCandidate> label_candidates(const PanoMeta& pano, const RampDataset& ramps,
                                             const SpatialIndex& ramp_index,
                                             double cand_radius_m = 35.0,
                                             SelectionReport* report = nullptr);

// Negative panos: no ramp within null_min_dist_m. Samples enough that nulls
// make up null_fraction of (positives + nulls), i.e.
// round(null_fraction / (1 - null_fraction) * n_positives), seeded and
// deterministic. Shortfall is reported when the city cannot supply that many.
std::vector<std::string> sample_null_panos(const PanoCatalog& cat, const RampDataset& ramps,
                                           const std::vector<std::string>& positive_ids,
                                           double null_min_dist_m, double null_fraction,
                                           std::uint64_t seed, SelectionReport* report = nullptr);

}  // namespace ramplab
