#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ramplab/dataset.hpp"
#include "ramplab/geo.hpp"
#include "ramplab/image.hpp"
#include "ramplab/ingest.hpp"
#include "ramplab/selection.hpp"

namespace ramplab {

// Parameters of the procedurally generated test city. The defaults are tuned
// so that, by construction, the full auto-labeling pipeline can reach ~perfect
// precision/recall on the result:
//   - clusters sit on a coarse grid (cell_pitch_m far above any linking or
//     sampling radius), so clusters never interact;
//   - every ramped pano gets a ramp inside the pano selection radius;
//   - fiducials are spaced so no two ever overlap from any pano's viewpoint.
struct WorldSpec {
    std::uint64_t seed = 1;
    int n_panos = 48;
    double null_cell_fraction = 0.22;  // chance a grid cell holds a ramp-free pano
    GeoPoint origin{47.60, -122.33};
    double cell_pitch_m = 220.0;
    double cluster_radius_m = 28.0;  // panos of one cluster stay inside this
    double pano_min_sep_m = 8.0;
    double first_ramp_min_m = 3.0;
    double first_ramp_max_m = 9.5;  // keeps the owner pano selectable at 10 m
    double extra_ramp_min_m = 3.0;
    double extra_ramp_max_m = 25.0;
    int max_extra_ramps = 2;
    double marker_radius_m = 0.6;
    double camera_height_m = 2.5;
    double render_limit_m = 35.0;   // matches the candidate radius
    double future_ramp_rate = 0.15;   // extra ramps dated after every capture
    double missing_date_rate = 0.10;  // ramps with no install date at all
    int pano_width = 4096;
    int pano_height = 2048;
    std::string city = "synthville";
};

// A generated city: catalogs in the exact shapes the ingest stage produces,
// per-pano analytic ground truth, and a deterministic renderer.
struct SyntheticWorld {
    WorldSpec spec;
    RampDataset ramps;
    PanoCatalog catalog;
    // pano_id -> ground-truth points (pano pixels, source "ground_truth"),
    // one per ramp visible from that pano (within render_limit_m and, when
    // dated, installed before capture). Zero-ramp panos have an empty entry.
    std::map<std::string, std::vector<PointLabel>> ground_truth;

    // Renders one pano: flat ground/sky plus every visible ramp drawn as a
    // camera-facing fiducial disc (see render notes in synth.cpp). Pure
    // function of (spec, pano_id) — bit-identical on every call.
    ImageRgb render(const std::string& pano_id) const;

    std::vector<LabelRecord> ground_truth_records() const;

    // Marker bookkeeping needed by render(); mirrors `ramps` by index.
    struct Marker {
        GeoPoint pos;
        std::optional<Date> installed_on;
        Rgb color;
    };
    std::vector<Marker> markers;
};

SyntheticWorld generate_world(const WorldSpec& spec);

// Fiducial palette: the red channel value 255 is reserved for markers (sky
// and ground stay far below it, and bilinear blending cannot reach it), and
// (G, B) encode the marker ordinal.
Rgb marker_color(std::size_t ordinal);

// ImageProvider view over a generated world (renders on demand). The world
// must outlive the provider.
class SyntheticImageProvider : public ImageProvider {
public:
    explicit SyntheticImageProvider(const SyntheticWorld& world) : world_(&world) {}
    std::optional<ImageRgb> fetch(const std::string& pano_id) override;

private:
    const SyntheticWorld* world_;
};

// Degrades labels for robustness experiments: gaussian pixel jitter (wrapped
// in x, clamped in y) plus random drops, all seeded.
struct PerturbConfig {
    double noise_px = 0.0;
    double drop_rate = 0.0;
    std::uint64_t seed = 0;
};

struct PerturbLog {
    std::size_t moved = 0;
    std::vector<std::string> dropped;  // "pano_id:ramp_id" (or :index)
};

std::vector<LabelRecord> perturb_labels(const std::vector<LabelRecord>& records,
                                        const PerturbConfig& cfg, PerturbLog* log = nullptr);

}  // namespace ramplab
