#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ramplab/geo.hpp"
#include "ramplab/heatmap.hpp"
#include "ramplab/projection.hpp"

namespace ramplab {

// One point found in a crop, in crop pixel coordinates.
struct CropDetection {
    double u = 0.0;
    double v = 0.0;
    double confidence = 1.0;
};

// Finds curb-ramp points in a single perspective crop. Implementations throw
// on hard failures; run_localizer() converts that into a per-crop error so a
// batch never dies on one bad crop.
class CropLocalizer {
public:
    virtual ~CropLocalizer() = default;
    virtual std::vector<CropDetection> detect(const ImageRgb& crop) = 0;
    virtual std::string name() const = 0;
};

// Detects the synthetic fiducial discs by their reserved color channel
// (R = 255 appears nowhere else in rendered scenes, and resampling cannot
// manufacture it). Pixels are grouped by their (G, B) identity; a group
// touching the crop edge is rejected as truncated, as are groups smaller
// than min_pixels. Reports each group's centroid at confidence 1.
class MarkerColorLocalizer : public CropLocalizer {
public:
    explicit MarkerColorLocalizer(int min_pixels = 10) : min_pixels_(min_pixels) {}
    std::vector<CropDetection> detect(const ImageRgb& crop) override;
    std::string name() const override { return "marker-color"; }

private:
    int min_pixels_;
};

// Wraps another localizer so its points take a full encode -> decode round
// trip through the gaussian heatmap codec — the same representation a learned
// crop model would emit.
class HeatmapRoundTripLocalizer : public CropLocalizer {
public:
    HeatmapRoundTripLocalizer(std::shared_ptr<CropLocalizer> inner, HeatmapConfig cfg = {})
        : inner_(std::move(inner)), cfg_(cfg) {}
    std::vector<CropDetection> detect(const ImageRgb& crop) override;
    std::string name() const override { return inner_->name() + "+heatmap"; }

private:
    std::shared_ptr<CropLocalizer> inner_;
    HeatmapConfig cfg_;
};

// Bridges to an external localizer process speaking line-delimited JSON:
// for each crop we write a PNG to a scratch path and send
//   {"crop_path": "/abs/path.png"}\n
// on its stdin; it must answer exactly one line
//   {"points": [{"u": .., "v": .., "confidence": ..}, ...]}\n
// on stdout. The process is spawned on first use and reused; protocol or
// process failures throw (and surface as per-crop errors upstream).
class ExternalProcessLocalizer : public CropLocalizer {
public:
    explicit ExternalProcessLocalizer(std::vector<std::string> argv, std::string scratch_dir);
    ~ExternalProcessLocalizer() override;
    std::vector<CropDetection> detect(const ImageRgb& crop) override;
    std::string name() const override { return "external"; }

private:
    void ensure_started();
    std::vector<std::string> argv_;
    std::string scratch_dir_;
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string read_buf_;
    std::uint64_t counter_ = 0;
};

// Runs a localizer on one crop; never throws. On failure `error` is non-empty
// and points is empty. Points are sorted by confidence descending then (v, u).
struct LocalizeResult {
    std::vector<CropDetection> points;
    std::string error;
};

LocalizeResult run_localizer(CropLocalizer& loc, const ImageRgb& crop);

// Everything the aggregation step needs to know about one processed crop.
struct CropResult {
    CropSpec spec;
    std::vector<CropDetection> points;
};

// Pano-level labels produced from a set of crop results, plus bookkeeping.
struct PanoLabelSet {
    std::string pano_id;
    std::vector<PointLabel> labels;               // deduplicated, pano pixel coords
    std::vector<std::string> consumed_ramp_ids;   // crops that yielded >= 1 point
    std::vector<std::string> no_detection_ramp_ids;  // crops that yielded none
};

// Projects every crop detection back onto the pano and merges duplicates
// seen from overlapping crops: points within dedup_radius_px (wrap-aware)
// of an already-kept stronger point are dropped. Deterministic under crop
// and detection reordering.
PanoLabelSet aggregate_crops(const PanoMeta& pano, const std::vector<CropResult>& crops,
                             double dedup_radius_px = 44.0);

}  // namespace ramplab
