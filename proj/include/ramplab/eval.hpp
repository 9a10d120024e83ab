#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ramplab/heatmap.hpp"

namespace ramplab {

struct MatchConfig {
    double radius_px = 88.0;        // proximity threshold in pano pixels
    bool strict_one_to_one = false; // see match_pano
};

// Distance on a horizontally periodic image: x wraps, y does not.
double wrap_distance_px(double x1, double y1, double x2, double y2, int image_w);

// Outcome of matching one pano's predictions against its ground truth.
//
// Default (overlap-tolerant) semantics:
//   - a prediction with no ground truth within radius is a false positive;
//   - a ground truth with any prediction within radius is detected;
//   - a prediction is a true positive iff it is the strongest prediction
//     (confidence desc, ties by (y, x)) within radius of at least one ground
//     truth; one prediction covering two ground truths is a single TP, and
//     both ground truths count as detected;
//   - remaining predictions (in radius of a ground truth but never the
//     strongest) are "ignored": neither TP nor FP.
//
// strict_one_to_one instead walks predictions by descending confidence and
// lets each claim the nearest unclaimed ground truth within radius; in-radius
// predictions that find everything claimed are ignored.
struct MatchResult {
    std::vector<PointLabel> true_positives;
    std::vector<PointLabel> false_positives;
    std::vector<PointLabel> ignored;
    std::vector<PointLabel> detected_gt;
    std::vector<PointLabel> missed_gt;
};

MatchResult match_pano(const std::vector<PointLabel>& preds, const std::vector<PointLabel>& gts,
                       int image_w, const MatchConfig& cfg = {});

// precision = TP / (TP + FP) over predictions; recall = detected / GT over
// ground truths. Undefined (nullopt) when a denominator is zero.
struct PrfSummary {
    std::size_t tp = 0, fp = 0, ignored = 0, detected = 0, missed = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
};

PrfSummary prf(const std::vector<MatchResult>& per_pano);

// Harmonic mean; undefined when p + r == 0.
std::optional<double> f_score(double precision, double recall);

// Predictions + ground truth for one pano, as fed to the benchmark.
struct PanoSample {
    std::string pano_id;
    int width = 4096;
    int height = 2048;
    std::vector<PointLabel> preds;
    std::vector<PointLabel> gts;
};

struct PrPoint {
    double threshold = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

struct PrCurve {
    std::vector<PrPoint> points;  // thresholds descending (recall ascending)
    double ap = 0.0;
};

// Sweeps the operating threshold over every distinct prediction confidence
// (descending), re-matching at each, and reports the all-points average
// precision with monotone (envelope) interpolation.
PrCurve pr_curve(const std::vector<PanoSample>& samples, const MatchConfig& cfg = {});

// pr_curve.csv bytes: "threshold,precision,recall" header + one row per
// curve point.
std::string pr_curve_csv(const PrCurve& curve);

}  // namespace ramplab
