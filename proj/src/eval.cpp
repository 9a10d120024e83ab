#include "ramplab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "ramplab/csv.hpp"

namespace ramplab {

double wrap_distance_px(double x1, double y1, double x2, double y2, int image_w) {
    double dx = std::abs(x1 - x2);
    dx = std::min(dx, image_w - dx);
    const double dy = y1 - y2;
    return std::hypot(dx, dy);
}

namespace {

// Strongest-first ordering shared by both matching modes.
bool stronger(const PointLabel& a, const PointLabel& b) {
    if (a.confidence != b.confidence) return a.confidence > b.confidence;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
}

}  // namespace

MatchResult match_pano(const std::vector<PointLabel>& preds, const std::vector<PointLabel>& gts,
                       int image_w, const MatchConfig& cfg) {
    if (cfg.radius_px < 0.0) throw std::invalid_argument("match radius must be >= 0");
    std::vector<std::size_t> order(preds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return stronger(preds[a], preds[b]); });

    // in_radius[g] = prediction indices within radius of gt g, strongest first.
    std::vector<std::vector<std::size_t>> in_radius(gts.size());
    std::vector<bool> pred_near_gt(preds.size(), false);
    for (std::size_t g = 0; g < gts.size(); ++g) {
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const std::size_t p = order[rank];
            if (wrap_distance_px(preds[p].x, preds[p].y, gts[g].x, gts[g].y, image_w) <=
                cfg.radius_px) {
                in_radius[g].push_back(p);
                pred_near_gt[p] = true;
            }
        }
    }

    MatchResult res;
    std::vector<bool> pred_tp(preds.size(), false);

    if (!cfg.strict_one_to_one) {
        for (std::size_t g = 0; g < gts.size(); ++g) {
            if (!in_radius[g].empty()) pred_tp[in_radius[g].front()] = true;
        }
        for (std::size_t g = 0; g < gts.size(); ++g) {
            (in_radius[g].empty() ? res.missed_gt : res.detected_gt).push_back(gts[g]);
        }
    } else {
        std::vector<bool> gt_claimed(gts.size(), false);
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            const std::size_t p = order[rank];
            double best_d = 0.0;
            std::size_t best_g = gts.size();
            for (std::size_t g = 0; g < gts.size(); ++g) {
                if (gt_claimed[g]) continue;
                const double d =
                    wrap_distance_px(preds[p].x, preds[p].y, gts[g].x, gts[g].y, image_w);
                if (d > cfg.radius_px) continue;
                if (best_g == gts.size() || d < best_d ||
                    (d == best_d && (gts[g].y < gts[best_g].y ||
                                     (gts[g].y == gts[best_g].y && gts[g].x < gts[best_g].x)))) {
                    best_d = d;
                    best_g = g;
                }
            }
            if (best_g != gts.size()) {
                gt_claimed[best_g] = true;
                pred_tp[p] = true;
            }
        }
        for (std::size_t g = 0; g < gts.size(); ++g) {
            (gt_claimed[g] ? res.detected_gt : res.missed_gt).push_back(gts[g]);
        }
    }

    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const std::size_t p = order[rank];
        if (pred_tp[p]) res.true_positives.push_back(preds[p]);
        else if (!pred_near_gt[p]) res.false_positives.push_back(preds[p]);
        else res.ignored.push_back(preds[p]);
    }
    return res;
}

PrfSummary prf(const std::vector<MatchResult>& per_pano) {
    PrfSummary s;
    for (const auto& m : per_pano) {
        s.tp += m.true_positives.size();
        s.fp += m.false_positives.size();
        s.ignored += m.ignored.size();
        s.detected += m.detected_gt.size();
        s.missed += m.missed_gt.size();
    }
    if (s.tp + s.fp > 0) s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
    if (s.detected + s.missed > 0) {
        s.recall = static_cast<double>(s.detected) / static_cast<double>(s.detected + s.missed);
    }
    if (s.precision && s.recall) s.f1 = f_score(*s.precision, *s.recall);
    return s;
}

std::optional<double> f_score(double precision, double recall) {
    if (precision + recall == 0.0) return std::nullopt;
    return 2.0 * precision * recall / (precision + recall);
}

PrCurve pr_curve(const std::vector<PanoSample>& samples, const MatchConfig& cfg) {
    std::set<double, std::greater<double>> thresholds;
    std::size_t total_gt = 0;
    for (const auto& s : samples) {
        for (const auto& p : s.preds) thresholds.insert(p.confidence);
        total_gt += s.gts.size();
    }

    PrCurve curve;
    for (double t : thresholds) {
        std::vector<MatchResult> matches;
        matches.reserve(samples.size());
        for (const auto& s : samples) {
            std::vector<PointLabel> kept;
            for (const auto& p : s.preds) {
                if (p.confidence >= t) kept.push_back(p);
            }
            matches.push_back(match_pano(kept, s.gts, s.width, cfg));
        }
        const PrfSummary m = prf(matches);
        PrPoint pt;
        pt.threshold = t;
        pt.precision = m.precision.value_or(0.0);
        pt.recall = total_gt > 0 ? m.recall.value_or(0.0) : 0.0;
        curve.points.push_back(pt);
    }

    // All-points AP with the monotone envelope: each recall increment is
    // credited with the best precision achievable at that recall or beyond.
    double ap = 0.0;
    double prev_recall = 0.0;
    std::vector<double> env(curve.points.size());
    double best = 0.0;
    for (std::size_t i = curve.points.size(); i-- > 0;) {
        best = std::max(best, curve.points[i].precision);
        env[i] = best;
    }
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        ap += (curve.points[i].recall - prev_recall) * env[i];
        prev_recall = curve.points[i].recall;
    }
    curve.ap = ap;
    return curve;
}

std::string pr_curve_csv(const PrCurve& curve) {
    std::string out = "threshold,precision,recall\n";
    for (const auto& p : curve.points) {
        out += csv_join({format_double(p.threshold), format_double(p.precision),
                         format_double(p.recall)});
        out += '\n';
    }
    return out;
}

}  // namespace ramplab
