#include "ramplab/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ramplab {

int heatmap_dim(int image_dim, int downscale) {
    return (image_dim + downscale - 1) / downscale;
}

Heatmap encode_heatmap(const std::vector<PointLabel>& points, int image_w, int image_h,
                       const HeatmapConfig& cfg) {
    if (image_w <= 0 || image_h <= 0) throw std::invalid_argument("bad image dims");
    if (cfg.downscale < 1 || cfg.sigma <= 0.0) throw std::invalid_argument("bad heatmap config");
    Heatmap hm(heatmap_dim(image_w, cfg.downscale), heatmap_dim(image_h, cfg.downscale));

    const double inv2s2 = 1.0 / (2.0 * cfg.sigma * cfg.sigma);
    // Beyond ~6 sigma the gaussian is < 1e-7 and cannot influence decode.
    const int reach = static_cast<int>(std::ceil(cfg.sigma * 6.0));

    for (const auto& p : points) {
        if (p.x < 0.0 || p.x >= image_w || p.y < 0.0 || p.y >= image_h) {
            throw std::invalid_argument("point label outside image bounds");
        }
        const double hx = p.x / cfg.downscale;
        const double hy = p.y / cfg.downscale;
        const int x0 = std::max(0, static_cast<int>(std::floor(hx)) - reach);
        const int x1 = std::min(hm.width - 1, static_cast<int>(std::ceil(hx)) + reach);
        const int y0 = std::max(0, static_cast<int>(std::floor(hy)) - reach);
        const int y1 = std::min(hm.height - 1, static_cast<int>(std::ceil(hy)) + reach);
        for (int y = y0; y <= y1; ++y) {
            const double dy = y - hy;
            for (int x = x0; x <= x1; ++x) {
                const double dx = x - hx;
                const double v = std::exp(-(dx * dx + dy * dy) * inv2s2);
                double& cell = hm.at(x, y);
                if (v > cell) cell = v;
            }
        }
    }
    return hm;
}

namespace {

struct Peak {
    int x = 0;
    int y = 0;
    double value = 0.0;
};

// Per-axis sub-cell offset from a quadratic fit through (ln w-1, ln w0,
// ln w+1); exact for gaussian peaks. Returns the offset in [-0.5, 0.5] and
// the fitted log-value at the vertex via `log_vertex`.
bool log_parabola(double wm, double w0, double wp, double& delta, double& log_vertex) {
    if (wm <= 0.0 || w0 <= 0.0 || wp <= 0.0) return false;
    const double a = std::log(wm);
    const double b = std::log(w0);
    const double c = std::log(wp);
    const double denom = a - 2.0 * b + c;
    if (!(denom < 0.0)) return false;  // not concave: flat plateau or noise
    double d = 0.5 * (a - c) / denom;
    if (d < -0.5) d = -0.5;
    if (d > 0.5) d = 0.5;
    delta = d;
    log_vertex = b - (a - c) * (a - c) / (8.0 * denom);
    return true;
}

}  // namespace

std::vector<PointLabel> decode_heatmap(const Heatmap& hm, int image_w, int image_h,
                                       const HeatmapConfig& cfg) {
    std::vector<Peak> candidates;
    for (int y = 0; y < hm.height; ++y) {
        for (int x = 0; x < hm.width; ++x) {
            const double v = hm.at(x, y);
            if (v < cfg.peak_threshold) continue;
            bool is_peak = true;
            for (int dy = -1; dy <= 1 && is_peak; ++dy) {
                for (int dx = -1; dx <= 1 && is_peak; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int nx = x + dx;
                    const int ny = y + dy;
                    if (nx < 0 || nx >= hm.width || ny < 0 || ny >= hm.height) continue;
                    const double nv = hm.at(nx, ny);
                    if (nv > v) is_peak = false;
                    // Plateau tie: the lexicographically smallest (y, x) cell
                    // of the plateau represents it.
                    if (nv == v && (ny < y || (ny == y && nx < x))) is_peak = false;
                }
            }
            if (is_peak) candidates.push_back({x, y, v});
        }
    }

    std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });

    // Greedy suppression: a peak within nms_radius cells of a stronger kept
    // peak is dropped.
    std::vector<Peak> kept;
    const double r2 = cfg.nms_radius * cfg.nms_radius;
    for (const auto& c : candidates) {
        bool suppressed = false;
        for (const auto& k : kept) {
            const double dx = c.x - k.x;
            const double dy = c.y - k.y;
            if (dx * dx + dy * dy <= r2) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(c);
    }

    std::vector<PointLabel> out;
    out.reserve(kept.size());
    for (const auto& k : kept) {
        double dx = 0.0, dy = 0.0;
        double vx = 0.0, vy = 0.0;
        bool fit_x = false, fit_y = false;
        if (k.x > 0 && k.x + 1 < hm.width) {
            fit_x = log_parabola(hm.at(k.x - 1, k.y), k.value, hm.at(k.x + 1, k.y), dx, vx);
        }
        if (k.y > 0 && k.y + 1 < hm.height) {
            fit_y = log_parabola(hm.at(k.x, k.y - 1), k.value, hm.at(k.x, k.y + 1), dy, vy);
        }
        if (!fit_x) dx = 0.0;
        if (!fit_y) dy = 0.0;

        PointLabel p;
        p.x = (k.x + dx) * cfg.downscale;
        p.y = (k.y + dy) * cfg.downscale;
        p.x = std::clamp(p.x, 0.0, static_cast<double>(image_w - 1));
        p.y = std::clamp(p.y, 0.0, static_cast<double>(image_h - 1));
        // Refined confidence: the fitted peak height. For a separable
        // gaussian ln A = Vx + Vy - ln w0 exactly; fall back to the raw cell
        // when a fit is unavailable.
        double conf = k.value;
        if (fit_x && fit_y) {
            conf = std::exp(vx + vy - std::log(k.value));
        } else if (fit_x) {
            conf = std::exp(vx);
        } else if (fit_y) {
            conf = std::exp(vy);
        }
        p.confidence = std::min(1.0, conf);
        p.source = "heatmap";
        out.push_back(std::move(p));
    }

    std::sort(out.begin(), out.end(), [](const PointLabel& a, const PointLabel& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.y != b.y) return a.y < b.y;
        return a.x < b.x;
    });
    return out;
}

std::vector<PointLabel> hflip_points(const std::vector<PointLabel>& points, int image_w) {
    std::vector<PointLabel> out = points;
    for (auto& p : out) p.x = (image_w - 1) - p.x;
    return out;
}

Heatmap hflip_heatmap(const Heatmap& hm) {
    Heatmap out(hm.width, hm.height);
    for (int y = 0; y < hm.height; ++y) {
        for (int x = 0; x < hm.width; ++x) {
            out.at(hm.width - 1 - x, y) = hm.at(x, y);
        }
    }
    return out;
}

}  // namespace ramplab
