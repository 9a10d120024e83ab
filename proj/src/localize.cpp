#include "ramplab/localize.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <map>
#include <stdexcept>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "ramplab/eval.hpp"

namespace ramplab {

std::vector<CropDetection> MarkerColorLocalizer::detect(const ImageRgb& crop) {
    struct Group {
        double sum_u = 0.0, sum_v = 0.0;
        int count = 0;
        int min_u = 1 << 30, max_u = -1, min_v = 1 << 30, max_v = -1;
    };
    std::map<std::pair<int, int>, Group> groups;  // keyed by (G, B)

    for (int v = 0; v < crop.height; ++v) {
        for (int u = 0; u < crop.width; ++u) {
            const Rgb c = crop.at(u, v);
            if (c[0] != 255) continue;
            Group& g = groups[{c[1], c[2]}];
            g.sum_u += u;
            g.sum_v += v;
            ++g.count;
            g.min_u = std::min(g.min_u, u);
            g.max_u = std::max(g.max_u, u);
            g.min_v = std::min(g.min_v, v);
            g.max_v = std::max(g.max_v, v);
        }
    }

    std::vector<CropDetection> out;
    for (const auto& [key, g] : groups) {
        if (g.count < min_pixels_) continue;
        // A disc cut by the crop boundary has a biased centroid; skip it and
        // let a better-aimed crop of the same pano pick it up.
        if (g.min_u == 0 || g.max_u == crop.width - 1 || g.min_v == 0 ||
            g.max_v == crop.height - 1) {
            continue;
        }
        out.push_back({g.sum_u / g.count, g.sum_v / g.count, 1.0});
    }
    return out;
}

std::vector<CropDetection> HeatmapRoundTripLocalizer::detect(const ImageRgb& crop) {
    const std::vector<CropDetection> raw = inner_->detect(crop);
    std::vector<PointLabel> pts;
    pts.reserve(raw.size());
    for (const auto& d : raw) {
        PointLabel p;
        p.x = d.u;
        p.y = d.v;
        p.confidence = d.confidence;
        pts.push_back(std::move(p));
    }
    const Heatmap hm = encode_heatmap(pts, crop.width, crop.height, cfg_);
    const std::vector<PointLabel> decoded = decode_heatmap(hm, crop.width, crop.height, cfg_);
    std::vector<CropDetection> out;
    out.reserve(decoded.size());
    for (const auto& p : decoded) out.push_back({p.x, p.y, p.confidence});
    return out;
}

// ===== External process bridge =====

ExternalProcessLocalizer::ExternalProcessLocalizer(std::vector<std::string> argv,
                                                   std::string scratch_dir)
    : argv_(std::move(argv)), scratch_dir_(std::move(scratch_dir)) {
    if (argv_.empty()) throw std::invalid_argument("external localizer needs a command");
    std::filesystem::create_directories(scratch_dir_);
}

ExternalProcessLocalizer::~ExternalProcessLocalizer() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    if (pid_ > 0) {
        int status = 0;
        waitpid(pid_, &status, 0);
    }
}

void ExternalProcessLocalizer::ensure_started() {
    if (pid_ > 0) return;
    int in_pipe[2];   // parent -> child stdin
    int out_pipe[2];  // child stdout -> parent
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw std::runtime_error("external localizer: pipe() failed");
    }
    pid_t pid = fork();
    if (pid < 0) throw std::runtime_error("external localizer: fork() failed");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        std::vector<char*> cargv;
        for (auto& a : argv_) cargv.push_back(a.data());
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    close(in_pipe[0]);
    close(out_pipe[1]);
}

std::vector<CropDetection> ExternalProcessLocalizer::detect(const ImageRgb& crop) {
    ensure_started();
    const std::string path =
        (std::filesystem::path(scratch_dir_) / ("crop_" + std::to_string(counter_++) + ".png"))
            .string();
    save_png(path, crop);
    struct Cleanup {
        const std::string& p;
        ~Cleanup() { ::unlink(p.c_str()); }
    } cleanup{path};

    nlohmann::json req;
    req["crop_path"] = path;
    std::string line = req.dump() + "\n";
    const char* data = line.data();
    std::size_t left = line.size();
    while (left > 0) {
        const ssize_t n = write(to_child_, data, left);
        if (n <= 0) {
            if (n < 0 && errno == EINTR) continue;
            throw std::runtime_error("external localizer: process closed stdin pipe");
        }
        data += n;
        left -= static_cast<std::size_t>(n);
    }

    // Read one response line (the child may batch writes arbitrarily).
    std::string resp;
    for (;;) {
        const auto nl = read_buf_.find('\n');
        if (nl != std::string::npos) {
            resp = read_buf_.substr(0, nl);
            read_buf_.erase(0, nl + 1);
            break;
        }
        char buf[4096];
        const ssize_t n = read(from_child_, buf, sizeof(buf));
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) throw std::runtime_error("external localizer: process exited mid-protocol");
        read_buf_.append(buf, static_cast<std::size_t>(n));
    }

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(resp);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(std::string("external localizer: bad response json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
        throw std::runtime_error("external localizer: response missing points[]");
    }
    std::vector<CropDetection> out;
    for (const auto& p : doc["points"]) {
        if (!p.contains("u") || !p.contains("v") || !p.contains("confidence")) {
            throw std::runtime_error("external localizer: point missing u/v/confidence");
        }
        out.push_back({p["u"].get<double>(), p["v"].get<double>(), p["confidence"].get<double>()});
    }
    return out;
}

LocalizeResult run_localizer(CropLocalizer& loc, const ImageRgb& crop) {
    LocalizeResult res;
    try {
        res.points = loc.detect(crop);
    } catch (const std::exception& e) {
        res.error = e.what();
        res.points.clear();
        return res;
    }
    std::sort(res.points.begin(), res.points.end(), [](const CropDetection& a, const CropDetection& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.v != b.v) return a.v < b.v;
        return a.u < b.u;
    });
    return res;
}

PanoLabelSet aggregate_crops(const PanoMeta& pano, const std::vector<CropResult>& crops,
                             double dedup_radius_px) {
    PanoLabelSet out;
    out.pano_id = pano.pano_id;

    std::vector<PointLabel> projected;
    for (const auto& cr : crops) {
        if (cr.points.empty()) {
            out.no_detection_ramp_ids.push_back(cr.spec.ramp_id);
            continue;
        }
        out.consumed_ramp_ids.push_back(cr.spec.ramp_id);
        for (const auto& d : cr.points) {
            const PanoPixel p = crop_point_to_pano({d.u, d.v}, cr.spec, pano);
            PointLabel lbl;
            lbl.x = p.x;
            lbl.y = std::min(p.y, static_cast<double>(pano.height - 1));
            lbl.confidence = d.confidence;
            lbl.source = "auto";
            lbl.ramp_id = cr.spec.ramp_id;
            projected.push_back(std::move(lbl));
        }
    }

    // Strongest-first greedy merge; order is a total one so input order never
    // matters.
    std::sort(projected.begin(), projected.end(), [](const PointLabel& a, const PointLabel& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.y != b.y) return a.y < b.y;
        if (a.x != b.x) return a.x < b.x;
        return a.ramp_id < b.ramp_id;
    });
    for (const auto& p : projected) {
        bool dup = false;
        for (const auto& kept : out.labels) {
            if (wrap_distance_px(p.x, p.y, kept.x, kept.y, pano.width) <= dedup_radius_px) {
                dup = true;
                break;
            }
        }
        if (!dup) out.labels.push_back(p);
    }

    std::sort(out.consumed_ramp_ids.begin(), out.consumed_ramp_ids.end());
    std::sort(out.no_detection_ramp_ids.begin(), out.no_detection_ramp_ids.end());
    return out;
}

}  // namespace ramplab
