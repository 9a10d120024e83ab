#include "ramplab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ramplab/csv.hpp"
#include "ramplab/dataset.hpp"
#include "ramplab/eval.hpp"
#include "ramplab/fsio.hpp"
#include "ramplab/localize.hpp"
#include "ramplab/projection.hpp"
#include "ramplab/selection.hpp"
#include "ramplab/synth.hpp"

namespace ramplab {

namespace fs = std::filesystem;

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t k = std::max<std::size_t>(
        1, std::min<std::size_t>(n, workers > 0 ? static_cast<std::size_t>(workers) : 1));
    if (k == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mtx;
    std::exception_ptr first_err;
    auto body = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_err) first_err = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(k);
    for (std::size_t i = 0; i < k; ++i) threads.emplace_back(body);
    for (auto& t : threads) t.join();
    if (first_err) std::rethrow_exception(first_err);
}

namespace {

std::string out_path(const RunConfig& cfg, const std::string& rel) {
    return (fs::path(cfg.out_dir) / rel).string();
}

std::string crop_stem(const std::string& pano_id, const std::string& ramp_id) {
    return pano_id + "_" + ramp_id;
}

RampDataset load_ramps(const RunConfig& cfg) {
    ColumnMap cols;
    cols.id = "ramp_id";
    cols.installed_on = "installed_on";
    std::istringstream in(read_file(out_path(cfg, "ramps.csv")));
    std::string city = read_file(out_path(cfg, "city.txt"));
    while (!city.empty() && (city.back() == '\n' || city.back() == '\r')) city.pop_back();
    return parse_ramp_csv(in, cols, city);
}

PanoCatalog load_catalog(const RunConfig& cfg) {
    std::istringstream in(read_file(out_path(cfg, "panos.csv")));
    return parse_pano_csv(in);
}

std::vector<std::string> load_id_lines(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

std::string id_lines(const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) {
        out += id;
        out += '\n';
    }
    return out;
}

struct CandidateRow {
    std::string pano_id;
    std::string ramp_id;
    double distance_m = 0.0;
    double bearing_deg = 0.0;
};

std::vector<CandidateRow> load_candidates(const RunConfig& cfg) {
    std::istringstream in(read_file(out_path(cfg, "selection/candidates.csv")));
    auto rows = read_csv(in);
    static const std::vector<std::string> kHeader = {"pano_id", "ramp_id", "distance_m",
                                                     "bearing_deg"};
    if (rows.empty() || rows.front().fields != kHeader) {
        throw std::runtime_error("candidates.csv: bad or missing header");
    }
    std::vector<CandidateRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& f = rows[i].fields;
        if (f.size() != 4) throw std::runtime_error("candidates.csv: bad row");
        CandidateRow c;
        c.pano_id = f[0];
        c.ramp_id = f[1];
        c.distance_m = std::stod(f[2]);
        c.bearing_deg = std::stod(f[3]);
        out.push_back(std::move(c));
    }
    return out;
}

CropSpec make_crop_spec(const RunConfig& cfg, const std::string& pano_id,
                        const std::string& ramp_id, double yaw_deg) {
    CropSpec spec;
    spec.pano_id = pano_id;
    spec.ramp_id = ramp_id;
    spec.yaw_deg = yaw_deg;
    spec.pitch_deg = cfg.pitch;
    spec.fov_deg = cfg.fov;
    return spec;
}

HeatmapConfig heatmap_config(const RunConfig& cfg) {
    HeatmapConfig hc;
    hc.sigma = cfg.sigma;
    hc.peak_threshold = cfg.peak_thresh;
    hc.downscale = cfg.downscale;
    hc.nms_radius = cfg.nms_radius;
    return hc;
}

std::string images_root(const RunConfig& cfg) {
    return cfg.images_dir.empty() ? out_path(cfg, "images") : cfg.images_dir;
}

void progress(const char* stage, const std::string& msg) {
    std::fprintf(stderr, "[%s] %s\n", stage, msg.c_str());
}

}  // namespace

void stage_synth(const RunConfig& cfg) {
    WorldSpec ws;
    ws.seed = cfg.seed;
    ws.n_panos = cfg.synth_panos;
    ws.render_limit_m = cfg.cand_radius;
    const SyntheticWorld world = generate_world(ws);

    write_file_atomic(out_path(cfg, "ramps.csv"), to_csv(world.ramps));
    write_file_atomic(out_path(cfg, "panos.csv"), to_csv(world.catalog));
    write_file_atomic(out_path(cfg, "city.txt"), ws.city + "\n");
    write_file_atomic(out_path(cfg, "ground_truth.jsonl"),
                      labels_to_jsonl(world.ground_truth_records()));

    fs::create_directories(out_path(cfg, "images"));
    parallel_for(world.catalog.panos.size(), cfg.workers, [&](std::size_t i) {
        const auto& pano = world.catalog.panos[i];
        const auto png = encode_png(world.render(pano.pano_id));
        write_file_atomic(out_path(cfg, "images/" + pano.pano_id + ".png"),
                          std::string(png.begin(), png.end()));
    });
    progress("synth", std::to_string(world.catalog.panos.size()) + " panos, " +
                          std::to_string(world.ramps.ramps.size()) + " ramps");
}

void stage_ingest(const RunConfig& cfg) {
    if (cfg.ramp_file.empty() || cfg.pano_catalog.empty()) {
        throw std::runtime_error("ingest needs --ramps and --panos");
    }
    IngestStats rst;
    RampDataset ramps;
    {
        const std::string text = read_file(cfg.ramp_file);
        std::istringstream in(text);
        const bool geojson = cfg.ramp_format == "geojson" ||
                             (cfg.ramp_format == "auto" &&
                              (cfg.ramp_file.ends_with(".geojson") || cfg.ramp_file.ends_with(".json")));
        ramps = geojson ? parse_ramp_geojson(in, cfg.columns, cfg.city, &rst)
                        : parse_ramp_csv(in, cfg.columns, cfg.city, &rst);
    }
    IngestStats pst;
    PanoCatalog cat;
    {
        std::istringstream in(read_file(cfg.pano_catalog));
        cat = parse_pano_csv(in, &pst);
    }
    write_file_atomic(out_path(cfg, "ramps.csv"), to_csv(ramps));
    write_file_atomic(out_path(cfg, "panos.csv"), to_csv(cat));
    write_file_atomic(out_path(cfg, "city.txt"), cfg.city + "\n");
    progress("ingest", std::to_string(ramps.ramps.size()) + " ramps (" +
                           std::to_string(rst.rows_skipped) + " skipped, " +
                           std::to_string(rst.missing_install_dates) + " undated), " +
                           std::to_string(cat.panos.size()) + " panos (" +
                           std::to_string(pst.headings_normalized) + " headings normalized)");
}

void stage_select(const RunConfig& cfg) {
    const RampDataset ramps = load_ramps(cfg);
    const PanoCatalog cat = load_catalog(cfg);

    SelectionReport report;
    const std::vector<std::string> positives = select_panos(cat, ramps, cfg.pano_radius);
    report.panos_selected = positives.size();

    std::vector<GeoPoint> ramp_pts;
    ramp_pts.reserve(ramps.ramps.size());
    for (const auto& r : ramps.ramps) ramp_pts.push_back(r.location);
    const SpatialIndex ramp_index(ramp_pts);

    std::string cand_csv = "pano_id,ramp_id,distance_m,bearing_deg\n";
    for (const auto& id : positives) {
        const PanoMeta* meta = cat.find(id);
        for (const auto& c : label_candidates(*meta, ramps, ramp_index, cfg.cand_radius, &report)) {
            cand_csv += csv_join({c.pano_id, c.ramp_id, format_double(c.distance_m),
                                  format_double(c.bearing_deg)});
            cand_csv += '\n';
        }
    }

    const std::vector<std::string> nulls = sample_null_panos(
        cat, ramps, positives, cfg.null_dist, cfg.null_frac, cfg.seed, &report);

    write_file_atomic(out_path(cfg, "selection/candidates.csv"), cand_csv);
    write_file_atomic(out_path(cfg, "selection/positives.txt"), id_lines(positives));
    write_file_atomic(out_path(cfg, "selection/nulls.txt"), id_lines(nulls));
    write_file_atomic(out_path(cfg, "selection/selection.json"), report.to_json());
    progress("select", std::to_string(report.panos_selected) + " panos, " +
                           std::to_string(report.candidates) + " candidates, " +
                           std::to_string(report.nulls_sampled) + " nulls (" +
                           std::to_string(report.null_shortfall) + " short)");
}

void stage_crops(const RunConfig& cfg) {
    const PanoCatalog cat = load_catalog(cfg);
    const std::vector<CandidateRow> cands = load_candidates(cfg);

    std::map<std::string, std::vector<const CandidateRow*>> by_pano;
    for (const auto& c : cands) by_pano[c.pano_id].push_back(&c);
    std::vector<const std::pair<const std::string, std::vector<const CandidateRow*>>*> panos;
    for (const auto& e : by_pano) panos.push_back(&e);

    DirectoryImageProvider provider(images_root(cfg));
    fs::create_directories(out_path(cfg, "crops"));

    const auto t0 = std::chrono::steady_clock::now();
    std::atomic<std::size_t> crop_count{0};
    parallel_for(panos.size(), cfg.workers, [&](std::size_t i) {
        const auto& [pano_id, rows] = *panos[i];
        const PanoMeta* meta = cat.find(pano_id);
        if (!meta) throw std::runtime_error("candidate references unknown pano " + pano_id);
        const auto img = fetch_pano_image(provider, *meta);
        if (!img) throw std::runtime_error("no image for selected pano " + pano_id);
        for (const CandidateRow* c : rows) {
            const CropSpec spec = make_crop_spec(cfg, c->pano_id, c->ramp_id, c->bearing_deg);
            const ImageRgb crop = extract_crop(*img, *meta, spec);
            const auto png = encode_png(crop);
            const std::string stem = "crops/" + crop_stem(c->pano_id, c->ramp_id);
            write_file_atomic(out_path(cfg, stem + ".png"), std::string(png.begin(), png.end()));
            write_file_atomic(out_path(cfg, stem + ".json"), spec.to_json());
            ++crop_count;
        }
    });
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%zu crops in %.2fs (%.1f/s)", crop_count.load(), secs,
                  secs > 0 ? crop_count.load() / secs : 0.0);
    progress("crops", buf);
}

void stage_localize(const RunConfig& cfg) {
    const std::vector<CandidateRow> cands = load_candidates(cfg);
    const HeatmapConfig hc = heatmap_config(cfg);

    // The external bridge talks to one child over one pipe pair, so it cannot
    // be shared across threads; it runs the batch serially.
    std::unique_ptr<ExternalProcessLocalizer> external;
    int workers = cfg.workers;
    if (cfg.localizer == "external") {
        if (cfg.localizer_cmd.empty()) {
            throw std::runtime_error("external localizer needs --localizer-cmd");
        }
        std::vector<std::string> argv;
        std::istringstream words(cfg.localizer_cmd);
        std::string w;
        while (words >> w) argv.push_back(w);
        external = std::make_unique<ExternalProcessLocalizer>(argv, out_path(cfg, "tmp"));
        workers = 1;
    } else if (cfg.localizer != "marker") {
        throw std::runtime_error("unknown localizer: " + cfg.localizer);
    }

    if (cfg.save_heatmaps) fs::create_directories(out_path(cfg, "localize/heatmaps"));

    std::vector<std::string> lines(cands.size());
    parallel_for(cands.size(), workers, [&](std::size_t i) {
        const CandidateRow& c = cands[i];
        const std::string stem = crop_stem(c.pano_id, c.ramp_id);
        const ImageRgb crop = load_image(out_path(cfg, "crops/" + stem + ".png"));
        const CropSpec spec = CropSpec::from_json(read_file(out_path(cfg, "crops/" + stem + ".json")));

        LocalizeResult res;
        if (external) {
            res = run_localizer(*external, crop);
        } else {
            auto marker = std::make_shared<MarkerColorLocalizer>();
            if (cfg.heatmap_roundtrip) {
                HeatmapRoundTripLocalizer wrapped(marker, hc);
                res = run_localizer(wrapped, crop);
            } else {
                res = run_localizer(*marker, crop);
            }
        }

        if (cfg.save_heatmaps) {
            std::vector<PointLabel> pts;
            for (const auto& d : res.points) {
                PointLabel p;
                p.x = d.u;
                p.y = d.v;
                p.confidence = d.confidence;
                pts.push_back(std::move(p));
            }
            const Heatmap hm = encode_heatmap(pts, crop.width, crop.height, hc);
            save_gray16_png(out_path(cfg, "localize/heatmaps/" + stem + ".png"), hm.width,
                            hm.height, hm.values);
        }

        nlohmann::json row;
        row["pano_id"] = c.pano_id;
        row["ramp_id"] = c.ramp_id;
        row["yaw_deg"] = spec.yaw_deg;
        row["pitch_deg"] = spec.pitch_deg;
        row["fov_deg"] = spec.fov_deg;
        row["points"] = nlohmann::json::array();
        for (const auto& d : res.points) {
            nlohmann::json p;
            p["u"] = d.u;
            p["v"] = d.v;
            p["confidence"] = d.confidence;
            row["points"].push_back(p);
        }
        if (!res.error.empty()) row["error"] = res.error;
        lines[i] = row.dump();
    });

    std::string out;
    for (const auto& l : lines) {
        out += l;
        out += '\n';
    }
    write_file_atomic(out_path(cfg, "localize/detections.jsonl"), out);
    progress("localize", std::to_string(cands.size()) + " crops");
}

void stage_aggregate(const RunConfig& cfg) {
    const PanoCatalog cat = load_catalog(cfg);
    std::string city = read_file(out_path(cfg, "city.txt"));
    while (!city.empty() && (city.back() == '\n' || city.back() == '\r')) city.pop_back();
    const auto positives = load_id_lines(out_path(cfg, "selection/positives.txt"));
    const auto nulls = load_id_lines(out_path(cfg, "selection/nulls.txt"));

    struct PanoInput {
        std::vector<CropResult> crops;
        std::vector<std::string> errors;
    };
    std::map<std::string, PanoInput> inputs;
    {
        std::istringstream in(read_file(out_path(cfg, "localize/detections.jsonl")));
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const nlohmann::json j = nlohmann::json::parse(line);
            const std::string pano_id = j.at("pano_id").get<std::string>();
            const std::string ramp_id = j.at("ramp_id").get<std::string>();
            if (j.contains("error")) {
                inputs[pano_id].errors.push_back(ramp_id);
                continue;
            }
            CropResult cr;
            cr.spec = make_crop_spec(cfg, pano_id, ramp_id, j.at("yaw_deg").get<double>());
            cr.spec.pitch_deg = j.at("pitch_deg").get<double>();
            cr.spec.fov_deg = j.at("fov_deg").get<double>();
            for (const auto& p : j.at("points")) {
                cr.points.push_back({p.at("u").get<double>(), p.at("v").get<double>(),
                                     p.at("confidence").get<double>()});
            }
            inputs[pano_id].crops.push_back(std::move(cr));
        }
    }

    std::vector<LabelRecord> records;
    std::string flags;
    for (const auto& pano_id : positives) {
        const PanoMeta* meta = cat.find(pano_id);
        if (!meta) throw std::runtime_error("positive pano missing from catalog: " + pano_id);
        auto it = inputs.find(pano_id);
        static const PanoInput kEmpty;
        const PanoInput& input = it == inputs.end() ? kEmpty : it->second;
        PanoLabelSet set = aggregate_crops(*meta, input.crops, cfg.dedup_radius);

        LabelRecord rec;
        rec.pano_id = pano_id;
        rec.city = city;
        rec.width = meta->width;
        rec.height = meta->height;
        rec.labels = std::move(set.labels);
        records.push_back(std::move(rec));

        nlohmann::json f;
        f["pano_id"] = pano_id;
        f["consumed"] = set.consumed_ramp_ids;
        f["no_detection"] = set.no_detection_ramp_ids;
        std::vector<std::string> errs = input.errors;
        std::sort(errs.begin(), errs.end());
        f["errors"] = errs;
        flags += f.dump();
        flags += '\n';
    }
    for (const auto& pano_id : nulls) {
        const PanoMeta* meta = cat.find(pano_id);
        if (!meta) throw std::runtime_error("null pano missing from catalog: " + pano_id);
        LabelRecord rec;
        rec.pano_id = pano_id;
        rec.city = city;
        rec.width = meta->width;
        rec.height = meta->height;
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(),
              [](const LabelRecord& a, const LabelRecord& b) { return a.pano_id < b.pano_id; });

    write_file_atomic(out_path(cfg, "labels/labels.jsonl"), labels_to_jsonl(records));
    write_file_atomic(out_path(cfg, "labels/flags.jsonl"), flags);
    std::size_t total = 0;
    for (const auto& r : records) total += r.labels.size();
    progress("aggregate", std::to_string(total) + " labels on " + std::to_string(records.size()) +
                              " panos");
}

void stage_split(const RunConfig& cfg) {
    const PanoCatalog cat = load_catalog(cfg);
    auto records = labels_from_jsonl_file(out_path(cfg, "labels/labels.jsonl"));

    PanoCatalog subset;
    for (const auto& r : records) {
        const PanoMeta* meta = cat.find(r.pano_id);
        if (!meta) throw std::runtime_error("labeled pano missing from catalog: " + r.pano_id);
        subset.panos.push_back(*meta);
    }
    const auto components = spatial_components(subset, cfg.link_dist);
    const SplitAssignment assignment = assign_splits(components, cfg.split_fracs, cfg.seed);

    for (auto& r : records) {
        r.split = split_name(assignment.by_pano.at(r.pano_id));
    }
    write_file_atomic(out_path(cfg, "split/splits.json"), assignment.to_json());
    write_file_atomic(out_path(cfg, "split/labels.jsonl"), labels_to_jsonl(records));
    progress("split", std::to_string(components.size()) + " components -> train " +
                          std::to_string(assignment.counts[0]) + ", val " +
                          std::to_string(assignment.counts[1]) + ", test " +
                          std::to_string(assignment.counts[2]));
}

void stage_stats(const RunConfig& cfg) {
    const std::string split_path = out_path(cfg, "split/labels.jsonl");
    const std::string raw_path = out_path(cfg, "labels/labels.jsonl");
    const auto records =
        labels_from_jsonl_file(fs::exists(split_path) ? split_path : raw_path);
    write_file_atomic(out_path(cfg, "stats/stats.json"), dataset_stats(records).to_json());
    progress("stats", "ok");
}

void stage_eval(const RunConfig& cfg) {
    const std::string gt_path =
        cfg.gt_file.empty() ? out_path(cfg, "ground_truth.jsonl") : cfg.gt_file;
    std::string preds_path = cfg.labels_file;
    if (preds_path.empty()) {
        const std::string split_path = out_path(cfg, "split/labels.jsonl");
        preds_path = fs::exists(split_path) ? split_path : out_path(cfg, "labels/labels.jsonl");
    }

    const auto gt_records = labels_from_jsonl_file(gt_path);
    const auto pred_records = labels_from_jsonl_file(preds_path);

    std::map<std::string, const LabelRecord*> gts, preds;
    for (const auto& r : gt_records) gts[r.pano_id] = &r;
    for (const auto& r : pred_records) preds[r.pano_id] = &r;

    std::set<std::string> ids;
    for (const auto& [id, r] : gts) ids.insert(id);
    for (const auto& [id, r] : preds) ids.insert(id);

    std::vector<PanoSample> samples;
    for (const auto& id : ids) {
        PanoSample s;
        s.pano_id = id;
        const LabelRecord* g = gts.count(id) ? gts.at(id) : nullptr;
        const LabelRecord* p = preds.count(id) ? preds.at(id) : nullptr;
        if (g && p && (g->width != p->width || g->height != p->height)) {
            throw std::runtime_error("pano " + id + " has mismatched dims between files");
        }
        const LabelRecord* dims = g ? g : p;
        s.width = dims->width;
        s.height = dims->height;
        if (g) s.gts = g->labels;
        if (p) s.preds = p->labels;
        samples.push_back(std::move(s));
    }

    const MatchConfig mc{cfg.match_radius, false};
    const PrCurve curve = pr_curve(samples, mc);

    std::vector<MatchResult> matches;
    std::string errors;
    for (const auto& s : samples) {
        std::vector<PointLabel> kept;
        for (const auto& p : s.preds) {
            if (p.confidence >= cfg.eval_threshold) kept.push_back(p);
        }
        MatchResult m = match_pano(kept, s.gts, s.width, mc);
        for (const auto& p : m.false_positives) {
            nlohmann::json e;
            e["type"] = "fp";
            e["pano_id"] = s.pano_id;
            e["x"] = p.x;
            e["y"] = p.y;
            e["confidence"] = p.confidence;
            errors += e.dump();
            errors += '\n';
        }
        for (const auto& g : m.missed_gt) {
            nlohmann::json e;
            e["type"] = "fn";
            e["pano_id"] = s.pano_id;
            e["x"] = g.x;
            e["y"] = g.y;
            if (!g.ramp_id.empty()) e["ramp_id"] = g.ramp_id;
            errors += e.dump();
            errors += '\n';
        }
        matches.push_back(std::move(m));
    }
    const PrfSummary summary = prf(matches);

    nlohmann::json metrics;
    metrics["ap"] = curve.ap;
    metrics["threshold"] = cfg.eval_threshold;
    metrics["tp"] = summary.tp;
    metrics["fp"] = summary.fp;
    metrics["ignored"] = summary.ignored;
    metrics["detected"] = summary.detected;
    metrics["missed"] = summary.missed;
    metrics["panos"] = samples.size();
    if (summary.precision) metrics["precision"] = *summary.precision;
    else metrics["precision"] = nullptr;
    if (summary.recall) metrics["recall"] = *summary.recall;
    else metrics["recall"] = nullptr;
    if (summary.f1) metrics["f1"] = *summary.f1;
    else metrics["f1"] = nullptr;

    write_file_atomic(out_path(cfg, "eval/metrics.json"), metrics.dump(2) + "\n");
    write_file_atomic(out_path(cfg, "eval/pr_curve.csv"), pr_curve_csv(curve));
    write_file_atomic(out_path(cfg, "eval/errors.jsonl"), errors);

    char buf[160];
    std::snprintf(buf, sizeof(buf), "AP %.4f  P %.4f  R %.4f (tp %zu fp %zu missed %zu)", curve.ap,
                  summary.precision.value_or(0.0), summary.recall.value_or(0.0), summary.tp,
                  summary.fp, summary.missed);
    progress("eval", buf);
}

void stage_perturb(const RunConfig& cfg) {
    if (cfg.perturb_in.empty() || cfg.perturb_out.empty()) {
        throw std::runtime_error("perturb needs --in and --out");
    }
    PerturbConfig pc;
    pc.noise_px = cfg.perturb_noise;
    pc.drop_rate = cfg.perturb_drop;
    pc.seed = cfg.seed;
    PerturbLog log;
    const auto out = perturb_labels(labels_from_jsonl_file(cfg.perturb_in), pc, &log);
    write_file_atomic(cfg.perturb_out, labels_to_jsonl(out));
    progress("perturb", std::to_string(log.moved) + " moved, " +
                            std::to_string(log.dropped.size()) + " dropped");
}

void run_pipeline(const RunConfig& cfg) {
    if (!cfg.pano_catalog.empty()) stage_ingest(cfg);
    else stage_synth(cfg);
    stage_select(cfg);
    stage_crops(cfg);
    stage_localize(cfg);
    stage_aggregate(cfg);
    stage_split(cfg);
    stage_eval(cfg);
}

}  // namespace ramplab
