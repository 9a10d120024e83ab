#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>

#include "ramplab/ingest.hpp"

namespace ramplab {

// Every knob the CLI exposes, with the project's canonical defaults. All
// stages communicate exclusively through files under `out_dir`, so running
// the stages one by one is byte-identical to the chained pipeline command.
struct RunConfig {
    std::string out_dir = "out";

    // ingest inputs (synth mode generates these instead)
    std::string ramp_file;
    std::string ramp_format = "csv";  // "csv" | "geojson"
    std::string pano_catalog;
    std::string images_dir;  // defaults to <out_dir>/images
    std::string city = "city";
    ColumnMap columns;

    // synth
    std::uint64_t seed = 1;
    int synth_panos = 48;

    // geometry / selection / codec / matching
    double pano_radius = 10.0;
    double cand_radius = 35.0;
    double null_dist = 60.0;
    double null_frac = 0.20;
    double fov = 90.0;
    double pitch = -30.0;
    double sigma = 10.0;
    double peak_thresh = 0.55;
    double match_radius = 88.0;
    std::array<double, 3> split_fracs{0.7, 0.2, 0.1};
    double link_dist = 60.0;
    double dedup_radius = 44.0;
    int downscale = 4;
    double nms_radius = 5.0;

    int workers = 1;
    bool heatmap_roundtrip = true;  // route localizer output through the codec
    bool save_heatmaps = false;     // dump 16-bit debug heatmaps per crop
    std::string localizer = "marker";  // "marker" | "external"
    std::string localizer_cmd;         // argv words, space-separated

    double eval_threshold = 0.55;
    std::string gt_file;      // defaults to <out_dir>/ground_truth.jsonl
    std::string labels_file;  // defaults to split labels, then raw labels

    // perturb utility
    std::string perturb_in;
    std::string perturb_out;
    double perturb_noise = 0.0;
    double perturb_drop = 0.0;
};

// Each stage reads its inputs from, and writes its outputs under,
// cfg.out_dir; all throw on failure.
void stage_synth(const RunConfig& cfg);      // ramps.csv panos.csv city.txt images/ ground_truth.jsonl
void stage_ingest(const RunConfig& cfg);     // ramps.csv panos.csv city.txt (canonical forms)
void stage_select(const RunConfig& cfg);     // selection/{selection.json,candidates.csv,positives.txt,nulls.txt}
void stage_crops(const RunConfig& cfg);      // crops/<pano>_<ramp>.{png,json}
void stage_localize(const RunConfig& cfg);   // localize/detections.jsonl
void stage_aggregate(const RunConfig& cfg);  // labels/{labels.jsonl,flags.jsonl}
void stage_split(const RunConfig& cfg);      // split/{splits.json,labels.jsonl}
void stage_stats(const RunConfig& cfg);      // stats/stats.json
void stage_eval(const RunConfig& cfg);       // eval/{metrics.json,pr_curve.csv,errors.jsonl}
void stage_perturb(const RunConfig& cfg);    // perturb_out from perturb_in

// synth-or-ingest -> select -> crops -> localize -> aggregate -> split -> eval
void run_pipeline(const RunConfig& cfg);

// Shared bounded worker pool: runs fn(0..n-1) on up to `workers` threads.
// Rethrows the first failure after all threads join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace ramplab
