// ramplab: turn curb-ramp point records + a street panorama catalog into
// pixel-labeled panoramas, and benchmark detections against ground truth.

#include <cstdio>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "ramplab/pipeline.hpp"

namespace {

// Shared flag surface: every stage accepts the full knob set so a config file
// written for `pipeline` drives the individual stages identically.
void add_options(CLI::App* sc, ramplab::RunConfig& cfg, std::string& split_str) {
    sc->add_option("--out", cfg.out_dir, "Output directory (stage working root)")
        ->capture_default_str();
    sc->add_option("--seed", cfg.seed, "Seed for every random choice")->capture_default_str();
    sc->add_option("--workers", cfg.workers, "Worker threads (outputs do not depend on this)")
        ->capture_default_str();

    sc->add_option("--ramps", cfg.ramp_file, "Curb-ramp table (CSV or GeoJSON)");
    sc->add_option("--ramp-format", cfg.ramp_format, "csv | geojson | auto")
        ->capture_default_str();
    sc->add_option("--pano-catalog", cfg.pano_catalog, "Panorama catalog CSV");
    sc->add_option("--images", cfg.images_dir, "Directory of <pano_id>.png|.jpg images");
    sc->add_option("--city", cfg.city, "City tag stored with every record")
        ->capture_default_str();
    sc->add_option("--col-id", cfg.columns.id, "Ramp id column/property name")
        ->capture_default_str();
    sc->add_option("--col-lat", cfg.columns.lat, "Latitude column name")->capture_default_str();
    sc->add_option("--col-lon", cfg.columns.lon, "Longitude column name")->capture_default_str();
    sc->add_option("--col-date", cfg.columns.installed_on,
                   "Install-date column/property (empty: none)");

    sc->add_option("--panos", cfg.synth_panos, "Synthetic panos to generate")
        ->capture_default_str();

    sc->add_option("--pano-radius", cfg.pano_radius, "Pano selection radius, m")
        ->capture_default_str();
    sc->add_option("--cand-radius", cfg.cand_radius, "Label candidate radius, m")
        ->capture_default_str();
    sc->add_option("--null-dist", cfg.null_dist, "Min ramp distance for null panos, m")
        ->capture_default_str();
    sc->add_option("--null-frac", cfg.null_frac, "Null share of the final pano set")
        ->capture_default_str();

    sc->add_option("--fov", cfg.fov, "Crop field of view, deg")->capture_default_str();
    sc->add_option("--pitch", cfg.pitch, "Crop pitch, deg (negative looks down)")
        ->capture_default_str();

    sc->add_option("--sigma", cfg.sigma, "Heatmap gaussian sigma, heatmap cells")
        ->capture_default_str();
    sc->add_option("--peak-thresh", cfg.peak_thresh, "Heatmap decode threshold")
        ->capture_default_str();
    sc->add_option("--downscale", cfg.downscale, "Image px per heatmap cell")
        ->capture_default_str();
    sc->add_option("--nms-radius", cfg.nms_radius, "Peak suppression radius, heatmap cells")
        ->capture_default_str();
    sc->add_flag("--heatmap-roundtrip,!--no-heatmap-roundtrip", cfg.heatmap_roundtrip,
                 "Route localizer points through the heatmap codec (default on)");
    sc->add_flag("--save-heatmaps", cfg.save_heatmaps, "Dump 16-bit heatmap PNGs per crop");
    sc->add_option("--localizer", cfg.localizer, "marker | external")->capture_default_str();
    sc->add_option("--localizer-cmd", cfg.localizer_cmd,
                   "Command line for the external localizer process");

    sc->add_option("--dedup-radius", cfg.dedup_radius, "Label merge radius, pano px")
        ->capture_default_str();
    sc->add_option("--split", split_str, "train,val,test fractions")->capture_default_str();
    sc->add_option("--link-dist", cfg.link_dist, "Split leakage linking distance, m")
        ->capture_default_str();

    sc->add_option("--match-radius", cfg.match_radius, "Benchmark proximity radius, pano px")
        ->capture_default_str();
    sc->add_option("--threshold", cfg.eval_threshold, "Operating confidence threshold")
        ->capture_default_str();
    sc->add_option("--gt", cfg.gt_file, "Ground-truth JSONL (default: <out>/ground_truth.jsonl)");
    sc->add_option("--labels", cfg.labels_file, "Predictions JSONL (default: pipeline labels)");

    sc->add_option("--in", cfg.perturb_in, "perturb: input labels JSONL");
    sc->add_option("--to", cfg.perturb_out, "perturb: output labels JSONL");
    sc->add_option("--noise", cfg.perturb_noise, "perturb: gaussian jitter, px")
        ->capture_default_str();
    sc->add_option("--drop", cfg.perturb_drop, "perturb: label drop rate")
        ->capture_default_str();
}

void apply_split(const std::string& split_str, ramplab::RunConfig& cfg) {
    if (split_str.empty()) return;
    std::array<double, 3> f{};
    char extra = 0;
    if (std::sscanf(split_str.c_str(), "%lf,%lf,%lf%c", &f[0], &f[1], &f[2], &extra) != 3) {
        throw CLI::ValidationError("--split", "expected three comma-separated fractions");
    }
    cfg.split_fracs = f;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curb-ramp auto-labeling and benchmark pipeline"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML-style config file ([subcommand] sections)");
    app.set_version_flag("--version", "ramplab 0.1.0");

    ramplab::RunConfig cfg;
    std::string split_str = "0.7,0.2,0.1";

    struct Cmd {
        const char* name;
        const char* help;
        void (*fn)(const ramplab::RunConfig&);
    };
    static const Cmd kCmds[] = {
        {"synth", "Generate a deterministic synthetic city (images + ground truth)",
         ramplab::stage_synth},
        {"ingest", "Normalize ramp + pano catalogs into the working directory",
         ramplab::stage_ingest},
        {"select", "Pick labelable panos, label candidates, and null panos",
         ramplab::stage_select},
        {"crops", "Render a perspective crop per (pano, candidate)", ramplab::stage_crops},
        {"localize", "Run the crop localizer over all crops", ramplab::stage_localize},
        {"aggregate", "Project detections back to panos and merge duplicates",
         ramplab::stage_aggregate},
        {"split", "Assign leakage-free train/val/test splits", ramplab::stage_split},
        {"stats", "Summarize the labeled corpus", ramplab::stage_stats},
        {"eval", "Benchmark predictions against ground truth", ramplab::stage_eval},
        {"perturb", "Jitter/drop labels for robustness experiments", ramplab::stage_perturb},
        {"pipeline", "Run every stage end to end", ramplab::run_pipeline},
    };

    for (const Cmd& c : kCmds) {
        CLI::App* sc = app.add_subcommand(c.name, c.help);
        add_options(sc, cfg, split_str);
        void (*fn)(const ramplab::RunConfig&) = c.fn;
        sc->callback([&cfg, &split_str, fn]() {
            apply_split(split_str, cfg);
            fn(cfg);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 2: bad flags/config
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
