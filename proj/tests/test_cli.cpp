#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ramplab/dataset.hpp"
#include "ramplab/fsio.hpp"

using namespace ramplab;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(RAMPLAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("cli exit codes: help, usage errors, runtime errors") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("synth --help") == 0);
    CHECK(run_cli("") == 2);                      // a subcommand is required
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("synth --no-such-flag") == 2);
    // select with nothing to select from: a runtime failure, not a crash.
    fs::path dir = fresh_dir("ramplab_cli_err");
    CHECK(run_cli("select --out " + (dir / "out").string()) == 1);
    // ingest without inputs configured.
    CHECK(run_cli("ingest --out " + (dir / "out2").string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("cli pipeline produces the documented tree and perfect synthetic metrics") {
    fs::path dir = fresh_dir("ramplab_cli_pipe");
    fs::path out = dir / "out";
    REQUIRE(run_cli("pipeline --out " + out.string() + " --panos 12 --seed 7 --workers 2") == 0);

    for (const char* rel :
         {"ramps.csv", "panos.csv", "city.txt", "ground_truth.jsonl",
          "selection/selection.json", "selection/candidates.csv", "selection/positives.txt",
          "selection/nulls.txt", "localize/detections.jsonl", "labels/labels.jsonl",
          "labels/flags.jsonl", "split/splits.json", "split/labels.jsonl",
          "eval/metrics.json", "eval/pr_curve.csv", "eval/errors.jsonl"})
        CHECK(fs::exists(out / rel));

    auto metrics = nlohmann::json::parse(read_file((out / "eval" / "metrics.json").string()));
    CHECK(metrics.at("precision").get<double>() == 1.0);
    CHECK(metrics.at("recall").get<double>() == 1.0);
    CHECK(metrics.at("ap").get<double>() == 1.0);
    CHECK(metrics.at("fp").get<std::size_t>() == 0);
    CHECK(metrics.at("missed").get<std::size_t>() == 0);
    CHECK(metrics.at("tp").get<std::size_t>() > 0);

    // Split labels carry split names and cover the labeled corpus.
    auto split_records = labels_from_jsonl_file((out / "split" / "labels.jsonl").string());
    CHECK(!split_records.empty());
    for (const auto& r : split_records) REQUIRE(r.split.has_value());

    // stats works over the split corpus.
    REQUIRE(run_cli("stats --out " + out.string()) == 0);
    auto stats = nlohmann::json::parse(read_file((out / "stats" / "stats.json").string()));
    CHECK(stats.at("panos").get<std::size_t>() == split_records.size());
    CHECK(stats.at("null_panos").get<std::size_t>() > 0);

    fs::remove_all(dir);
}

TEST_CASE("cli stages compose to the same bytes as the chained pipeline") {
    fs::path dir = fresh_dir("ramplab_cli_stages");
    fs::path a = dir / "a";
    fs::path b = dir / "b";
    std::string common = " --panos 8 --seed 11 --workers 1";
    REQUIRE(run_cli("pipeline --out " + a.string() + common) == 0);
    for (const char* stage : {"synth", "select", "crops", "localize", "aggregate", "split", "eval"})
        REQUIRE(run_cli(std::string(stage) + " --out " + b.string() + common) == 0);

    std::size_t compared = 0;
    for (auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        fs::path rel = fs::relative(e.path(), a);
        INFO("file: " << rel.string());
        REQUIRE(fs::exists(b / rel));
        CHECK(read_file(e.path().string()) == read_file((b / rel).string()));
        ++compared;
    }
    CHECK(compared > 10);
    fs::remove_all(dir);
}

TEST_CASE("cli eval on ground truth vs itself is perfect") {
    fs::path dir = fresh_dir("ramplab_cli_selfeval");
    fs::path out = dir / "out";
    REQUIRE(run_cli("synth --out " + out.string() + " --panos 8 --seed 2") == 0);
    std::string gt = (out / "ground_truth.jsonl").string();
    REQUIRE(run_cli("eval --out " + out.string() + " --gt " + gt + " --labels " + gt) == 0);
    auto metrics = nlohmann::json::parse(read_file((out / "eval" / "metrics.json").string()));
    CHECK(metrics.at("precision").get<double>() == 1.0);
    CHECK(metrics.at("recall").get<double>() == 1.0);
    CHECK(metrics.at("f1").get<double>() == 1.0);
    fs::remove_all(dir);
}

TEST_CASE("cli perturb degrades recall") {
    fs::path dir = fresh_dir("ramplab_cli_perturb");
    fs::path out = dir / "out";
    REQUIRE(run_cli("synth --out " + out.string() + " --panos 8 --seed 2") == 0);
    std::string gt = (out / "ground_truth.jsonl").string();
    std::string noisy = (out / "noisy.jsonl").string();
    REQUIRE(run_cli("perturb --out " + out.string() + " --in " + gt + " --to " + noisy +
                    " --noise 100 --seed 5") == 0);
    REQUIRE(run_cli("eval --out " + out.string() + " --gt " + gt + " --labels " + noisy) == 0);
    auto metrics = nlohmann::json::parse(read_file((out / "eval" / "metrics.json").string()));
    CHECK(metrics.at("recall").get<double>() < 1.0);
    fs::remove_all(dir);
}

TEST_CASE("cli ingest normalizes external catalogs") {
    fs::path dir = fresh_dir("ramplab_cli_ingest");
    fs::path out = dir / "out";
    std::ofstream ramps(dir / "city_ramps.csv");
    ramps << "ramp,latitude,longitude,installed\n"
             "X2,47.61,-122.34,2015-02-03\n"
             "X1,47.60,-122.33,\n"
             ",47.60,-122.33,2015-01-01\n";
    ramps.close();
    std::ofstream panos(dir / "panos.csv");
    panos << "pano_id,lat,lon,captured_on,heading,width,height\n"
             "P1,47.6,-122.33,2019-06-01,370,4096,2048\n";
    panos.close();

    REQUIRE(run_cli("ingest --out " + out.string() + " --ramps " + (dir / "city_ramps.csv").string() +
                    " --pano-catalog " + (dir / "panos.csv").string() +
                    " --city seattle --col-id ramp --col-lat latitude --col-lon longitude"
                    " --col-date installed") == 0);
    std::string canon = read_file((out / "ramps.csv").string());
    CHECK(canon.rfind("ramp_id,lat,lon,installed_on\n", 0) == 0);
    CHECK(canon.find("X1,47.6,-122.33,\n") != std::string::npos);
    CHECK(canon.find("X2,47.61,-122.34,2015-02-03\n") != std::string::npos);
    std::string pcanon = read_file((out / "panos.csv").string());
    CHECK(pcanon.find("P1,47.6,-122.33,2019-06-01,10,4096,2048") != std::string::npos);
    CHECK(read_file((out / "city.txt").string()) == "seattle\n");
    fs::remove_all(dir);
}
