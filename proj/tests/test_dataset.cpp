#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

#include "ramplab/dataset.hpp"
#include "ramplab/fsio.hpp"
#include "ramplab/rng.hpp"
#include "ramplab/selection.hpp"

using namespace ramplab;

namespace {

PointLabel pt(double x, double y, double conf, const std::string& source,
              const std::string& ramp_id = "") {
    PointLabel p;
    p.x = x;
    p.y = y;
    p.confidence = conf;
    p.source = source;
    p.ramp_id = ramp_id;
    return p;
}

PanoMeta pano_at(const std::string& id, double lat, double lon) {
    PanoMeta p;
    p.pano_id = id;
    p.location = {lat, lon};
    p.captured_on = *parse_date("2019-06-01");
    return p;
}

// O(n^2) reference: repeated merging until fixpoint.
std::vector<std::vector<std::string>> brute_components(const PanoCatalog& cat, double dist) {
    std::vector<std::set<std::string>> groups;
    for (const auto& p : cat.panos) groups.push_back({p.pano_id});
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < groups.size() && !changed; ++i)
            for (std::size_t j = i + 1; j < groups.size() && !changed; ++j) {
                bool linked = false;
                for (const auto& a : groups[i])
                    for (const auto& b : groups[j])
                        if (haversine_m(cat.find(a)->location, cat.find(b)->location) <= dist)
                            linked = true;
                if (linked) {
                    groups[i].insert(groups[j].begin(), groups[j].end());
                    groups.erase(groups.begin() + j);
                    changed = true;
                }
            }
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& g : groups) out.emplace_back(g.begin(), g.end());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("label record json has stable keys and rounding") {
    LabelRecord r;
    r.pano_id = "SP000001";
    r.city = "synthville";
    r.labels = {pt(102.4567, 1365.3499, 0.987654321, "auto", "R000001"),
                pt(7.25, 9.85, 1.0, "ground_truth")};

    std::string line = label_record_to_json(r);
    // Alphabetical keys, one decimal coordinates (half-up), six-decimal
    // confidence, null ramp_id / split when absent.
    CHECK(line.find("\"pano_id\":\"SP000001\"") != std::string::npos);
    CHECK(line.find("\"x\":102.5") != std::string::npos);
    CHECK(line.find("\"y\":1365.3") != std::string::npos);
    CHECK(line.find("\"confidence\":0.987654") != std::string::npos);
    CHECK(line.find("\"x\":7.3") != std::string::npos);  // 7.25 rounds half-up
    CHECK(line.find("\"y\":9.9") != std::string::npos);  // 9.85 rounds half-up
    CHECK(line.find("\"ramp_id\":\"R000001\"") != std::string::npos);
    CHECK(line.find("\"ramp_id\":null") != std::string::npos);
    CHECK(line.find("\"split\":null") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);

    // Round trip: parse then re-serialize must be byte-stable.
    LabelRecord back = label_record_from_json(line);
    CHECK(label_record_to_json(back) == line);
    CHECK(back.pano_id == r.pano_id);
    CHECK(back.city == r.city);
    CHECK(back.width == 4096);
    CHECK(back.height == 2048);
    CHECK_FALSE(back.split.has_value());
    REQUIRE(back.labels.size() == 2);
    CHECK(back.labels[0].source == "auto");
    CHECK(back.labels[0].ramp_id == "R000001");
    CHECK(back.labels[1].ramp_id.empty());

    r.split = "train";
    CHECK(label_record_to_json(r).find("\"split\":\"train\"") != std::string::npos);
}

TEST_CASE("jsonl file round trip and duplicate rejection") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ramplab_dataset_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::path file = dir / "labels.jsonl";

    std::vector<LabelRecord> records(2);
    records[0].pano_id = "A";
    records[0].city = "c";
    records[0].labels = {pt(1, 2, 0.5, "auto", "R1")};
    records[1].pano_id = "B";
    records[1].city = "c";

    labels_to_jsonl_file(file.string(), records);
    auto back = labels_from_jsonl_file(file.string());
    REQUIRE(back.size() == 2);
    CHECK(labels_to_jsonl(back) == labels_to_jsonl(records));

    // A duplicate pano_id is rejected on write and on read.
    std::vector<LabelRecord> twice = {records[0], records[0]};
    fs::path dup = dir / "dup.jsonl";
    CHECK_THROWS(labels_to_jsonl_file(dup.string(), twice));
    std::string one_line = label_record_to_json(records[0]) + "\n";
    write_file_atomic(dup.string(), one_line + one_line);
    CHECK_THROWS(labels_from_jsonl_file(dup.string()));

    LabelStore store((dir / "store.jsonl").string());
    store.append(records[0]);
    store.append(records[1]);
    CHECK_THROWS(store.append(records[0]));
    CHECK(store.pano_ids() == std::set<std::string>{"A", "B"});

    // Reopening the store picks up existing ids.
    LabelStore reopened((dir / "store.jsonl").string());
    CHECK(reopened.pano_ids() == std::set<std::string>{"A", "B"});
    CHECK_THROWS(reopened.append(records[1]));

    fs::remove_all(dir);
}

TEST_CASE("spatial components match a quadratic reference") {
    Rng rng(91);
    for (int trial = 0; trial < 5; ++trial) {
        PanoCatalog cat;
        for (int i = 0; i < 60; ++i) {
            // Clumpy distribution so links actually occur.
            double lat = 47.6 + 0.00045 * static_cast<double>(rng.below(12));
            double lon = -122.33 + 0.00065 * static_cast<double>(rng.below(12));
            char id[16];
            std::snprintf(id, sizeof id, "P%03d", i);
            cat.panos.push_back(pano_at(id, lat + rng.uniform(-1e-5, 1e-5),
                                        lon + rng.uniform(-1e-5, 1e-5)));
        }
        auto got = spatial_components(cat, 60.0);
        auto want = brute_components(cat, 60.0);
        CHECK(got == want);
        // Every pano appears exactly once.
        std::size_t total = 0;
        for (const auto& c : got) total += c.size();
        CHECK(total == cat.panos.size());
    }
}

TEST_CASE("split assignment is deterministic, exhaustive, and component-atomic") {
    // 30 singleton components of one pano each.
    std::vector<std::vector<std::string>> comps;
    for (int i = 0; i < 30; ++i) comps.push_back({"P" + std::to_string(100 + i)});

    auto a = assign_splits(comps, {0.7, 0.2, 0.1}, 5);
    auto b = assign_splits(comps, {0.7, 0.2, 0.1}, 5);
    CHECK(a.by_pano == b.by_pano);
    auto c = assign_splits(comps, {0.7, 0.2, 0.1}, 6);
    CHECK(a.by_pano != c.by_pano);  // different seed shuffles differently

    CHECK(a.by_pano.size() == 30);
    CHECK(a.counts[0] == 21);
    CHECK(a.counts[1] == 6);
    CHECK(a.counts[2] == 3);

    // Multi-pano components stay together.
    std::vector<std::vector<std::string>> grouped{{"A1", "A2", "A3"}, {"B1"}, {"C1", "C2"}};
    auto g = assign_splits(grouped, {0.7, 0.2, 0.1}, 1);
    CHECK(g.by_pano.at("A1") == g.by_pano.at("A2"));
    CHECK(g.by_pano.at("A1") == g.by_pano.at("A3"));
    CHECK(g.by_pano.at("C1") == g.by_pano.at("C2"));
    CHECK(g.counts[0] + g.counts[1] + g.counts[2] == 6);

    CHECK_THROWS(assign_splits(comps, {0.5, 0.2, 0.2}, 1));  // doesn't sum to 1

    // Serialization round trip.
    auto back = SplitAssignment::from_json(a.to_json());
    CHECK(back.by_pano == a.by_pano);
    CHECK(back.counts == a.counts);
    CHECK(back.to_json() == a.to_json());
}

TEST_CASE("split fractions are approached on many components") {
    Rng rng(92);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        std::vector<std::vector<std::string>> comps;
        int next = 0;
        for (int i = 0; i < 300; ++i) {
            std::vector<std::string> comp;
            int size = 1 + static_cast<int>(rng.below(3));
            for (int j = 0; j < size; ++j) comp.push_back("P" + std::to_string(100000 + next++));
            comps.push_back(comp);
        }
        auto s = assign_splits(comps, {0.7, 0.2, 0.1}, seed);
        double total = static_cast<double>(next);
        CHECK(std::fabs(s.counts[0] / total - 0.7) < 0.05);
        CHECK(std::fabs(s.counts[1] / total - 0.2) < 0.05);
        CHECK(std::fabs(s.counts[2] / total - 0.1) < 0.05);
    }
}

TEST_CASE("dataset stats recount the corpus") {
    std::vector<LabelRecord> records(4);
    records[0].pano_id = "A";
    records[0].split = "train";
    records[0].labels = {pt(1, 2, 0.9, "auto", "R1"), pt(3, 4, 0.8, "auto", "R2")};
    records[1].pano_id = "B";
    records[1].split = "train";
    records[1].labels = {pt(5, 6, 0.7, "ground_truth", "R3")};
    records[2].pano_id = "C";
    records[2].split = "val";  // a null pano
    records[3].pano_id = "D";  // no split, no labels

    auto s = dataset_stats(records);
    CHECK(s.panos == 4);
    CHECK(s.labels == 3);
    CHECK(s.null_panos == 2);
    CHECK(s.labels_per_labeled_pano == doctest::Approx(1.5));
    CHECK(s.null_share == doctest::Approx(0.5));
    CHECK(s.split_panos[0] == 2);
    CHECK(s.split_panos[1] == 1);
    CHECK(s.split_panos[2] == 0);
    CHECK(s.split_labels[0] == 3);
    CHECK(s.split_labels[1] == 0);
    CHECK(s.source_counts.at("auto") == 2);
    CHECK(s.source_counts.at("ground_truth") == 1);

    std::string js = s.to_json();
    for (const char* key : {"panos", "labels", "null_panos", "labels_per_labeled_pano",
                            "null_share", "splits", "train", "val", "test", "sources",
                            "ground_truth"})
        CHECK(js.find(key) != std::string::npos);
}
