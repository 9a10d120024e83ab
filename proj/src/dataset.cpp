#include "ramplab/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ramplab/rng.hpp"
#include "ramplab/selection.hpp"

namespace ramplab {

namespace {

// Half-up rounding keeps serialized coordinates stable across platforms
// (std::round ties-away differs from banker's rounding elsewhere).
double round_decimals(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::floor(v * scale + 0.5) / scale;
}

nlohmann::json label_to_json(const PointLabel& p) {
    nlohmann::json j;
    j["x"] = round_decimals(p.x, 1);
    j["y"] = round_decimals(p.y, 1);
    j["confidence"] = round_decimals(p.confidence, 6);
    j["source"] = p.source;
    if (p.ramp_id.empty()) j["ramp_id"] = nullptr;
    else j["ramp_id"] = p.ramp_id;
    return j;
}

PointLabel label_from_json(const nlohmann::json& j) {
    PointLabel p;
    p.x = j.at("x").get<double>();
    p.y = j.at("y").get<double>();
    p.confidence = j.at("confidence").get<double>();
    p.source = j.at("source").get<std::string>();
    if (j.contains("ramp_id") && !j["ramp_id"].is_null()) {
        p.ramp_id = j["ramp_id"].get<std::string>();
    }
    return p;
}

}  // namespace

std::string label_record_to_json(const LabelRecord& r) {
    nlohmann::json j;
    j["pano_id"] = r.pano_id;
    j["city"] = r.city;
    j["width"] = r.width;
    j["height"] = r.height;
    if (r.split) j["split"] = *r.split;
    else j["split"] = nullptr;
    j["labels"] = nlohmann::json::array();
    for (const auto& l : r.labels) j["labels"].push_back(label_to_json(l));
    return j.dump();  // nlohmann keeps object keys sorted
}

LabelRecord label_record_from_json(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    LabelRecord r;
    r.pano_id = j.at("pano_id").get<std::string>();
    r.city = j.at("city").get<std::string>();
    r.width = j.at("width").get<int>();
    r.height = j.at("height").get<int>();
    if (j.contains("split") && !j["split"].is_null()) r.split = j["split"].get<std::string>();
    for (const auto& l : j.at("labels")) r.labels.push_back(label_from_json(l));
    return r;
}

std::string labels_to_jsonl(const std::vector<LabelRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += label_record_to_json(r);
        out += '\n';
    }
    return out;
}

std::vector<LabelRecord> labels_from_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    std::vector<LabelRecord> out;
    std::string line;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        out.push_back(label_record_from_json(line));
        if (!seen.insert(out.back().pano_id).second) {
            throw std::runtime_error("duplicate pano_id in label file: " + out.back().pano_id);
        }
    }
    return out;
}

void labels_to_jsonl_file(const std::string& path, const std::vector<LabelRecord>& records) {
    std::set<std::string> seen;
    for (const auto& r : records) {
        if (!seen.insert(r.pano_id).second) {
            throw std::runtime_error("duplicate pano_id in label batch: " + r.pano_id);
        }
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write label file: " + path);
    out << labels_to_jsonl(records);
    if (!out) throw std::runtime_error("short write to label file: " + path);
}

LabelStore::LabelStore(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;  // fresh store
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ids_.insert(label_record_from_json(line).pano_id);
    }
}

void LabelStore::append(const LabelRecord& r) {
    if (!ids_.insert(r.pano_id).second) {
        throw std::runtime_error("label store already has pano_id: " + r.pano_id);
    }
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to label file: " + path_);
    out << label_record_to_json(r) << '\n';
    if (!out) throw std::runtime_error("short write to label file: " + path_);
}

namespace {

class DisjointSet {
public:
    explicit DisjointSet(std::size_t n) : parent_(n) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    std::size_t find(std::size_t i) {
        while (parent_[i] != i) {
            parent_[i] = parent_[parent_[i]];
            i = parent_[i];
        }
        return i;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<std::string>> spatial_components(const PanoCatalog& cat,
                                                         double link_dist_m) {
    std::vector<GeoPoint> pts;
    pts.reserve(cat.panos.size());
    for (const auto& p : cat.panos) pts.push_back(p.location);
    SpatialIndex index(pts);

    DisjointSet dsu(cat.panos.size());
    for (std::size_t i = 0; i < cat.panos.size(); ++i) {
        for (std::size_t j : index.within(pts[i], link_dist_m)) {
            if (j > i) dsu.unite(i, j);
        }
    }

    std::map<std::size_t, std::vector<std::string>> by_root;
    for (std::size_t i = 0; i < cat.panos.size(); ++i) {
        by_root[dsu.find(i)].push_back(cat.panos[i].pano_id);
    }
    std::vector<std::vector<std::string>> out;
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

const char* split_name(Split s) {
    switch (s) {
        case Split::train: return "train";
        case Split::val: return "val";
        case Split::test: return "test";
    }
    return "?";
}

SplitAssignment assign_splits(const std::vector<std::vector<std::string>>& components,
                              std::array<double, 3> fractions, std::uint64_t seed) {
    double sum = 0.0;
    for (double f : fractions) {
        if (f < 0.0) throw std::invalid_argument("split fractions must be >= 0");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");

    std::size_t total = 0;
    for (const auto& c : components) total += c.size();

    std::vector<std::size_t> order(components.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(Rng::mix(seed, 0x73706c6974ULL));  // "split" stream
    deterministic_shuffle(order, rng);

    SplitAssignment out;
    std::array<double, 3> assigned{0.0, 0.0, 0.0};
    for (std::size_t idx : order) {
        const auto& comp = components[idx];
        // Greedy: place the whole component where the remaining deficit
        // (target share minus what it has) is largest; ties go train>val>test.
        int best = 0;
        double best_deficit = -1e300;
        for (int s = 0; s < 3; ++s) {
            const double deficit = fractions[s] * static_cast<double>(total) - assigned[s];
            if (deficit > best_deficit) {
                best_deficit = deficit;
                best = s;
            }
        }
        for (const auto& id : comp) {
            out.by_pano[id] = static_cast<Split>(best);
        }
        assigned[best] += static_cast<double>(comp.size());
        out.counts[best] += comp.size();
    }
    return out;
}

std::string SplitAssignment::to_json() const {
    nlohmann::json j;
    j["assignments"] = nlohmann::json::object();
    for (const auto& [id, s] : by_pano) j["assignments"][id] = split_name(s);
    j["counts"]["train"] = counts[0];
    j["counts"]["val"] = counts[1];
    j["counts"]["test"] = counts[2];
    return j.dump(2) + "\n";
}

SplitAssignment SplitAssignment::from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SplitAssignment out;
    for (const auto& [id, name] : j.at("assignments").items()) {
        Split s;
        const std::string n = name.get<std::string>();
        if (n == "train") s = Split::train;
        else if (n == "val") s = Split::val;
        else if (n == "test") s = Split::test;
        else throw std::runtime_error("unknown split name: " + n);
        out.by_pano[id] = s;
        ++out.counts[static_cast<int>(s)];
    }
    return out;
}

DatasetStats dataset_stats(const std::vector<LabelRecord>& records) {
    DatasetStats st;
    st.panos = records.size();
    for (const auto& r : records) {
        st.labels += r.labels.size();
        if (r.labels.empty()) ++st.null_panos;
        int split_idx = -1;
        if (r.split == "train") split_idx = 0;
        else if (r.split == "val") split_idx = 1;
        else if (r.split == "test") split_idx = 2;
        if (split_idx >= 0) {
            ++st.split_panos[split_idx];
            st.split_labels[split_idx] += r.labels.size();
        }
        for (const auto& l : r.labels) ++st.source_counts[l.source];
    }
    const std::size_t labeled = st.panos - st.null_panos;
    st.labels_per_labeled_pano =
        labeled > 0 ? static_cast<double>(st.labels) / static_cast<double>(labeled) : 0.0;
    st.null_share = st.panos > 0
                        ? static_cast<double>(st.null_panos) / static_cast<double>(st.panos)
                        : 0.0;
    return st;
}

std::string DatasetStats::to_json() const {
    nlohmann::json j;
    j["panos"] = panos;
    j["labels"] = labels;
    j["null_panos"] = null_panos;
    j["labels_per_labeled_pano"] = labels_per_labeled_pano;
    j["null_share"] = null_share;
    for (int s = 0; s < 3; ++s) {
        const char* name = split_name(static_cast<Split>(s));
        j["splits"][name]["panos"] = split_panos[s];
        j["splits"][name]["labels"] = split_labels[s];
    }
    j["sources"] = nlohmann::json::object();
    for (const auto& [k, v] : source_counts) j["sources"][k] = v;
    return j.dump(2) + "\n";
}

}  // namespace ramplab
