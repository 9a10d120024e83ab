#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ramplab/heatmap.hpp"
#include "ramplab/ingest.hpp"

namespace ramplab {

// One pano's worth of labels as stored on disk (one JSON object per line).
struct LabelRecord {
    std::string pano_id;
    std::string city;
    int width = 4096;
    int height = 2048;
    std::optional<std::string> split;  // "train" | "val" | "test"
    std::vector<PointLabel> labels;
};

// Canonical JSONL form: alphabetical keys, coordinates rounded half-up to one
// decimal, confidence to six decimals. parse(serialize(r)) == serialize-stable.
std::string label_record_to_json(const LabelRecord& r);
LabelRecord label_record_from_json(const std::string& line);

std::string labels_to_jsonl(const std::vector<LabelRecord>& records);
std::vector<LabelRecord> labels_from_jsonl_file(const std::string& path);
void labels_to_jsonl_file(const std::string& path, const std::vector<LabelRecord>& records);

// Append-only JSONL store; rejects a pano_id that is already present.
class LabelStore {
public:
    explicit LabelStore(std::string path);
    void append(const LabelRecord& r);
    const std::set<std::string>& pano_ids() const { return ids_; }

private:
    std::string path_;
    std::set<std::string> ids_;
};

// Connected components of panos under "within link_dist_m of each other",
// transitively closed. Components and their members are sorted by pano_id.
std::vector<std::vector<std::string>> spatial_components(const PanoCatalog& cat,
                                                         double link_dist_m = 60.0);

enum class Split { train, val, test };
const char* split_name(Split s);

// Whole components are assigned to splits (never split across), aiming at the
// given pano-count fractions: components are visited in seeded shuffle order
// and each goes to the split with the largest remaining deficit.
struct SplitAssignment {
    std::map<std::string, Split> by_pano;
    std::array<std::size_t, 3> counts{0, 0, 0};

    std::string to_json() const;
    static SplitAssignment from_json(const std::string& text);
};

SplitAssignment assign_splits(const std::vector<std::vector<std::string>>& components,
                              std::array<double, 3> fractions, std::uint64_t seed);

// Corpus summary used for reporting and sanity checks.
struct DatasetStats {
    std::size_t panos = 0;
    std::size_t labels = 0;
    std::size_t null_panos = 0;          // zero-label panos
    double labels_per_labeled_pano = 0;  // excludes zero-label panos
    double null_share = 0.0;             // zero-label fraction of all panos
    std::array<std::size_t, 3> split_panos{0, 0, 0};
    std::array<std::size_t, 3> split_labels{0, 0, 0};
    std::map<std::string, std::size_t> source_counts;

    std::string to_json() const;
};

DatasetStats dataset_stats(const std::vector<LabelRecord>& records);

}  // namespace ramplab
