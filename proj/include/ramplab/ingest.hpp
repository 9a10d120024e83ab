#pragma once

#include <istream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ramplab/geo.hpp"
#include "ramplab/image.hpp"

namespace ramplab {

// Raised for malformed input files; carries the 1-based source line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Maps source column names onto the fields this project needs. `installed_on`
// may be empty when the source has no install-date column.
struct ColumnMap {
    std::string id = "id";
    std::string lat = "lat";
    std::string lon = "lon";
    std::string installed_on;
};

struct IngestStats {
    std::size_t rows_total = 0;
    std::size_t rows_kept = 0;
    std::size_t rows_skipped = 0;           // unparseable coordinates / missing id
    std::size_t missing_install_dates = 0;  // kept, but without a usable date
    std::size_t headings_normalized = 0;    // pano headings wrapped into [0, 360)
};

struct RampDataset {
    std::string city;
    std::vector<CurbRampRecord> ramps;  // sorted by ramp_id, ids unique
};

struct PanoCatalog {
    std::vector<PanoMeta> panos;  // sorted by pano_id, ids unique

    const PanoMeta* find(const std::string& pano_id) const;
};

// Parses a curb-ramp point table from CSV. Rows with unusable coordinates or
// a missing id are counted and skipped; duplicate ids are an error.
RampDataset parse_ramp_csv(std::istream& in, const ColumnMap& cols, const std::string& city,
                           IngestStats* stats = nullptr);

// Parses a GeoJSON FeatureCollection of Point features. Field names for the
// id / install date are taken from `cols` (lat/lon come from the geometry).
RampDataset parse_ramp_geojson(std::istream& in, const ColumnMap& cols, const std::string& city,
                               IngestStats* stats = nullptr);

// Parses the panorama catalog CSV with header
//   pano_id,lat,lon,captured_on,heading,width,height
// Headings outside [0, 360) are normalized and counted; a width/height pair
// that is not 2:1 equirectangular is an error.
PanoCatalog parse_pano_csv(std::istream& in, IngestStats* stats = nullptr);

// Canonical serializations; parse(serialize(x)) == x, and serializing again
// yields identical bytes.
std::string to_csv(const RampDataset& ds);
std::string to_csv(const PanoCatalog& cat);

// Source of pixel data for panoramas. fetch() returns std::nullopt when the
// pano simply is not present; anything else wrong throws.
class ImageProvider {
public:
    virtual ~ImageProvider() = default;
    virtual std::optional<ImageRgb> fetch(const std::string& pano_id) = 0;
};

// Looks for <root>/<pano_id>.png then <root>/<pano_id>.jpg.
class DirectoryImageProvider : public ImageProvider {
public:
    explicit DirectoryImageProvider(std::string root) : root_(std::move(root)) {}
    std::optional<ImageRgb> fetch(const std::string& pano_id) override;

private:
    std::string root_;
};

// Fetches a pano image and verifies it matches the catalog dimensions.
// std::nullopt when the provider has no such pano; throws on a size mismatch.
std::optional<ImageRgb> fetch_pano_image(ImageProvider& provider, const PanoMeta& meta);

}  // namespace ramplab
