#include "ramplab/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <set>

#include <json.hpp>

#include "ramplab/csv.hpp"

namespace ramplab {

namespace {

std::optional<double> parse_double_field(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

std::optional<int> parse_int_field(const std::string& s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::size_t require_column(const CsvRow& header, const std::string& name) {
    for (std::size_t i = 0; i < header.fields.size(); ++i) {
        if (header.fields[i] == name) return i;
    }
    throw ParseError("missing column '" + name + "'", header.line);
}

void sort_and_check_unique(std::vector<CurbRampRecord>& ramps) {
    std::sort(ramps.begin(), ramps.end(),
              [](const CurbRampRecord& a, const CurbRampRecord& b) { return a.ramp_id < b.ramp_id; });
    for (std::size_t i = 1; i < ramps.size(); ++i) {
        if (ramps[i].ramp_id == ramps[i - 1].ramp_id) {
            throw std::runtime_error("duplicate ramp_id: " + ramps[i].ramp_id);
        }
    }
}

}  // namespace

const PanoMeta* PanoCatalog::find(const std::string& pano_id) const {
    auto it = std::lower_bound(panos.begin(), panos.end(), pano_id,
                               [](const PanoMeta& m, const std::string& id) { return m.pano_id < id; });
    if (it == panos.end() || it->pano_id != pano_id) return nullptr;
    return &*it;
}

RampDataset parse_ramp_csv(std::istream& in, const ColumnMap& cols, const std::string& city,
                           IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;

    auto rows = read_csv(in);
    if (rows.empty()) throw ParseError("empty ramp table", 1);

    const CsvRow& header = rows.front();
    const std::size_t ci = require_column(header, cols.id);
    const std::size_t clat = require_column(header, cols.lat);
    const std::size_t clon = require_column(header, cols.lon);
    std::optional<std::size_t> cdate;
    if (!cols.installed_on.empty()) cdate = require_column(header, cols.installed_on);

    RampDataset ds;
    ds.city = city;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        ++st.rows_total;
        auto field = [&](std::size_t i) -> std::string {
            return i < row.fields.size() ? row.fields[i] : std::string();
        };
        const std::string id = field(ci);
        const auto lat = parse_double_field(field(clat));
        const auto lon = parse_double_field(field(clon));
        if (id.empty() || !lat || !lon || !std::isfinite(*lat) || !std::isfinite(*lon) ||
            *lat < -90.0 || *lat > 90.0) {
            ++st.rows_skipped;
            continue;
        }
        if (!seen.insert(id).second) throw ParseError("duplicate ramp_id '" + id + "'", row.line);
        CurbRampRecord rec;
        rec.ramp_id = id;
        rec.location = GeoPoint(*lat, *lon);
        if (cdate) {
            rec.installed_on = parse_date(field(*cdate));
            if (!rec.installed_on) ++st.missing_install_dates;
        } else {
            ++st.missing_install_dates;
        }
        ds.ramps.push_back(std::move(rec));
        ++st.rows_kept;
    }
    sort_and_check_unique(ds.ramps);
    return ds;
}

RampDataset parse_ramp_geojson(std::istream& in, const ColumnMap& cols, const std::string& city,
                               IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("geojson: ") + e.what(), 1);
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
        !doc.contains("features") || !doc["features"].is_array()) {
        throw ParseError("geojson: expected a FeatureCollection with features[]", 1);
    }

    RampDataset ds;
    ds.city = city;
    std::set<std::string> seen;
    std::size_t feature_no = 0;  // stands in for a line number in error reports
    for (const auto& feat : doc["features"]) {
        ++feature_no;
        ++st.rows_total;
        if (!feat.is_object() || !feat.contains("geometry") || !feat["geometry"].is_object()) {
            ++st.rows_skipped;
            continue;
        }
        const auto& geom = feat["geometry"];
        if (geom.value("type", "") != "Point" || !geom.contains("coordinates") ||
            !geom["coordinates"].is_array() || geom["coordinates"].size() < 2 ||
            !geom["coordinates"][0].is_number() || !geom["coordinates"][1].is_number()) {
            ++st.rows_skipped;
            continue;
        }
        const double lon = geom["coordinates"][0].get<double>();
        const double lat = geom["coordinates"][1].get<double>();
        if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0) {
            ++st.rows_skipped;
            continue;
        }
        const auto& props = feat.contains("properties") && feat["properties"].is_object()
                                ? feat["properties"]
                                : nlohmann::json::object();
        std::string id;
        if (props.contains(cols.id)) {
            const auto& v = props[cols.id];
            if (v.is_string()) id = v.get<std::string>();
            else if (v.is_number_integer()) id = std::to_string(v.get<long long>());
        }
        if (id.empty()) {
            ++st.rows_skipped;
            continue;
        }
        if (!seen.insert(id).second) {
            throw ParseError("duplicate ramp_id '" + id + "'", feature_no);
        }
        CurbRampRecord rec;
        rec.ramp_id = id;
        rec.location = GeoPoint(lat, lon);
        if (!cols.installed_on.empty() && props.contains(cols.installed_on) &&
            props[cols.installed_on].is_string()) {
            rec.installed_on = parse_date(props[cols.installed_on].get<std::string>());
        }
        if (!rec.installed_on) ++st.missing_install_dates;
        ds.ramps.push_back(std::move(rec));
        ++st.rows_kept;
    }
    sort_and_check_unique(ds.ramps);
    return ds;
}

PanoCatalog parse_pano_csv(std::istream& in, IngestStats* stats) {
    IngestStats local;
    IngestStats& st = stats ? *stats : local;

    auto rows = read_csv(in);
    if (rows.empty()) throw ParseError("empty pano catalog", 1);
    static const std::vector<std::string> kHeader = {"pano_id", "lat",   "lon",   "captured_on",
                                                     "heading", "width", "height"};
    if (rows.front().fields != kHeader) {
        throw ParseError("pano catalog header must be pano_id,lat,lon,captured_on,heading,width,height",
                         rows.front().line);
    }

    PanoCatalog cat;
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const CsvRow& row = rows[r];
        ++st.rows_total;
        if (row.fields.size() != kHeader.size()) {
            throw ParseError("pano catalog row has " + std::to_string(row.fields.size()) +
                                 " fields, expected 7",
                             row.line);
        }
        PanoMeta m;
        m.pano_id = row.fields[0];
        if (m.pano_id.empty()) throw ParseError("empty pano_id", row.line);
        if (!seen.insert(m.pano_id).second) {
            throw ParseError("duplicate pano_id '" + m.pano_id + "'", row.line);
        }
        const auto lat = parse_double_field(row.fields[1]);
        const auto lon = parse_double_field(row.fields[2]);
        if (!lat || !lon || !std::isfinite(*lat) || !std::isfinite(*lon) || *lat < -90.0 ||
            *lat > 90.0) {
            throw ParseError("bad pano coordinates", row.line);
        }
        m.location = GeoPoint(*lat, *lon);
        const auto date = parse_date(row.fields[3]);
        if (!date) throw ParseError("bad captured_on date '" + row.fields[3] + "'", row.line);
        m.captured_on = *date;
        const auto heading = parse_double_field(row.fields[4]);
        if (!heading || !std::isfinite(*heading)) throw ParseError("bad heading", row.line);
        m.heading_deg = wrap360(*heading);
        if (m.heading_deg != *heading) ++st.headings_normalized;
        const auto w = parse_int_field(row.fields[5]);
        const auto h = parse_int_field(row.fields[6]);
        if (!w || !h || !valid_pano_dims(*w, *h)) {
            throw ParseError("pano dims must be positive and 2:1 (width = 2*height)", row.line);
        }
        m.width = *w;
        m.height = *h;
        cat.panos.push_back(std::move(m));
        ++st.rows_kept;
    }
    std::sort(cat.panos.begin(), cat.panos.end(),
              [](const PanoMeta& a, const PanoMeta& b) { return a.pano_id < b.pano_id; });
    for (std::size_t i = 1; i < cat.panos.size(); ++i) {
        if (cat.panos[i].pano_id == cat.panos[i - 1].pano_id) {
            throw std::runtime_error("duplicate pano_id: " + cat.panos[i].pano_id);
        }
    }
    return cat;
}

std::string to_csv(const RampDataset& ds) {
    std::string out = "ramp_id,lat,lon,installed_on\n";
    for (const auto& r : ds.ramps) {
        out += csv_join({r.ramp_id, format_double(r.location.lat), format_double(r.location.lon),
                         r.installed_on ? r.installed_on->iso() : std::string()});
        out += '\n';
    }
    return out;
}

std::string to_csv(const PanoCatalog& cat) {
    std::string out = "pano_id,lat,lon,captured_on,heading,width,height\n";
    for (const auto& p : cat.panos) {
        out += csv_join({p.pano_id, format_double(p.location.lat), format_double(p.location.lon),
                         p.captured_on.iso(), format_double(p.heading_deg), std::to_string(p.width),
                         std::to_string(p.height)});
        out += '\n';
    }
    return out;
}

std::optional<ImageRgb> DirectoryImageProvider::fetch(const std::string& pano_id) {
    namespace fs = std::filesystem;
    for (const char* ext : {".png", ".jpg"}) {
        fs::path p = fs::path(root_) / (pano_id + ext);
        if (fs::exists(p)) return load_image(p.string());
    }
    return std::nullopt;
}

std::optional<ImageRgb> fetch_pano_image(ImageProvider& provider, const PanoMeta& meta) {
    auto img = provider.fetch(meta.pano_id);
    if (!img) return std::nullopt;
    if (img->width != meta.width || img->height != meta.height) {
        throw std::runtime_error("pano " + meta.pano_id + " image is " + std::to_string(img->width) +
                                 "x" + std::to_string(img->height) + ", catalog says " +
                                 std::to_string(meta.width) + "x" + std::to_string(meta.height));
    }
    return img;
}

}  // namespace ramplab
