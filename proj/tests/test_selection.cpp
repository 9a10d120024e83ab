#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "ramplab/rng.hpp"
#include "ramplab/selection.hpp"

using namespace ramplab;

namespace {

std::vector<GeoPoint> random_points(Rng& rng, std::size_t n, double lat0, double lon0,
                                    double span_deg) {
    std::vector<GeoPoint> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({lat0 + rng.uniform(-span_deg, span_deg),
                       lon0 + rng.uniform(-span_deg, span_deg)});
    return pts;
}

std::vector<std::size_t> linear_within(const std::vector<GeoPoint>& pts, const GeoPoint& c,
                                       double radius_m) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (haversine_m(c, pts[i]) <= radius_m) out.push_back(i);
    return out;
}

PanoMeta pano(const std::string& id, double lat, double lon, const std::string& date = "2019-06-01") {
    PanoMeta p;
    p.pano_id = id;
    p.location = {lat, lon};
    p.captured_on = *parse_date(date);
    return p;
}

CurbRampRecord ramp(const std::string& id, double lat, double lon, const char* date = nullptr) {
    CurbRampRecord r;
    r.ramp_id = id;
    r.location = {lat, lon};
    if (date) r.installed_on = parse_date(date);
    return r;
}

}  // namespace

TEST_CASE("spatial index equals linear scan on random clouds") {
    Rng rng(101);
    for (int trial = 0; trial < 6; ++trial) {
        auto pts = random_points(rng, 400, 47.6, -122.33, 0.01);  // ~1km x 1.5km patch
        SpatialIndex index(pts);
        for (int q = 0; q < 60; ++q) {
            GeoPoint c{47.6 + rng.uniform(-0.012, 0.012), -122.33 + rng.uniform(-0.012, 0.012)};
            double radius = rng.uniform(0.0, 400.0);
            CHECK(index.within(c, radius) == linear_within(pts, c, radius));
        }
    }
}

TEST_CASE("spatial index radius boundary is a closed ball") {
    std::vector<GeoPoint> pts{{47.6, -122.33}};
    SpatialIndex index(pts);
    GeoPoint center{47.6, -122.3285};
    double d = haversine_m(center, pts[0]);
    CHECK(index.within(center, d).size() == 1);                 // exactly at radius: included
    CHECK(index.within(center, std::nextafter(d, 0.0)).empty());  // just under: excluded
    CHECK(index.within(center, 0.0).empty());
    CHECK(index.within(pts[0], 0.0).size() == 1);  // zero radius still finds the point itself
}

TEST_CASE("spatial index works across the antimeridian") {
    std::vector<GeoPoint> pts{{10.0, 179.9998}, {10.0, -179.9998}, {10.0, 179.99}};
    SpatialIndex index(pts);
    auto hits = index.within({10.0, -179.9999}, 100.0);
    CHECK(hits == std::vector<std::size_t>{0, 1});
}

TEST_CASE("pano selection keeps panos with a ramp inside the radius") {
    // ~0.0001 deg lat is ~11.1 m.
    RampDataset ds;
    ds.ramps = {ramp("R1", 47.60005, -122.33)};  // ~5.6 m from P1
    PanoCatalog cat;
    cat.panos = {pano("P1", 47.6, -122.33), pano("P2", 47.6003, -122.33),
                 pano("P3", 47.60008, -122.33)};
    std::sort(cat.panos.begin(), cat.panos.end(),
              [](const PanoMeta& a, const PanoMeta& b) { return a.pano_id < b.pano_id; });

    auto picked = select_panos(cat, ds, 10.0);
    CHECK(picked == std::vector<std::string>{"P1", "P3"});
    CHECK(select_panos(cat, ds, 1.0).empty());
    CHECK(select_panos(cat, RampDataset{}, 10.0).empty());
}

TEST_CASE("label candidates apply distance and temporal filters") {
    PanoMeta p = pano("P1", 47.6, -122.33, "2019-06-01");
    RampDataset ds;
    ds.ramps = {
        ramp("R1", 47.60010, -122.33, "2015-01-01"),  // ~11 m, installed before capture
        ramp("R2", 47.60020, -122.33),                // ~22 m, unknown date -> kept
        ramp("R3", 47.60025, -122.33, "2019-06-01"),  // installed the capture day -> rejected
        ramp("R4", 47.60028, -122.33, "2020-01-01"),  // installed after capture -> rejected
        ramp("R5", 47.62, -122.33, "2015-01-01"),     // far away
    };
    std::vector<GeoPoint> locs;
    for (const auto& r : ds.ramps) locs.push_back(r.location);
    SpatialIndex index(locs);

    SelectionReport report;
    auto cands = label_candidates(p, ds, index, 35.0, &report);
    REQUIRE(cands.size() == 2);
    CHECK(cands[0].ramp_id == "R1");
    CHECK(cands[1].ramp_id == "R2");
    CHECK(cands[0].pano_id == "P1");
    CHECK(cands[0].distance_m == doctest::Approx(11.12).epsilon(0.01));
    CHECK(cands[0].bearing_deg == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(report.rejected_temporal == 2);

    // A ramp exactly at the pano gets the bearing convention 0.
    RampDataset at;
    at.ramps = {ramp("R0", 47.6, -122.33)};
    SpatialIndex ai({at.ramps[0].location});
    auto czero = label_candidates(p, at, ai, 35.0);
    REQUIRE(czero.size() == 1);
    CHECK(czero[0].distance_m == 0.0);
    CHECK(czero[0].bearing_deg == 0.0);
}

TEST_CASE("null sampling hits the target fraction and respects the buffer") {
    // 80 positives and plenty of safely-distant panos: expect exactly
    // round(0.2 / 0.8 * 80) = 20 nulls.
    RampDataset ds;
    PanoCatalog cat;
    std::vector<std::string> positives;
    for (int i = 0; i < 80; ++i) {
        double lat = 47.6 + 0.002 * i;
        std::string pid = "POS" + std::to_string(100 + i);
        cat.panos.push_back(pano(pid, lat, -122.33));
        ds.ramps.push_back(ramp("R" + std::to_string(100 + i), lat, -122.33, "2015-01-01"));
        positives.push_back(pid);
    }
    for (int i = 0; i < 40; ++i) {
        // A parallel column ~440 m east of the ramp column.
        cat.panos.push_back(pano("NEG" + std::to_string(100 + i), 47.6 + 0.004 * i, -122.324));
    }
    // One pano just inside the 60 m buffer: must never be sampled.
    cat.panos.push_back(pano("NEAR", 47.6 + 0.0004, -122.33));  // ~44 m from a ramp
    std::sort(cat.panos.begin(), cat.panos.end(),
              [](const PanoMeta& a, const PanoMeta& b) { return a.pano_id < b.pano_id; });
    std::sort(positives.begin(), positives.end());

    SelectionReport report;
    auto nulls = sample_null_panos(cat, ds, positives, 60.0, 0.20, 7, &report);
    CHECK(nulls.size() == 20);
    CHECK(report.nulls_sampled == 20);
    CHECK(report.null_shortfall == 0);
    CHECK(std::is_sorted(nulls.begin(), nulls.end()));
    CHECK(std::count(nulls.begin(), nulls.end(), "NEAR") == 0);
    for (const auto& id : nulls) {
        CHECK(id.substr(0, 3) == "NEG");
        const PanoMeta* m = cat.find(id);
        for (const auto& r : ds.ramps) CHECK(haversine_m(m->location, r.location) >= 60.0);
    }

    // Determinism: same seed, same draw; different seed draws differently.
    auto again = sample_null_panos(cat, ds, positives, 60.0, 0.20, 7);
    CHECK(again == nulls);
    auto other = sample_null_panos(cat, ds, positives, 60.0, 0.20, 8);
    CHECK(other != nulls);

    // Shortfall: ask for more nulls than eligible panos exist.
    SelectionReport short_report;
    auto most = sample_null_panos(cat, ds, positives, 60.0, 0.50, 7, &short_report);
    CHECK(most.size() == 40);  // only 40 eligible
    CHECK(short_report.null_shortfall == 40);  // wanted 80
}

TEST_CASE("selection report serializes all counters") {
    SelectionReport r;
    r.panos_selected = 1;
    r.candidates = 2;
    r.nulls_sampled = 3;
    r.null_shortfall = 4;
    r.rejected_temporal = 5;
    r.rejected_spatial = 6;
    std::string js = r.to_json();
    for (const char* key : {"panos_selected", "candidates", "nulls_sampled", "null_shortfall",
                            "rejected_temporal", "rejected_spatial"})
        CHECK(js.find(key) != std::string::npos);
}
