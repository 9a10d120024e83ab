#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ramplab/csv.hpp"
#include "ramplab/fsio.hpp"
#include "ramplab/image.hpp"
#include "ramplab/ingest.hpp"

using namespace ramplab;

TEST_CASE("csv reader handles quoting, embedded separators, crlf") {
    std::istringstream in(
        "a,b,c\r\n"
        "1,\"two, two\",3\n"
        "\"multi\nline\",\"say \"\"hi\"\"\",x\n");
    auto rows = read_csv(in);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].fields == std::vector<std::string>{"a", "b", "c"});
    CHECK(rows[1].fields == std::vector<std::string>{"1", "two, two", "3"});
    CHECK(rows[2].fields == std::vector<std::string>{"multi\nline", "say \"hi\"", "x"});
    CHECK(rows[2].line == 3);

    std::istringstream bad("a,\"unterminated\n");
    CHECK_THROWS(read_csv(bad));
}

TEST_CASE("csv escaping round-trips") {
    std::vector<std::string> fields{"plain", "with,comma", "with\"quote", "with\nnewline", ""};
    std::istringstream in(csv_join(fields) + "\n");
    auto rows = read_csv(in);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fields == fields);
}

TEST_CASE("format_double emits shortest round-trip text") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(47.6062123456789)) == 47.6062123456789);
}

TEST_CASE("ramp csv parsing keeps good rows and counts the rest") {
    std::istringstream in(
        "id,lat,lon,built\n"
        "R2,47.61,-122.34,2015-02-03\n"
        "R1,47.60,-122.33,\n"
        ",47.60,-122.33,2015-01-01\n"          // missing id
        "R3,not-a-number,-122.33,2015-01-01\n" // bad latitude
        "R4,95.0,-122.33,2015-01-01\n"         // out-of-range latitude
        "R5,nan,-122.33,2015-01-01\n"          // non-finite latitude
        "R6,47.62,-122.35,03/02/2015\n");      // bad date -> kept, date missing
    ColumnMap cols;
    cols.id = "id";
    cols.lat = "lat";
    cols.lon = "lon";
    cols.installed_on = "built";
    IngestStats stats;
    auto ds = parse_ramp_csv(in, cols, "seattle", &stats);

    CHECK(ds.city == "seattle");
    REQUIRE(ds.ramps.size() == 3);
    CHECK(ds.ramps[0].ramp_id == "R1");  // sorted by id
    CHECK(ds.ramps[1].ramp_id == "R2");
    CHECK(ds.ramps[2].ramp_id == "R6");
    CHECK(ds.ramps[1].installed_on == parse_date("2015-02-03"));
    CHECK_FALSE(ds.ramps[0].installed_on.has_value());
    CHECK_FALSE(ds.ramps[2].installed_on.has_value());
    CHECK(stats.rows_total == 7);
    CHECK(stats.rows_kept == 3);
    CHECK(stats.rows_skipped == 4);
    CHECK(stats.missing_install_dates == 2);

    std::istringstream dup("id,lat,lon\nA,1,2\nA,3,4\n");
    CHECK_THROWS_AS(parse_ramp_csv(dup, ColumnMap{}, "x"), ParseError);

    std::istringstream nohdr("wrong,cols\n1,2\n");
    CHECK_THROWS_AS(parse_ramp_csv(nohdr, ColumnMap{}, "x"), ParseError);
}

TEST_CASE("ramp geojson parsing") {
    std::istringstream in(R"({
      "type": "FeatureCollection",
      "features": [
        {"type": "Feature", "geometry": {"type": "Point", "coordinates": [-122.34, 47.61]},
         "properties": {"id": "G2", "built": "2014-05-06"}},
        {"type": "Feature", "geometry": {"type": "Point", "coordinates": [-122.33, 47.60]},
         "properties": {"id": 17}},
        {"type": "Feature", "geometry": null, "properties": {"id": "G3"}},
        {"type": "Feature", "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]},
         "properties": {"id": "G4"}}
      ]})");
    ColumnMap cols;
    cols.id = "id";
    cols.installed_on = "built";
    IngestStats stats;
    auto ds = parse_ramp_geojson(in, cols, "seattle", &stats);
    REQUIRE(ds.ramps.size() == 2);
    CHECK(ds.ramps[0].ramp_id == "17");  // numeric ids stringified
    CHECK(ds.ramps[1].ramp_id == "G2");
    CHECK(ds.ramps[1].location.lat == doctest::Approx(47.61));
    CHECK(ds.ramps[1].location.lon == doctest::Approx(-122.34));
    CHECK(ds.ramps[1].installed_on == parse_date("2014-05-06"));
    CHECK(stats.rows_kept == 2);
    CHECK(stats.rows_skipped == 2);

    std::istringstream bad("{\"type\": \"Polygon\"}");
    CHECK_THROWS_AS(parse_ramp_geojson(bad, cols, "x"), ParseError);
    std::istringstream notjson("][");
    CHECK_THROWS_AS(parse_ramp_geojson(notjson, cols, "x"), ParseError);
}

TEST_CASE("pano catalog parsing enforces its schema") {
    std::istringstream in(
        "pano_id,lat,lon,captured_on,heading,width,height\n"
        "P2,47.61,-122.34,2019-06-01,365.5,4096,2048\n"
        "P1,47.60,-122.33,2020-01-15,-10,2048,1024\n");
    IngestStats stats;
    auto cat = parse_pano_csv(in, &stats);
    REQUIRE(cat.panos.size() == 2);
    CHECK(cat.panos[0].pano_id == "P1");
    CHECK(cat.panos[0].heading_deg == doctest::Approx(350.0));
    CHECK(cat.panos[0].width == 2048);
    CHECK(cat.panos[1].heading_deg == doctest::Approx(5.5));
    CHECK(stats.headings_normalized == 2);
    CHECK(cat.find("P2") != nullptr);
    CHECK(cat.find("P2")->captured_on == *parse_date("2019-06-01"));
    CHECK(cat.find("nope") == nullptr);

    std::istringstream badhdr("pano,lat,lon\nP1,1,2\n");
    CHECK_THROWS_AS(parse_pano_csv(badhdr), ParseError);
    std::istringstream baddims(
        "pano_id,lat,lon,captured_on,heading,width,height\n"
        "P1,47.6,-122.33,2019-06-01,0,4096,2000\n");
    CHECK_THROWS_AS(parse_pano_csv(baddims), ParseError);
    std::istringstream baddate(
        "pano_id,lat,lon,captured_on,heading,width,height\n"
        "P1,47.6,-122.33,junk,0,4096,2048\n");
    CHECK_THROWS_AS(parse_pano_csv(baddate), ParseError);
    std::istringstream dup(
        "pano_id,lat,lon,captured_on,heading,width,height\n"
        "P1,47.6,-122.33,2019-06-01,0,4096,2048\n"
        "P1,47.6,-122.33,2019-06-01,0,4096,2048\n");
    CHECK_THROWS_AS(parse_pano_csv(dup), ParseError);
}

TEST_CASE("canonical csv serialization is stable under re-parsing") {
    std::istringstream rin(
        "id,lat,lon,built\n"
        "B,47.611234,-122.341,2015-02-03\n"
        "A,47.6,-122.33,\n");
    ColumnMap cols;
    cols.installed_on = "built";
    auto ds = parse_ramp_csv(rin, cols, "seattle");
    std::string text = to_csv(ds);
    std::istringstream again(text);
    ColumnMap canonical;
    canonical.id = "ramp_id";
    canonical.installed_on = "installed_on";
    auto ds2 = parse_ramp_csv(again, canonical, "seattle");
    CHECK(to_csv(ds2) == text);
    REQUIRE(ds2.ramps.size() == 2);
    CHECK(ds2.ramps[0].ramp_id == "A");
    CHECK(ds2.ramps[1].location.lat == 47.611234);

    std::istringstream pin(
        "pano_id,lat,lon,captured_on,heading,width,height\n"
        "P1,47.6,-122.33,2019-06-01,12.25,4096,2048\n");
    auto cat = parse_pano_csv(pin);
    std::string ptext = to_csv(cat);
    std::istringstream pagain(ptext);
    auto cat2 = parse_pano_csv(pagain);
    CHECK(to_csv(cat2) == ptext);
}

TEST_CASE("directory image provider and dimension checks") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ramplab_ingest_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    ImageRgb img(64, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 64; ++x)
            img.set(x, y, {static_cast<uint8_t>(x), static_cast<uint8_t>(y), 7});
    save_png((dir / "P1.png").string(), img);

    DirectoryImageProvider provider(dir.string());
    auto got = provider.fetch("P1");
    REQUIRE(got.has_value());
    CHECK(*got == img);  // png round trip is lossless
    CHECK_FALSE(provider.fetch("absent").has_value());

    PanoMeta meta;
    meta.pano_id = "P1";
    meta.width = 64;
    meta.height = 32;
    CHECK(fetch_pano_image(provider, meta).has_value());
    meta.width = 128;
    meta.height = 64;
    CHECK_THROWS(fetch_pano_image(provider, meta));
    meta.pano_id = "absent";
    CHECK_FALSE(fetch_pano_image(provider, meta).has_value());

    fs::remove_all(dir);
}

TEST_CASE("atomic file io round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "ramplab_fsio_test";
    fs::remove_all(dir);
    fs::path p = dir / "nested" / "file.txt";
    write_file_atomic(p.string(), "hello\nworld\n");
    CHECK(read_file(p.string()) == "hello\nworld\n");
    write_file_atomic(p.string(), "replaced");
    CHECK(read_file(p.string()) == "replaced");
    CHECK_THROWS(read_file((dir / "missing.txt").string()));
    fs::remove_all(dir);
}
