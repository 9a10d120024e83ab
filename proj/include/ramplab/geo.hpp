#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ramplab {

// Mean Earth radius used for all great-circle math in this project.
inline constexpr double kEarthRadiusM = 6371000.0;

double deg2rad(double deg);
double rad2deg(double rad);

// Wraps an angle in degrees into [0, 360).
double wrap360(double deg);

// Wraps an angle in degrees into [-180, 180).
double wrap180(double deg);

// A WGS84-style geodetic coordinate. Latitude must lie in [-90, 90];
// longitude is normalized into [-180, 180) on construction.
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;

    GeoPoint() = default;
    GeoPoint(double lat_deg, double lon_deg);

    bool operator==(const GeoPoint& o) const { return lat == o.lat && lon == o.lon; }
};

// Great-circle distance in meters (haversine on a sphere of kEarthRadiusM).
// Symmetric, zero iff the two points are identical.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

// Initial great-circle bearing from `from` toward `to`, degrees clockwise
// from true north in [0, 360). Throws std::invalid_argument when the points
// coincide (the bearing is undefined there).
double initial_bearing_deg(const GeoPoint& from, const GeoPoint& to);

// Calendar date. Strictly validated (month/day ranges, leap years).
// Ordering is lexicographic on (year, month, day).
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    bool valid() const;
    std::string iso() const;  // "YYYY-MM-DD"

    auto operator<=>(const Date&) const = default;
};

// Parses a strict "YYYY-MM-DD" string; std::nullopt when malformed or not a
// real calendar date.
std::optional<Date> parse_date(const std::string& s);

// Calendar arithmetic (proleptic Gregorian). days may be negative.
Date add_days(const Date& d, long days);

// One government curb-ramp record: a point plus optional install date.
struct CurbRampRecord {
    std::string ramp_id;
    GeoPoint location;
    std::optional<Date> installed_on;
};

// Catalog row for one equirectangular street panorama.
struct PanoMeta {
    std::string pano_id;
    GeoPoint location;
    Date captured_on;
    double heading_deg = 0.0;  // bearing of image center column, [0, 360)
    int width = 4096;
    int height = 2048;
};

// True iff width == 2 * height (full equirectangular sphere).
bool valid_pano_dims(int width, int height);

}  // namespace ramplab
