#include "ramplab/geo.hpp"

#include <cmath>
#include <cstdio>

namespace ramplab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double deg2rad(double deg) { return deg * (kPi / 180.0); }
double rad2deg(double rad) { return rad * (180.0 / kPi); }

double wrap360(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    // fmod can return exactly 360.0 after the += when deg is a tiny negative.
    if (w >= 360.0) w -= 360.0;
    return w;
}

double wrap180(double deg) {
    double w = wrap360(deg + 180.0) - 180.0;
    return w;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg) : lat(lat_deg), lon(lon_deg) {
    if (!(lat >= -90.0 && lat <= 90.0)) {
        throw std::invalid_argument("latitude out of range [-90, 90]: " + std::to_string(lat_deg));
    }
    if (!std::isfinite(lon)) {
        throw std::invalid_argument("longitude is not finite");
    }
    lon = wrap180(lon);
}

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    if (a.lat == b.lat && a.lon == b.lon) return 0.0;
    const double phi1 = deg2rad(a.lat);
    const double phi2 = deg2rad(b.lat);
    const double dphi = deg2rad(b.lat - a.lat);
    const double dlam = deg2rad(b.lon - a.lon);
    const double sp = std::sin(dphi / 2.0);
    const double sl = std::sin(dlam / 2.0);
    const double h = sp * sp + std::cos(phi1) * std::cos(phi2) * sl * sl;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double initial_bearing_deg(const GeoPoint& from, const GeoPoint& to) {
    if (from.lat == to.lat && from.lon == to.lon) {
        throw std::invalid_argument("bearing undefined for coincident points");
    }
    const double phi1 = deg2rad(from.lat);
    const double phi2 = deg2rad(to.lat);
    const double dlam = deg2rad(to.lon - from.lon);
    const double y = std::sin(dlam) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlam);
    return wrap360(rad2deg(std::atan2(y, x)));
}

namespace {

bool leap_year(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m < 1 || m > 12) return 0;
    if (m == 2 && leap_year(y)) return 29;
    return kDays[m - 1];
}

}  // namespace

bool Date::valid() const {
    return year >= 1 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

std::optional<Date> parse_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
    }
    Date d;
    d.year = std::stoi(s.substr(0, 4));
    d.month = std::stoi(s.substr(5, 2));
    d.day = std::stoi(s.substr(8, 2));
    if (!d.valid()) return std::nullopt;
    return d;
}

namespace {

// Civil-calendar <-> day-count conversion (proleptic Gregorian), the usual
// era-based formulation.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2u) / 5u + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

Date civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return Date{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

}  // namespace

Date add_days(const Date& d, long days) {
    return civil_from_days(days_from_civil(d.year, d.month, d.day) + days);
}

bool valid_pano_dims(int width, int height) {
    return width > 0 && height > 0 && width == 2 * height;
}

}  // namespace ramplab
