#include "skynow/time_util.hpp"

#include <cstdio>
#include <cstdlib>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

// Howard Hinnant's civil-days algorithms (public domain).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);           // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);           // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                // [0, 11]
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
    return a - floor_div(a, b) * b;
}

}  // namespace

CivilDateTime civil_from_utc(UtcSeconds t) {
    const std::int64_t days = floor_div(t, 86400);
    const std::int64_t sod = floor_mod(t, 86400);
    CivilDateTime c;
    civil_from_days(days, c.year, c.month, c.day);
    c.hour = static_cast<int>(sod / 3600);
    c.minute = static_cast<int>((sod % 3600) / 60);
    c.second = static_cast<int>(sod % 60);
    return c;
}

UtcSeconds utc_from_civil(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 +
           c.hour * 3600 + c.minute * 60 + c.second;
}

std::int64_t local_day_index(UtcSeconds t, std::int64_t utc_offset_s) {
    return floor_div(t + utc_offset_s, 86400);
}

int local_hour(UtcSeconds t, std::int64_t utc_offset_s) {
    return static_cast<int>(floor_mod(t + utc_offset_s, 86400) / 3600);
}

int local_month(UtcSeconds t, std::int64_t utc_offset_s) {
    return civil_from_utc(t + utc_offset_s).month;
}

int local_year(UtcSeconds t, std::int64_t utc_offset_s) {
    return civil_from_utc(t + utc_offset_s).year;
}

int local_day_of_month(UtcSeconds t, std::int64_t utc_offset_s) {
    return civil_from_utc(t + utc_offset_s).day;
}

int seconds_field(UtcSeconds t) {
    return static_cast<int>(floor_mod(t, 60));
}

UtcSeconds parse_iso8601(const std::string& s) {
    CivilDateTime c;
    char sep = 0;
    const int n = std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &c.year, &c.month,
                              &c.day, &sep, &c.hour, &c.minute, &c.second);
    if (n < 3 || (n > 3 && n < 7) || (sep != 'T' && sep != ' ' && n > 3))
        throw DataError("bad timestamp: '" + s + "'");
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 ||
        c.hour > 23 || c.minute > 59 || c.second > 60)
        throw DataError("timestamp fields out of range: '" + s + "'");
    return utc_from_civil(c);
}

std::string format_iso8601(UtcSeconds t) {
    const CivilDateTime c = civil_from_utc(t);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

UtcSeconds parse_compact_timestamp(const std::string& s) {
    CivilDateTime c;
    if (std::sscanf(s.c_str(), "%4d%2d%2d_%2d%2d%2d", &c.year, &c.month, &c.day,
                    &c.hour, &c.minute, &c.second) != 6)
        throw DataError("bad compact timestamp: '" + s + "'");
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 ||
        c.hour > 23 || c.minute > 59 || c.second > 60)
        throw DataError("compact timestamp fields out of range: '" + s + "'");
    return utc_from_civil(c);
}

std::string format_compact_timestamp(UtcSeconds t) {
    const CivilDateTime c = civil_from_utc(t);
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d%02d%02d_%02d%02d%02d",
                  c.year, c.month, c.day, c.hour, c.minute, c.second);
    return buf;
}

double julian_day(UtcSeconds t) {
    // Unix epoch is JD 2440587.5.
    return 2440587.5 + static_cast<double>(t) / 86400.0;
}

}  // namespace skynow
