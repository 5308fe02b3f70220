#pragma once

#include <cstdint>
#include <string>

namespace skynow {

// All internal timestamps are UTC seconds since the Unix epoch. Site-local
// time exists only for display and for day/hour bucketing, via an explicit
// fixed offset.
using UtcSeconds = std::int64_t;

struct CivilDateTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;
    int minute = 0;
    int second = 0;
};

CivilDateTime civil_from_utc(UtcSeconds t);
UtcSeconds utc_from_civil(const CivilDateTime& c);

// Days since 1970-01-01 of the civil date containing t, after applying
// a fixed offset (seconds east of UTC). Used as the grouping "day key".
std::int64_t local_day_index(UtcSeconds t, std::int64_t utc_offset_s);
int local_hour(UtcSeconds t, std::int64_t utc_offset_s);   // 0..23
int local_month(UtcSeconds t, std::int64_t utc_offset_s);  // 1..12
int local_year(UtcSeconds t, std::int64_t utc_offset_s);
int local_day_of_month(UtcSeconds t, std::int64_t utc_offset_s);  // 1..31

int seconds_field(UtcSeconds t);  // 0..59, the :SS field in UTC

// "YYYY-MM-DDTHH:MM:SSZ" (also accepts a space separator and missing Z).
UtcSeconds parse_iso8601(const std::string& s);
std::string format_iso8601(UtcSeconds t);

// "YYYYMMDD_HHMMSS", the timestamp convention embedded in image file names.
UtcSeconds parse_compact_timestamp(const std::string& s);
std::string format_compact_timestamp(UtcSeconds t);

// Fractional Julian day of a UTC instant (for ephemeris use).
double julian_day(UtcSeconds t);

}  // namespace skynow
