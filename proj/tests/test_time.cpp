#include <doctest.h>

#include "skynow/errors.hpp"
#include "skynow/time_util.hpp"

using namespace skynow;

TEST_CASE("civil conversions round-trip") {
    const CivilDateTime c{2016, 6, 21, 20, 7, 33};
    const UtcSeconds t = utc_from_civil(c);
    const CivilDateTime back = civil_from_utc(t);
    CHECK(back.year == 2016);
    CHECK(back.month == 6);
    CHECK(back.day == 21);
    CHECK(back.hour == 20);
    CHECK(back.minute == 7);
    CHECK(back.second == 33);
    CHECK(utc_from_civil({1970, 1, 1, 0, 0, 0}) == 0);
    CHECK(utc_from_civil({2000, 1, 1, 0, 0, 0}) == 946684800);
}

TEST_CASE("iso and compact parsing agree") {
    const UtcSeconds a = parse_iso8601("2019-07-04T09:10:30Z");
    const UtcSeconds b = parse_compact_timestamp("20190704_091030");
    CHECK(a == b);
    CHECK(format_iso8601(a) == "2019-07-04T09:10:30Z");
    CHECK(format_compact_timestamp(a) == "20190704_091030");
    CHECK(parse_iso8601("2019-07-04 09:10:30") == a);
    CHECK_THROWS_AS(parse_iso8601("not a time"), DataError);
    CHECK_THROWS_AS(parse_compact_timestamp("2019"), DataError);
}

TEST_CASE("local bucketing uses the fixed site offset") {
    // 2016-01-01T02:00:00Z is still 2015-12-31 18:00 at UTC-8.
    const UtcSeconds t = parse_iso8601("2016-01-01T02:00:00Z");
    CHECK(local_year(t, -8 * 3600) == 2015);
    CHECK(local_year(t, 0) == 2016);
    CHECK(local_hour(t, -8 * 3600) == 18);
    CHECK(local_month(t, -8 * 3600) == 12);
    CHECK(local_day_of_month(t, -8 * 3600) == 31);
    CHECK(local_day_index(t, -8 * 3600) + 1 == local_day_index(t, 0));
    CHECK(seconds_field(parse_iso8601("2016-01-01T02:00:37Z")) == 37);
}

TEST_CASE("julian day anchors") {
    CHECK(julian_day(0) == doctest::Approx(2440587.5));
    CHECK(julian_day(utc_from_civil({2000, 1, 1, 12, 0, 0})) == doctest::Approx(2451545.0));
}
