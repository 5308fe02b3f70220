#pragma once

#include <cstdint>
#include <string>

namespace skynow {

// A measurement station: geographic position plus the fixed standard-time
// offset used for day/hour bucketing.
struct Site {
    std::string name;
    double latitude = 0.0;   // degrees, [-90, 90], north positive
    double longitude = 0.0;  // degrees, [-180, 180], east positive
    double altitude_m = 0.0;
    std::int64_t utc_offset_s = 0;  // seconds east of UTC, [-50400, 50400]

    void validate() const;
};

Site site_from_json_file(const std::string& path);
Site site_from_json_text(const std::string& text);

}  // namespace skynow
