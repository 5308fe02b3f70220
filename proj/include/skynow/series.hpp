#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "skynow/site.hpp"
#include "skynow/time_util.hpp"

namespace skynow {

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

inline bool is_missing(double v) { return v != v; }

// One irradiance measurement row. dhi/dni may be missing (NaN).
struct IrradianceSample {
    UtcSeconds timestamp = 0;
    double ghi = kMissing;
    double dhi = kMissing;
    double dni = kMissing;
    std::string source;  // sensor id, empty for fused/single-sensor data
};

// Pipeline stages a series has passed through, used to assert stage ordering.
enum class SeriesStage : unsigned {
    Raw = 0,
    Fused = 1u << 0,
    Interpolated1s = 1u << 1,
    TimeShifted = 1u << 2,
    ZenithFiltered = 1u << 3,
};

// Time-ordered single-source irradiance series, stored column-wise. The
// interpolated flag marks samples synthesized by resampling (vs measured).
struct IrradianceSeries {
    Site site;
    int native_interval_s = 60;
    unsigned stages = 0;  // bitmask of SeriesStage

    std::vector<UtcSeconds> timestamp;
    std::vector<double> ghi;
    std::vector<double> dhi;
    std::vector<double> dni;
    std::vector<std::uint8_t> interpolated;

    std::size_t size() const { return timestamp.size(); }
    bool empty() const { return timestamp.empty(); }

    void push(UtcSeconds t, double g, double dh, double dn, bool interp = false);

    // Throws DataError unless timestamps are strictly increasing.
    void check_monotone() const;

    // Index of the sample at exactly t, or npos.
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t index_at(UtcSeconds t) const;

    bool has_stage(SeriesStage s) const { return stages & static_cast<unsigned>(s); }
    void mark_stage(SeriesStage s) { stages |= static_cast<unsigned>(s); }
};

// Seconds of data dropped by the resampling gap rule, per local day.
struct GapReport {
    std::map<std::int64_t, std::int64_t> dropped_seconds_by_day;  // local day index
    std::int64_t total_dropped_seconds = 0;
    std::int64_t gap_count = 0;
};

// Multi-sensor rows grouped per instant, as read from a CSV where the same
// timestamp repeats with distinct sensor ids.
struct MultiSensorSeries {
    Site site;
    std::vector<IrradianceSample> rows;  // sorted by (timestamp, source)
};

// CSV I/O. Input schema: timestamp_utc,ghi,dhi,dni[,sensor_id]. Empty fields
// are missing. Output adds interpolated + rejected_reason columns.
IrradianceSeries read_series_csv(const std::string& path, const Site& site);
MultiSensorSeries read_multisensor_csv(const std::string& path, const Site& site);
void write_series_csv(const std::string& path, const IrradianceSeries& s);

}  // namespace skynow
