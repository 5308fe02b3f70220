#pragma once

#include <vector>

#include "skynow/series.hpp"
#include "skynow/solar.hpp"

namespace skynow {

// Resampling to a 1-second grid by linear interpolation. Interpolation only
// bridges consecutive samples at most `max_bridge_s` apart (60 s); wider
// spacings produce no synthesized samples and spans of at least
// `discard_gap_s` (120 s) are charged to the gap report. Original samples are
// always retained. Idempotent.
struct ResampleRules {
    int max_bridge_s = 60;
    int discard_gap_s = 120;
    // Spacings at least this wide are day/night boundaries, not data loss,
    // and stay out of the dropped-gap accounting.
    int night_gap_s = 6 * 3600;
};

IrradianceSeries interpolate_1s(const IrradianceSeries& in, GapReport* report = nullptr,
                                const ResampleRules& rules = ResampleRules{});
// Single-threaded reference implementation, kept for equivalence tests.
IrradianceSeries interpolate_1s_serial(const IrradianceSeries& in,
                                       GapReport* report = nullptr,
                                       const ResampleRules& rules = ResampleRules{});

// Keeps exactly the samples with solar zenith <= max_zenith_deg (default 80).
IrradianceSeries zenith_filter(const IrradianceSeries& in, const Site& site,
                               double max_zenith_deg = 80.0);
IrradianceSeries zenith_filter_serial(const IrradianceSeries& in, const Site& site,
                                      double max_zenith_deg = 80.0);

// Median fusion of redundant sensors with the GHI closure consistency check:
// an instant is accepted iff |M(DNI) cos(zenith) + M(DHI) - M(GHI)| <= tol,
// and its fused GHI label is M(GHI).
struct MedianFilterResult {
    IrradianceSeries accepted;                     // fused series
    std::int64_t rejected_inconsistent = 0;        // closure violated
    std::int64_t rejected_missing_component = 0;   // a component set was empty
};

double median(std::vector<double> values);  // even count: mean of central pair

// Per-instant primitive.
struct InstantReadings {
    std::vector<double> ghi, dhi, dni;
};
enum class MedianVerdict { Accepted, Inconsistent, MissingComponent };
MedianVerdict median_consistency_check(const InstantReadings& r,
                                       const SolarPosition& pos, double tol_wm2,
                                       double* fused_ghi, double* fused_dhi,
                                       double* fused_dni);

MedianFilterResult median_consistency_filter(const MultiSensorSeries& in,
                                             double tol_wm2 = 10.0);

// Training-set time shift: every timestamp becomes T + delta. Values are
// untouched. Only the Train role may shift; a nonzero shift on Test data is a
// contract violation.
enum class SeriesRole { Train, Test };

struct TimeShift {
    std::int64_t delta_s = 0;  // |delta| <= 300
};

IrradianceSeries apply_time_shift(const IrradianceSeries& in, TimeShift shift,
                                  SeriesRole role);

// Folsom-style DNI back-computation: dni = (ghi - dhi) / cos(zenith), only
// where cos(zenith) >= cos(80 deg). Fills missing dni in place.
void derive_dni_from_ghi_dhi(IrradianceSeries& s, const Site& site);

}  // namespace skynow
