#pragma once

#include <map>
#include <string>
#include <vector>

#include "skynow/series.hpp"
#include "skynow/site.hpp"
#include "skynow/solar.hpp"

namespace skynow {

enum class ClearSkyKind { Extraterrestrial, SimplifiedSolis };

// Clear-sky GHI model. SimplifiedSolis is the broadband closed form of
// Ineichen (2008); its per-site atmosphere parameters live in `parameters`:
//   aod700               aerosol optical depth at 700 nm   (default 0.1)
//   precipitable_water   cm                                (default 1.0)
//   pressure_pa          station pressure (default: from site altitude)
struct ClearSkyModel {
    ClearSkyKind kind = ClearSkyKind::SimplifiedSolis;
    SolarConstant i0;
    std::map<std::string, double> parameters;

    static ClearSkyModel from_name(const std::string& name);  // config parsing
    double param(const std::string& key, double fallback) const;
};

// Clear-sky and extraterrestrial GHI at one instant. Invariant:
// 0 <= i_clr <= i_extr.
struct ClearSkyContext {
    double i_clr = 0.0;
    double i_extr = 0.0;
};

enum class SkyCondition : std::uint8_t { Clear = 0, Cloudy = 1 };

ClearSkyContext predict_clear_sky(const ClearSkyModel& model,
                                  const SolarPosition& pos, const Site& site);

// kt = I / I_clr. Values above 1 are legal (overirradiance).
// Throws RangeError when the normalizer is not positive.
double clear_sky_index(double ghi, const ClearSkyContext& ctx);
// Kt = I / I_extr.
double clearness_index(double ghi, const ClearSkyContext& ctx);

// Reno & Hansen sliding-window clear-period detection: five statistics of the
// measured vs expected clear-sky GHI over a rolling window. A sample is Clear
// iff it lies in at least one window where all five criteria pass.
struct RenoThresholds {
    double mean_diff_wm2 = 75.0;
    double max_diff_wm2 = 75.0;
    double line_length_lower = -5.0;
    double line_length_upper = 10.0;
    double slope_var = 0.005;      // normalized stddev of slopes
    double max_slope_diff = 8.0;   // W/m^2 per sample
};

struct RenoParams {
    int window_s = 600;
    RenoThresholds thresholds;
    // v2 placeholder: iterative alpha renormalization of the clear-sky curve
    // (disabled; single-pass comparison only).
    bool renormalize = false;
};

// Flags every sample of a regularly sampled series. Windows never span day
// boundaries; days are cut where the sun crosses the horizon (or at data
// gaps). Requires at least 3 samples per window.
std::vector<SkyCondition> detect_clear_periods(const IrradianceSeries& series,
                                               const ClearSkyModel& model,
                                               const RenoParams& params = RenoParams{});

// Same detector against a caller-supplied expected clear-sky curve, for when
// the curve is already materialized.
std::vector<SkyCondition> detect_clear_periods(const std::vector<UtcSeconds>& t,
                                               const std::vector<double>& measured,
                                               const std::vector<double>& expected,
                                               int interval_s,
                                               const RenoParams& params = RenoParams{});

const char* to_string(SkyCondition c);

}  // namespace skynow
