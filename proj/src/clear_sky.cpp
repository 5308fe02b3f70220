#include "skynow/clear_sky.hpp"

#include <algorithm>
#include <cmath>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

double pressure_from_altitude(double altitude_m) {
    // ISA barometric profile, Pa.
    return 100.0 * std::pow((44331.514 - altitude_m) / 11880.516, 1.0 / 0.1902632);
}

// Ineichen (2008) broadband simplified Solis: GHI under clear sky as a
// function of apparent elevation, water vapor w (cm), aerosol optical depth
// at 700 nm, and station pressure.
double solis_ghi(double apparent_elevation_deg, double w, double aod700,
                 double pressure_pa, double i0) {
    if (apparent_elevation_deg <= 0.0) return 0.0;
    w = std::max(w, 0.2);
    const double lp = std::log(pressure_pa / 101325.0);
    const double lw = std::log(w);

    const double i00 = 1.08 * std::pow(w, 0.0051);
    const double i01 = 0.97 * std::pow(w, 0.032);
    const double i02 = 0.12 * std::pow(w, 0.56);
    const double i0p = i0 * (i02 * aod700 * aod700 + i01 * aod700 + i00 + 0.071 * lp);

    const double tg1 = 1.24 + 0.047 * lw + 0.0061 * lw * lw;
    const double tg0 = 0.27 + 0.043 * lw + 0.0090 * lw * lw;
    const double tgp = 0.0079 * w + 0.1;
    const double taug = tg1 * aod700 + tg0 + tgp * lp;

    const double g = -0.0147 * lw - 0.3079 * aod700 * aod700 + 0.2846 * aod700 + 0.3798;

    const double s = std::max(1e-30, std::sin(apparent_elevation_deg * kDeg2Rad));
    return i0p * std::exp(-taug / std::pow(s, g)) * s;
}

}  // namespace

ClearSkyModel ClearSkyModel::from_name(const std::string& name) {
    ClearSkyModel m;
    if (name == "extraterrestrial") {
        m.kind = ClearSkyKind::Extraterrestrial;
    } else if (name == "simplified_solis") {
        m.kind = ClearSkyKind::SimplifiedSolis;
    } else {
        throw ConfigError("unknown clear-sky model: '" + name + "'");
    }
    return m;
}

double ClearSkyModel::param(const std::string& key, double fallback) const {
    auto it = parameters.find(key);
    return it == parameters.end() ? fallback : it->second;
}

ClearSkyContext predict_clear_sky(const ClearSkyModel& model,
                                  const SolarPosition& pos, const Site& site) {
    ClearSkyContext ctx;
    ctx.i_extr = extraterrestrial_ghi(pos, model.i0);
    switch (model.kind) {
        case ClearSkyKind::Extraterrestrial:
            ctx.i_clr = ctx.i_extr;
            break;
        case ClearSkyKind::SimplifiedSolis: {
            const double w = model.param("precipitable_water", 1.0);
            const double aod = model.param("aod700", 0.1);
            const double p = model.param("pressure_pa",
                                         pressure_from_altitude(site.altitude_m));
            const double ghi = solis_ghi(90.0 - pos.zenith_deg, w, aod, p, model.i0.wm2);
            ctx.i_clr = std::clamp(ghi, 0.0, ctx.i_extr);
            break;
        }
        default:
            throw ConfigError("unknown clear-sky model kind");
    }
    return ctx;
}

double clear_sky_index(double ghi, const ClearSkyContext& ctx) {
    if (!(ctx.i_clr > 0.0))
        throw RangeError("clear_sky_index: I_clr <= 0 (sample too close to horizon)");
    return ghi / ctx.i_clr;
}

double clearness_index(double ghi, const ClearSkyContext& ctx) {
    if (!(ctx.i_extr > 0.0))
        throw RangeError("clearness_index: I_extr <= 0 (sample too close to horizon)");
    return ghi / ctx.i_extr;
}

const char* to_string(SkyCondition c) {
    return c == SkyCondition::Clear ? "clear" : "cloudy";
}

namespace {

// All five Reno criteria for one window [b, b+n). dt_min is the sample
// spacing in minutes (line lengths are computed in (W/m^2, minute) space).
bool window_is_clear(const double* meas, const double* expc, std::size_t n,
                     double dt_min, const RenoThresholds& th) {
    double sum_m = 0.0, sum_e = 0.0, max_m = meas[0], max_e = expc[0];
    for (std::size_t i = 0; i < n; ++i) {
        sum_m += meas[i];
        sum_e += expc[i];
        max_m = std::max(max_m, meas[i]);
        max_e = std::max(max_e, expc[i]);
    }
    const double mean_m = sum_m / static_cast<double>(n);
    const double mean_e = sum_e / static_cast<double>(n);
    if (std::abs(mean_m - mean_e) >= th.mean_diff_wm2) return false;
    if (std::abs(max_m - max_e) >= th.max_diff_wm2) return false;

    double ll_m = 0.0, ll_e = 0.0;
    double slope_sum = 0.0, slope_sq = 0.0, max_slope_dev = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        const double dm = meas[i] - meas[i - 1];
        const double de = expc[i] - expc[i - 1];
        ll_m += std::sqrt(dm * dm + dt_min * dt_min);
        ll_e += std::sqrt(de * de + dt_min * dt_min);
        slope_sum += dm;
        slope_sq += dm * dm;
        max_slope_dev = std::max(max_slope_dev, std::abs(dm - de));
    }
    const double ll_diff = ll_m - ll_e;
    if (!(ll_diff > th.line_length_lower && ll_diff < th.line_length_upper)) return false;

    const double ns = static_cast<double>(n - 1);
    const double var = std::max(0.0, slope_sq / ns - (slope_sum / ns) * (slope_sum / ns));
    if (mean_m > 0.0 && std::sqrt(var) / mean_m >= th.slope_var) return false;

    if (max_slope_dev >= th.max_slope_diff) return false;
    return true;
}

}  // namespace

std::vector<SkyCondition> detect_clear_periods(const std::vector<UtcSeconds>& t,
                                               const std::vector<double>& measured,
                                               const std::vector<double>& expected,
                                               int interval_s,
                                               const RenoParams& params) {
    if (measured.size() != t.size() || expected.size() != t.size())
        throw ShapeError("detect_clear_periods: length mismatch");
    const std::size_t total = t.size();
    std::vector<SkyCondition> flags(total, SkyCondition::Cloudy);
    if (total == 0) return flags;
    if (interval_s <= 0) throw ConfigError("detect_clear_periods: bad interval");

    const std::size_t win = static_cast<std::size_t>(
        std::max<std::int64_t>(1, params.window_s / interval_s));
    if (win < 3)
        throw DataError("detect_clear_periods: window shorter than 3 samples");

    // Contiguous segments: cut at any spacing other than the nominal interval
    // (gaps, day boundaries after zenith filtering).
    std::vector<std::pair<std::size_t, std::size_t>> segments;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= total; ++i) {
        if (i == total || t[i] - t[i - 1] != interval_s) {
            segments.emplace_back(start, i);
            start = i;
        }
    }

    const double dt_min = static_cast<double>(interval_s) / 60.0;

    // Independent segments; safe to process concurrently.
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(segments.size()); ++si) {
        const auto [b, e] = segments[static_cast<std::size_t>(si)];
        const std::size_t n = e - b;
        if (n < win) continue;  // too short; stays Cloudy
        for (std::size_t w0 = b; w0 + win <= e; ++w0) {
            if (window_is_clear(measured.data() + w0, expected.data() + w0, win,
                                dt_min, params.thresholds)) {
                for (std::size_t k = w0; k < w0 + win; ++k) flags[k] = SkyCondition::Clear;
            }
        }
    }
    return flags;
}

std::vector<SkyCondition> detect_clear_periods(const IrradianceSeries& series,
                                               const ClearSkyModel& model,
                                               const RenoParams& params) {
    std::vector<double> expected(series.size());
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(series.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        const SolarPosition pos = solar_position(series.site, series.timestamp[idx]);
        expected[idx] = predict_clear_sky(model, pos, series.site).i_clr;
    }
    return detect_clear_periods(series.timestamp, series.ghi, expected,
                                series.native_interval_s, params);
}

}  // namespace skynow
