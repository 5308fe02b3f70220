#include "skynow/resample.hpp"

#include <algorithm>
#include <cmath>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

double lerp_component(double a, double b, double w) {
    if (is_missing(a) || is_missing(b)) return kMissing;
    return a + (b - a) * w;
}

// Number of output samples contributed by the pair (i, i+1): the knot at i
// plus any interpolated interior seconds.
std::int64_t pair_output_count(UtcSeconds t0, UtcSeconds t1, const ResampleRules& rules) {
    const std::int64_t dt = t1 - t0;
    return 1 + (dt <= rules.max_bridge_s ? dt - 1 : 0);
}

void fill_pair(const IrradianceSeries& in, std::size_t i, IrradianceSeries& out,
               std::size_t at, const ResampleRules& rules) {
    out.timestamp[at] = in.timestamp[i];
    out.ghi[at] = in.ghi[i];
    out.dhi[at] = in.dhi[i];
    out.dni[at] = in.dni[i];
    out.interpolated[at] = in.interpolated[i];
    const UtcSeconds t0 = in.timestamp[i];
    const UtcSeconds t1 = in.timestamp[i + 1];
    const std::int64_t dt = t1 - t0;
    if (dt > rules.max_bridge_s) return;
    for (std::int64_t k = 1; k < dt; ++k) {
        const double w = static_cast<double>(k) / static_cast<double>(dt);
        const std::size_t j = at + static_cast<std::size_t>(k);
        out.timestamp[j] = t0 + k;
        out.ghi[j] = lerp_component(in.ghi[i], in.ghi[i + 1], w);
        out.dhi[j] = lerp_component(in.dhi[i], in.dhi[i + 1], w);
        out.dni[j] = lerp_component(in.dni[i], in.dni[i + 1], w);
        out.interpolated[j] = 1;
    }
}

IrradianceSeries interpolate_1s_impl(const IrradianceSeries& in, GapReport* report,
                                     const ResampleRules& rules, bool parallel) {
    in.check_monotone();
    IrradianceSeries out;
    out.site = in.site;
    out.native_interval_s = 1;
    out.stages = in.stages;
    out.mark_stage(SeriesStage::Interpolated1s);
    if (in.empty()) return out;

    const std::size_t n = in.size();
    // Exclusive prefix of output offsets per input sample.
    std::vector<std::size_t> offset(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        offset[i] = total;
        total += static_cast<std::size_t>(
            pair_output_count(in.timestamp[i], in.timestamp[i + 1], rules));
    }
    offset[n - 1] = total;
    total += 1;  // final knot

    out.timestamp.resize(total);
    out.ghi.resize(total);
    out.dhi.resize(total);
    out.dni.resize(total);
    out.interpolated.resize(total);

    if (parallel) {
        #pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n) - 1; ++i)
            fill_pair(in, static_cast<std::size_t>(i), out,
                      offset[static_cast<std::size_t>(i)], rules);
    } else {
        for (std::size_t i = 0; i + 1 < n; ++i) fill_pair(in, i, out, offset[i], rules);
    }
    const std::size_t last = total - 1;
    out.timestamp[last] = in.timestamp[n - 1];
    out.ghi[last] = in.ghi[n - 1];
    out.dhi[last] = in.dhi[n - 1];
    out.dni[last] = in.dni[n - 1];
    out.interpolated[last] = in.interpolated[n - 1];

    if (report) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::int64_t dt = in.timestamp[i + 1] - in.timestamp[i];
            if (dt >= rules.discard_gap_s && dt < rules.night_gap_s) {
                report->dropped_seconds_by_day[local_day_index(
                    in.timestamp[i], in.site.utc_offset_s)] += dt - 1;
                report->total_dropped_seconds += dt - 1;
                report->gap_count += 1;
            }
        }
    }
    return out;
}

}  // namespace

IrradianceSeries interpolate_1s(const IrradianceSeries& in, GapReport* report,
                                const ResampleRules& rules) {
    return interpolate_1s_impl(in, report, rules, true);
}

IrradianceSeries interpolate_1s_serial(const IrradianceSeries& in, GapReport* report,
                                       const ResampleRules& rules) {
    return interpolate_1s_impl(in, report, rules, false);
}

namespace {

IrradianceSeries zenith_filter_impl(const IrradianceSeries& in, const Site& site,
                                    double max_zenith_deg, bool parallel) {
    const std::size_t n = in.size();
    std::vector<std::uint8_t> keep(n, 0);
    if (parallel) {
        #pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            keep[idx] = solar_position(site, in.timestamp[idx]).zenith_deg <= max_zenith_deg;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i)
            keep[i] = solar_position(site, in.timestamp[i]).zenith_deg <= max_zenith_deg;
    }
    IrradianceSeries out;
    out.site = in.site;
    out.native_interval_s = in.native_interval_s;
    out.stages = in.stages;
    out.mark_stage(SeriesStage::ZenithFiltered);
    for (std::size_t i = 0; i < n; ++i) {
        if (keep[i])
            out.push(in.timestamp[i], in.ghi[i], in.dhi[i], in.dni[i],
                     in.interpolated[i] != 0);
    }
    return out;
}

}  // namespace

IrradianceSeries zenith_filter(const IrradianceSeries& in, const Site& site,
                               double max_zenith_deg) {
    return zenith_filter_impl(in, site, max_zenith_deg, true);
}

IrradianceSeries zenith_filter_serial(const IrradianceSeries& in, const Site& site,
                                      double max_zenith_deg) {
    return zenith_filter_impl(in, site, max_zenith_deg, false);
}

double median(std::vector<double> values) {
    if (values.empty()) throw DataError("median of empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

MedianVerdict median_consistency_check(const InstantReadings& r,
                                       const SolarPosition& pos, double tol_wm2,
                                       double* fused_ghi, double* fused_dhi,
                                       double* fused_dni) {
    if (r.ghi.empty() || r.dhi.empty() || r.dni.empty())
        return MedianVerdict::MissingComponent;
    const double m_ghi = median(r.ghi);
    const double m_dhi = median(r.dhi);
    const double m_dni = median(r.dni);
    const double ghi_calc = m_dni * std::cos(pos.zenith_deg * kDeg2Rad) + m_dhi;
    if (std::abs(ghi_calc - m_ghi) > tol_wm2) return MedianVerdict::Inconsistent;
    if (fused_ghi) *fused_ghi = m_ghi;
    if (fused_dhi) *fused_dhi = m_dhi;
    if (fused_dni) *fused_dni = m_dni;
    return MedianVerdict::Accepted;
}

MedianFilterResult median_consistency_filter(const MultiSensorSeries& in, double tol_wm2) {
    MedianFilterResult res;
    res.accepted.site = in.site;
    res.accepted.mark_stage(SeriesStage::Fused);

    std::size_t i = 0;
    const std::size_t n = in.rows.size();
    std::vector<UtcSeconds> instants;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    while (i < n) {
        std::size_t j = i;
        while (j < n && in.rows[j].timestamp == in.rows[i].timestamp) ++j;
        instants.push_back(in.rows[i].timestamp);
        spans.emplace_back(i, j);
        i = j;
    }

    const std::size_t m = instants.size();
    std::vector<int> verdict(m);
    std::vector<double> fg(m), fdh(m), fdn(m);
    #pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(m); ++k) {
        const auto idx = static_cast<std::size_t>(k);
        InstantReadings r;
        for (std::size_t q = spans[idx].first; q < spans[idx].second; ++q) {
            const auto& row = in.rows[q];
            if (!is_missing(row.ghi)) r.ghi.push_back(row.ghi);
            if (!is_missing(row.dhi)) r.dhi.push_back(row.dhi);
            if (!is_missing(row.dni)) r.dni.push_back(row.dni);
        }
        const SolarPosition pos = solar_position(in.site, instants[idx]);
        verdict[idx] = static_cast<int>(median_consistency_check(
            r, pos, tol_wm2, &fg[idx], &fdh[idx], &fdn[idx]));
    }
    for (std::size_t k = 0; k < m; ++k) {
        switch (static_cast<MedianVerdict>(verdict[k])) {
            case MedianVerdict::Accepted:
                res.accepted.push(instants[k], fg[k], fdh[k], fdn[k]);
                break;
            case MedianVerdict::Inconsistent:
                ++res.rejected_inconsistent;
                break;
            case MedianVerdict::MissingComponent:
                ++res.rejected_missing_component;
                break;
        }
    }
    if (res.accepted.size() >= 2)
        res.accepted.native_interval_s = static_cast<int>(
            res.accepted.timestamp[1] - res.accepted.timestamp[0]);
    return res;
}

IrradianceSeries apply_time_shift(const IrradianceSeries& in, TimeShift shift,
                                  SeriesRole role) {
    if (std::abs(shift.delta_s) > 300)
        throw ConfigError("time shift |delta| > 300 s");
    if (role == SeriesRole::Test && shift.delta_s != 0)
        throw ConfigError("time shift requested on Test-role series");
    // Stage order is shift first, then zenith filter; shifting afterwards
    // would move samples across the zenith boundary unchecked.
    if (in.has_stage(SeriesStage::ZenithFiltered) && shift.delta_s != 0)
        throw ConfigError("time shift must precede the zenith filter");
    IrradianceSeries out = in;
    out.mark_stage(SeriesStage::TimeShifted);
    if (shift.delta_s == 0) return out;
    for (auto& t : out.timestamp) t += shift.delta_s;
    return out;
}

void derive_dni_from_ghi_dhi(IrradianceSeries& s, const Site& site) {
    const double min_cos = std::cos(80.0 * kDeg2Rad);
    #pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(s.size()); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        if (!is_missing(s.dni[idx])) continue;
        if (is_missing(s.ghi[idx]) || is_missing(s.dhi[idx])) continue;
        const double cz = std::cos(solar_position(site, s.timestamp[idx]).zenith_deg * kDeg2Rad);
        if (cz >= min_cos) s.dni[idx] = (s.ghi[idx] - s.dhi[idx]) / cz;
    }
}

}  // namespace skynow
