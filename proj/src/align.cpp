#include "skynow/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "skynow/errors.hpp"

namespace skynow {

namespace {

constexpr double kDeg2Rad = M_PI / 180.0;

UtcSeconds policy_key(const ManifestEntry& e, TimestampSource src) {
    return src == TimestampSource::FileName ? e.ts_file_name : e.ts_date_modified;
}

}  // namespace

AlignmentResult align(const ImageManifest& images, const IrradianceSeries& series_1s,
                      const TimestampPolicy& policy, const ClearSkyModel& model,
                      const RenoParams& reno) {
    if (!series_1s.has_stage(SeriesStage::Interpolated1s))
        throw DataError("align: series has not been interpolated to 1 s");

    AlignmentResult res;
    res.manifest_size = static_cast<std::int64_t>(images.entries.size());

    // Reno flags are computed on the measured (non-interpolated) samples,
    // where the published thresholds apply; each pair then takes the flag of
    // the nearest measurement.
    std::vector<UtcSeconds> t0;
    std::vector<double> g0;
    for (std::size_t i = 0; i < series_1s.size(); ++i) {
        if (!series_1s.interpolated[i] && !is_missing(series_1s.ghi[i])) {
            t0.push_back(series_1s.timestamp[i]);
            g0.push_back(series_1s.ghi[i]);
        }
    }
    std::vector<SkyCondition> flags;
    int native_dt = 60;
    if (t0.size() >= 2) {
        std::map<std::int64_t, std::size_t> freq;
        for (std::size_t i = 1; i < t0.size(); ++i) ++freq[t0[i] - t0[i - 1]];
        std::size_t best_n = 0;
        for (const auto& [dt, n] : freq)
            if (n > best_n) { native_dt = static_cast<int>(dt); best_n = n; }
        std::vector<double> expected(t0.size());
        #pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(t0.size()); ++i) {
            const auto k = static_cast<std::size_t>(i);
            const SolarPosition pos = solar_position(series_1s.site, t0[k]);
            expected[k] = predict_clear_sky(model, pos, series_1s.site).i_clr;
        }
        flags = detect_clear_periods(t0, g0, expected, native_dt, reno);
    }

    struct Keyed {
        std::size_t index;
        UtcSeconds instant;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(images.entries.size());
    for (std::size_t i = 0; i < images.entries.size(); ++i) {
        const auto& e = images.entries[i];
        if (policy.max_fn_dm_gap_s &&
            std::llabs(e.ts_file_name - e.ts_date_modified) > *policy.max_fn_dm_gap_s) {
            ++res.dropped[DropReason::FnDmGapExceeded];
            continue;
        }
        keyed.push_back({i, policy_key(e, policy.source)});
    }

    std::vector<AlignedPair> pairs(keyed.size());
    std::vector<std::uint8_t> ok(keyed.size(), 0);
    #pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k < static_cast<std::int64_t>(keyed.size()); ++k) {
        const auto ki = static_cast<std::size_t>(k);
        const UtcSeconds t = keyed[ki].instant;
        const std::size_t si = series_1s.index_at(t);
        if (si == IrradianceSeries::npos || is_missing(series_1s.ghi[si])) continue;
        AlignedPair p;
        p.image_index = keyed[ki].index;
        p.image_path = images.entries[p.image_index].path;
        p.instant = t;
        p.label_ghi = series_1s.ghi[si];
        const SolarPosition pos = solar_position(series_1s.site, t);
        p.ctx = predict_clear_sky(model, pos, series_1s.site);
        p.cos_zenith = std::cos(pos.zenith_deg * kDeg2Rad);
        if (!t0.empty()) {
            auto it = std::lower_bound(t0.begin(), t0.end(), t);
            std::size_t j = static_cast<std::size_t>(it - t0.begin());
            if (j == t0.size()) j = t0.size() - 1;
            else if (j > 0 && t - t0[j - 1] < t0[j] - t) j = j - 1;
            p.sky = flags[j];
        }
        pairs[ki] = std::move(p);
        ok[ki] = 1;
    }
    for (std::size_t k = 0; k < keyed.size(); ++k) {
        if (ok[k])
            res.pairs.push_back(std::move(pairs[k]));
        else
            ++res.dropped[DropReason::NoLabelAtInstant];
    }
    // Deterministic and independent of manifest order.
    std::sort(res.pairs.begin(), res.pairs.end(),
              [](const AlignedPair& a, const AlignedPair& b) {
                  return a.instant != b.instant ? a.instant < b.instant
                                                : a.image_path < b.image_path;
              });
    return res;
}

std::vector<DriftReport> drift_report(const ImageManifest& images,
                                      std::int64_t utc_offset_s) {
    std::map<std::int64_t, std::pair<double, std::int64_t>> acc;  // day -> (sum, n)
    for (const auto& e : images.entries) {
        const std::int64_t day = local_day_index(e.ts_date_modified, utc_offset_s);
        auto& a = acc[day];
        a.first += static_cast<double>(e.ts_file_name - e.ts_date_modified);
        a.second += 1;
    }
    std::vector<DriftReport> out;
    out.reserve(acc.size());
    for (const auto& [day, a] : acc)
        out.push_back({day, a.first / static_cast<double>(a.second), a.second});
    return out;
}

std::array<std::int64_t, 60> second_histogram(const ImageManifest& images,
                                              TimestampSource source) {
    std::array<std::int64_t, 60> bins{};
    for (const auto& e : images.entries)
        ++bins[static_cast<std::size_t>(seconds_field(policy_key(e, source)))];
    return bins;
}

void write_pairs_csv(const std::string& path, const std::vector<AlignedPair>& pairs) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write pairs csv: " + path);
    out << "instant_utc,image_path,ghi,i_clr,i_extr,sky_condition\n";
    char buf[256];
    for (const auto& p : pairs) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%.10g,%.10g,%s\n",
                      format_iso8601(p.instant).c_str(), p.image_path.c_str(),
                      p.label_ghi, p.ctx.i_clr, p.ctx.i_extr, to_string(p.sky));
        out << buf;
    }
}

std::vector<AlignedPair> read_pairs_csv(const std::string& path, const Site& site) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open pairs csv: " + path);
    std::vector<AlignedPair> pairs;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("instant", 0) == 0) continue;
        }
        std::vector<std::string> f;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') { f.push_back(cur); cur.clear(); }
            else if (ch != '\r') cur.push_back(ch);
        }
        f.push_back(cur);
        if (f.size() < 6) throw DataError("short pairs row: " + line);
        AlignedPair p;
        p.instant = parse_iso8601(f[0]);
        p.image_path = f[1];
        p.label_ghi = std::strtod(f[2].c_str(), nullptr);
        p.ctx.i_clr = std::strtod(f[3].c_str(), nullptr);
        p.ctx.i_extr = std::strtod(f[4].c_str(), nullptr);
        p.sky = f[5] == "clear" ? SkyCondition::Clear : SkyCondition::Cloudy;
        p.cos_zenith = std::cos(solar_position(site, p.instant).zenith_deg * kDeg2Rad);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

}  // namespace skynow
