#include "skynow/splits.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "skynow/errors.hpp"

namespace skynow {

void SplitSpec::validate() const {
    if (k < 2) throw ConfigError("split: k must be >= 2");
    if (n_bins < 1 || bin_width_wm2 <= 0.0) throw ConfigError("split: bad bin spec");
    if (n_bins * bin_width_wm2 < 1367.0)
        throw ConfigError("split: bins must cover [0, 1367)");
}

namespace {

int label_bin(double ghi, const SplitSpec& spec) {
    int b = static_cast<int>(ghi / spec.bin_width_wm2);
    if (b < 0) b = 0;
    if (b >= spec.n_bins) b = spec.n_bins - 1;
    return b;
}

}  // namespace

std::vector<std::int64_t> label_histogram(const std::vector<AlignedPair>& pairs,
                                          const SplitSpec& spec) {
    std::vector<std::int64_t> h(static_cast<std::size_t>(spec.n_bins), 0);
    for (const auto& p : pairs) ++h[static_cast<std::size_t>(label_bin(p.label_ghi, spec))];
    return h;
}

TrainTestSplit split_train_test(const std::vector<AlignedPair>& pairs,
                                const SplitSpec& spec, std::int64_t utc_offset_s) {
    spec.validate();
    if (spec.test_years.empty()) throw ConfigError("split: no test year configured");
    TrainTestSplit out;
    for (const auto& p : pairs) {
        const int year = local_year(p.instant, utc_offset_s);
        if (spec.test_years.count(year)) {
            out.test.push_back(p);
            if (p.sky == SkyCondition::Clear)
                out.test_clear.push_back(p);
            else
                out.test_cloudy.push_back(p);
        } else {
            out.train.push_back(p);
        }
    }
    return out;
}

FoldAssignment stratified_group_kfold(const std::vector<AlignedPair>& train,
                                      const SplitSpec& spec, std::int64_t utc_offset_s) {
    spec.validate();
    const int k = spec.k;
    const int nb = spec.n_bins;

    // Per-day bin histograms.
    std::map<std::int64_t, std::vector<std::int64_t>> day_hist;
    for (const auto& p : train) {
        auto& h = day_hist[local_day_index(p.instant, utc_offset_s)];
        if (h.empty()) h.assign(static_cast<std::size_t>(nb), 0);
        ++h[static_cast<std::size_t>(label_bin(p.label_ghi, spec))];
    }
    if (static_cast<int>(day_hist.size()) < k)
        throw ConfigError("stratified_group_kfold: fewer days than folds");

    std::vector<double> target(static_cast<std::size_t>(nb), 0.0);  // per fold
    for (const auto& [day, h] : day_hist)
        for (int b = 0; b < nb; ++b) target[static_cast<std::size_t>(b)] += static_cast<double>(h[static_cast<std::size_t>(b)]);
    for (auto& t : target) t /= static_cast<double>(k);

    struct Day {
        std::int64_t day;
        const std::vector<std::int64_t>* h;
        std::int64_t total;
    };
    std::vector<Day> days;
    days.reserve(day_hist.size());
    for (const auto& [day, h] : day_hist) {
        std::int64_t tot = 0;
        for (auto c : h) tot += c;
        days.push_back({day, &h, tot});
    }
    // Largest day first; date ascending on ties, so the result is a pure
    // function of the input histograms.
    std::sort(days.begin(), days.end(), [](const Day& a, const Day& b) {
        return a.total != b.total ? a.total > b.total : a.day < b.day;
    });

    std::vector<std::vector<double>> fold_counts(
        static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(nb), 0.0));
    FoldAssignment fa;
    fa.k = k;
    for (const auto& d : days) {
        int best_fold = 0;
        double best_delta = 0.0;
        for (int f = 0; f < k; ++f) {
            // Marginal increase of sum_b (count_fb - target_b)^2.
            double delta = 0.0;
            for (int b = 0; b < nb; ++b) {
                const double c = fold_counts[static_cast<std::size_t>(f)][static_cast<std::size_t>(b)];
                const double add = static_cast<double>((*d.h)[static_cast<std::size_t>(b)]);
                const double t = target[static_cast<std::size_t>(b)];
                delta += (c + add - t) * (c + add - t) - (c - t) * (c - t);
            }
            if (f == 0 || delta < best_delta) {
                best_delta = delta;
                best_fold = f;
            }
        }
        fa.fold_of_day[d.day] = best_fold;
        for (int b = 0; b < nb; ++b)
            fold_counts[static_cast<std::size_t>(best_fold)][static_cast<std::size_t>(b)] +=
                static_cast<double>((*d.h)[static_cast<std::size_t>(b)]);
    }
    return fa;
}

std::vector<AlignedPair> thin_by_interval(const std::vector<AlignedPair>& train,
                                          int interval_minutes,
                                          std::int64_t utc_offset_s) {
    if (interval_minutes < 1) throw ConfigError("thin: interval must be >= 1 minute");
    const std::int64_t bucket_s = static_cast<std::int64_t>(interval_minutes) * 60;
    std::vector<AlignedPair> sorted = train;
    std::sort(sorted.begin(), sorted.end(),
              [](const AlignedPair& a, const AlignedPair& b) { return a.instant < b.instant; });
    std::vector<AlignedPair> out;
    std::int64_t last_day = -1;
    std::int64_t last_bucket = -1;
    for (const auto& p : sorted) {
        const std::int64_t day = local_day_index(p.instant, utc_offset_s);
        const std::int64_t sod = p.instant + utc_offset_s - day * 86400;
        const std::int64_t bucket = sod / bucket_s;
        if (day != last_day || bucket != last_bucket) {
            out.push_back(p);
            last_day = day;
            last_bucket = bucket;
        }
    }
    return out;
}

void write_fold_csv(const std::string& path, const FoldAssignment& folds) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write fold csv: " + path);
    out << "day,fold\n";
    for (const auto& [day, f] : folds.fold_of_day) {
        const CivilDateTime c = civil_from_utc(day * 86400);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
        out << buf << ',' << f << '\n';
    }
}

void write_split_manifest_json(const std::string& path, const TrainTestSplit& split,
                               const std::string& dataset) {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["train"] = {{"all", split.train.size()}};
    j["test"] = {{"all", split.test.size()},
                 {"clear", split.test_clear.size()},
                 {"cloudy", split.test_cloudy.size()}};
    std::ofstream out(path);
    if (!out) throw DataError("cannot write split manifest: " + path);
    out << j.dump(2) << '\n';
}

}  // namespace skynow
