#include "skynow/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "skynow/errors.hpp"
#include "skynow/kernels.hpp"

namespace skynow {

namespace {

MetricSet metrics_from_sums(const ErrorSums& s, std::size_t n) {
    MetricSet m;
    m.n = static_cast<std::int64_t>(n);
    if (n == 0) return m;
    const double inv_n = 1.0 / static_cast<double>(n);
    m.rmse = std::sqrt(s.sq * inv_n);
    m.mae = s.abs * inv_n;
    const double mean_truth = s.truth * inv_n;
    if (!(mean_truth > 0.0))
        throw DataError("metrics: mean truth is not positive, nRMSE undefined");
    m.nrmse = m.rmse / mean_truth;
    return m;
}

}  // namespace

MetricSet metrics(const std::vector<double>& truth, const std::vector<double>& pred) {
    if (truth.empty() || truth.size() != pred.size())
        throw ShapeError("metrics: empty input or length mismatch");
    return metrics_from_sums(error_sums(truth.size(), truth.data(), pred.data()),
                             truth.size());
}

MetricSet metrics_serial(const std::vector<double>& truth, const std::vector<double>& pred) {
    if (truth.empty() || truth.size() != pred.size())
        throw ShapeError("metrics: empty input or length mismatch");
    return metrics_from_sums(error_sums_serial(truth.size(), truth.data(), pred.data()),
                             truth.size());
}

int season_index(int month) {
    // DJF / MAM / JJA / SON
    if (month == 12 || month <= 2) return 0;
    if (month <= 5) return 1;
    if (month <= 8) return 2;
    return 3;
}

EvaluationReport stratify(const std::vector<AlignedPair>& pairs,
                          const std::vector<double>& predictions,
                          std::int64_t utc_offset_s) {
    if (pairs.size() != predictions.size())
        throw ShapeError("stratify: pairs/predictions length mismatch");

    struct Bucket {
        std::vector<double> truth, pred;
    };
    Bucket all, clear, cloudy;
    std::array<Bucket, 4> season;
    std::array<Bucket, 24> hour;

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        const double t = p.label_ghi, e = predictions[i];
        all.truth.push_back(t);
        all.pred.push_back(e);
        Bucket& sky = (p.sky == SkyCondition::Clear) ? clear : cloudy;
        sky.truth.push_back(t);
        sky.pred.push_back(e);
        Bucket& se = season[static_cast<std::size_t>(
            season_index(local_month(p.instant, utc_offset_s)))];
        se.truth.push_back(t);
        se.pred.push_back(e);
        Bucket& ho = hour[static_cast<std::size_t>(local_hour(p.instant, utc_offset_s))];
        ho.truth.push_back(t);
        ho.pred.push_back(e);
    }

    auto eval = [](const Bucket& b) {
        return b.truth.empty() ? MetricSet{} : metrics(b.truth, b.pred);
    };
    EvaluationReport r;
    r.overall = eval(all);
    r.clear = eval(clear);
    r.cloudy = eval(cloudy);
    for (std::size_t s = 0; s < 4; ++s) r.by_season[s] = eval(season[s]);
    for (std::size_t h = 0; h < 24; ++h) r.by_hour[h] = eval(hour[h]);
    return r;
}

namespace {

nlohmann::json metric_json(const MetricSet& m) {
    return {{"rmse", m.rmse}, {"mae", m.mae}, {"nrmse", m.nrmse}, {"n", m.n}};
}

}  // namespace

std::string report_to_json(const EvaluationReport& r, const std::string& dataset,
                           const std::string& model) {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["model"] = model;
    j["rmse"] = r.overall.rmse;
    j["mae"] = r.overall.mae;
    j["nrmse"] = r.overall.nrmse;
    j["n"] = r.overall.n;
    j["sky"] = {{"clear", metric_json(r.clear)}, {"cloudy", metric_json(r.cloudy)}};
    static const char* season_names[4] = {"djf", "mam", "jja", "son"};
    for (std::size_t s = 0; s < 4; ++s) j["season"][season_names[s]] = metric_json(r.by_season[s]);
    for (std::size_t h = 0; h < 24; ++h) j["hour"][std::to_string(h)] = metric_json(r.by_hour[h]);
    return j.dump(2);
}

void write_report_json(const std::string& path, const EvaluationReport& r,
                       const std::string& dataset, const std::string& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report: " + path);
    out << report_to_json(r, dataset, model) << '\n';
}

void write_report_csv(const std::string& path, const EvaluationReport& r) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report csv: " + path);
    out << "subset,key,rmse,mae,nrmse,n\n";
    char buf[160];
    auto row = [&](const char* subset, const std::string& key, const MetricSet& m) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%.10g,%.10g,%.10g,%lld\n", subset,
                      key.c_str(), m.rmse, m.mae, m.nrmse,
                      static_cast<long long>(m.n));
        out << buf;
    };
    row("overall", "", r.overall);
    row("sky", "clear", r.clear);
    row("sky", "cloudy", r.cloudy);
    static const char* season_names[4] = {"djf", "mam", "jja", "son"};
    for (std::size_t s = 0; s < 4; ++s) row("season", season_names[s], r.by_season[s]);
    for (std::size_t h = 0; h < 24; ++h) row("hour", std::to_string(h), r.by_hour[h]);
}

}  // namespace skynow
