#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "skynow/align.hpp"

namespace skynow {

struct MetricSet {
    double rmse = 0.0;
    double mae = 0.0;
    double nrmse = 0.0;
    std::int64_t n = 0;
};

// RMSE / MAE / nRMSE over equal-length truth and prediction vectors.
// nRMSE divides by the mean of the truth; a zero mean is an error.
MetricSet metrics(const std::vector<double>& truth, const std::vector<double>& pred);
// Naive single-pass reference used by the equivalence tests.
MetricSet metrics_serial(const std::vector<double>& truth, const std::vector<double>& pred);

// Metrics broken down by sky condition, meteorological season and local hour.
// Empty subgroups are carried with n = 0.
struct EvaluationReport {
    MetricSet overall;
    MetricSet clear;
    MetricSet cloudy;
    std::array<MetricSet, 4> by_season;   // 0=DJF 1=MAM 2=JJA 3=SON
    std::array<MetricSet, 24> by_hour;    // site-local hour
};

int season_index(int month);  // 0..3 per meteorological quarters

EvaluationReport stratify(const std::vector<AlignedPair>& pairs,
                          const std::vector<double>& predictions,
                          std::int64_t utc_offset_s);

std::string report_to_json(const EvaluationReport& r, const std::string& dataset,
                           const std::string& model);
void write_report_json(const std::string& path, const EvaluationReport& r,
                       const std::string& dataset, const std::string& model);
void write_report_csv(const std::string& path, const EvaluationReport& r);

}  // namespace skynow
