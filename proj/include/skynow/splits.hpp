#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "skynow/align.hpp"

namespace skynow {

// Year-based train/test partition and stratified-group K-fold setup.
struct SplitSpec {
    std::set<int> test_years;       // site-local calendar years
    int k = 5;                      // >= 2
    int n_bins = 14;                // irradiance histogram bins
    double bin_width_wm2 = 100.0;   // bins cover [0, n_bins*bin_width)
    std::uint64_t seed = 0;

    void validate() const;
};

struct TrainTestSplit {
    std::vector<AlignedPair> train;
    std::vector<AlignedPair> test;
    std::vector<AlignedPair> test_clear;
    std::vector<AlignedPair> test_cloudy;
};

// Test = pairs whose site-local year is in test_years; the test set is
// sub-split by the Reno flag; train = the remainder.
TrainTestSplit split_train_test(const std::vector<AlignedPair>& pairs,
                                const SplitSpec& spec, std::int64_t utc_offset_s);

// day (local day index) -> fold. Every training day appears exactly once.
struct FoldAssignment {
    std::map<std::int64_t, int> fold_of_day;
    int k = 0;

    int fold(std::int64_t day) const { return fold_of_day.at(day); }
};

// Greedy stratified group K-fold: whole days are assigned to folds,
// largest day first, minimizing the squared deviation of per-fold bin counts
// from the global per-fold target. Deterministic (ties break toward the
// earlier day / lower fold index).
FoldAssignment stratified_group_kfold(const std::vector<AlignedPair>& train,
                                      const SplitSpec& spec, std::int64_t utc_offset_s);

// Keeps the earliest pair per interval bucket per local day.
std::vector<AlignedPair> thin_by_interval(const std::vector<AlignedPair>& train,
                                          int interval_minutes,
                                          std::int64_t utc_offset_s);

// Histogram of labels for stratification checks: bin i covers
// [i*bin_width, (i+1)*bin_width); the last bin absorbs anything above.
std::vector<std::int64_t> label_histogram(const std::vector<AlignedPair>& pairs,
                                          const SplitSpec& spec);

void write_fold_csv(const std::string& path, const FoldAssignment& folds);
// Split manifest: counts per set and sky condition.
void write_split_manifest_json(const std::string& path, const TrainTestSplit& split,
                               const std::string& dataset);

}  // namespace skynow
