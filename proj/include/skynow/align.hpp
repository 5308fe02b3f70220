#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skynow/clear_sky.hpp"
#include "skynow/series.hpp"
#include "skynow/tensor_io.hpp"

namespace skynow {

enum class TimestampSource : std::uint8_t { FileName, DateModified };

struct TimestampPolicy {
    TimestampSource source = TimestampSource::FileName;
    // Images with |FN - DM| above this are discarded (the NREL rule). Unset =
    // keep everything.
    std::optional<std::int64_t> max_fn_dm_gap_s;
};

// One image matched to its interpolated irradiance label and clear-sky
// context at the same instant.
struct AlignedPair {
    std::size_t image_index = 0;  // into the source manifest
    std::string image_path;
    UtcSeconds instant = 0;  // the policy-selected timestamp
    double label_ghi = 0.0;
    ClearSkyContext ctx;
    SkyCondition sky = SkyCondition::Cloudy;
    double cos_zenith = 0.0;
};

enum class DropReason : std::uint8_t {
    NoLabelAtInstant,   // instant falls in a discarded gap / outside the series
    FnDmGapExceeded,    // |FN - DM| over the policy threshold
};

struct AlignmentResult {
    std::vector<AlignedPair> pairs;
    std::map<DropReason, std::int64_t> dropped;
    std::int64_t manifest_size = 0;  // pairs + dropped == manifest_size
};

// Pairs every manifest image with the exact-second label from a 1-s
// interpolated series, computing the clear-sky context and Reno flag at the
// same instant. The series must already be interpolated; labels are never
// snapped to a nearest sample.
AlignmentResult align(const ImageManifest& images, const IrradianceSeries& series_1s,
                      const TimestampPolicy& policy, const ClearSkyModel& model,
                      const RenoParams& reno = RenoParams{});

// Per-local-day mean of (FN - DM) in seconds; positive = file name ahead.
struct DriftReport {
    std::int64_t day = 0;  // local day index
    double mean_fn_minus_dm_s = 0.0;
    std::int64_t image_count = 0;
};
std::vector<DriftReport> drift_report(const ImageManifest& images,
                                      std::int64_t utc_offset_s);

// Counts of the :SS field (0..59) of the chosen timestamp source.
std::array<std::int64_t, 60> second_histogram(const ImageManifest& images,
                                              TimestampSource source);

void write_pairs_csv(const std::string& path, const std::vector<AlignedPair>& pairs);
// The CSV stores instant/path/ghi/ctx/flag; cos(zenith) is recomputed from
// the site on load.
std::vector<AlignedPair> read_pairs_csv(const std::string& path, const Site& site);

}  // namespace skynow
