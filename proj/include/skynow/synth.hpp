#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "skynow/clear_sky.hpp"
#include "skynow/image.hpp"
#include "skynow/series.hpp"
#include "skynow/tensor_io.hpp"

namespace skynow {

// Synthetic sky-image/irradiance corpus with known ground truth. The sun disc
// is rendered at the true projected position; moving cloud discs (toroidal
// wrap) occlude it; the instantaneous clear-sky index is a deterministic
// function of the occlusion fraction. Emitted per-minute samples can be
// backward/forward averaged, and the image file-name timestamps can carry a
// per-day drift against date-modified. Bit-reproducible from the seed.

struct CloudModel {
    bool enabled = true;
    int count = 3;
    double radius_px = 9.0;
    double velocity_px_min = 6.0;
    double opacity = 1.0;  // [0, 1]
};

enum class AveragingMode : std::uint8_t { None, Backward, Forward };

struct SyntheticScenario {
    Site site;
    CameraModel camera;
    ClearSkyModel clear_sky;

    int start_year = 2019;
    int start_month = 6;
    int start_day = 1;
    int days = 5;
    int day_stride = 1;  // calendar spacing between generated days

    CloudModel clouds;
    std::vector<std::int64_t> drift_schedule;  // per-day FN-DM seconds, cycled
    AveragingMode averaging = AveragingMode::None;
    int averaging_window_s = 60;  // [1, 120]
    double kt_floor = 0.3;        // kt under full occlusion
    double max_zenith_deg = 85.0; // images generated while the sun is above this
    int capture_interval_s = 60;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SyntheticCorpus {
    ImageManifest manifest;
    MemoryImageStore store;
    IrradianceSeries series;  // per-minute emitted measurements
    // Instantaneous truth at each capture instant, aligned with the manifest.
    std::vector<UtcSeconds> truth_instant;
    std::vector<double> truth_kt;
};

SyntheticCorpus generate(const SyntheticScenario& scenario);

// Materializes the corpus in the exact formats the ingestion path produces:
// tensor files + manifest.csv + series.csv + kt_truth.csv under dir.
void write_corpus(const SyntheticCorpus& corpus, const std::string& dir);

// Occlusion -> kt mapping, exposed for property tests.
double kt_from_occlusion(double occlusion_fraction, double kt_floor);

}  // namespace skynow
