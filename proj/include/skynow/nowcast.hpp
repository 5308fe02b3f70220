#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "skynow/align.hpp"
#include "skynow/modeling.hpp"

namespace skynow {

inline constexpr int kSeqFrames = 5;
inline constexpr int kSeqStepS = 120;  // 2-minute grid
inline constexpr std::array<int, kSeqFrames> kLeadMinutes{2, 4, 6, 8, 10};

// One forecasting sample: five context frames at {t-8, t-6, t-4, t-2, t}
// minutes and five target instants at {t+2 .. t+10}, all with valid labels.
struct SequenceSample {
    UtcSeconds t = 0;
    std::array<std::size_t, kSeqFrames> context;  // indices into the pair list
    std::array<std::size_t, kSeqFrames> targets;
};

struct SequenceSet {
    std::vector<AlignedPair> pairs;  // the underlying aligned pairs
    std::vector<SequenceSample> samples;
};

// Builds every window whose 10 instants all exist on the 2-minute grid.
// With odd_days_only, keeps only anchors on odd local days of month (the
// forecast test-set convention).
SequenceSet build_sequences(const std::vector<AlignedPair>& pairs,
                            std::int64_t utc_offset_s, bool odd_days_only = false);

// Future-frame predictor interface. Implementations must be safe for
// concurrent read-only use.
class VideoPredictor {
public:
    virtual ~VideoPredictor() = default;
    // context/output frames ordered oldest..newest / nearest..farthest.
    virtual std::vector<SkyImage> predict(const std::vector<SkyImage>& context) const = 0;
    virtual std::string name() const = 0;
};

// Repeats the last context frame for every lead.
class FrozenPersistencePredictor final : public VideoPredictor {
public:
    std::vector<SkyImage> predict(const std::vector<SkyImage>& context) const override;
    std::string name() const override { return "frozen"; }
};

// Ground-truth passthrough: returns caller-provided true future frames. Used
// for the estimation lower bound.
class PassthroughPredictor final : public VideoPredictor {
public:
    std::vector<SkyImage> predict(const std::vector<SkyImage>& context) const override;
    std::string name() const override { return "passthrough"; }
};

// Frames produced by an external model, stored in the tensor container and
// keyed "<anchor>_<lead>" in a manifest.
class ExternalFramePredictor final : public VideoPredictor {
public:
    ExternalFramePredictor(const ImageStore* store, std::string key_prefix);
    std::vector<SkyImage> predict(const std::vector<SkyImage>& context) const override;
    std::vector<SkyImage> predict_at(UtcSeconds anchor) const;
    std::string name() const override { return "external"; }

private:
    const ImageStore* store_;
    std::string prefix_;
};

// Smart persistence: the current clear-sky index held constant and rescaled
// by the future clear-sky curve.
std::vector<double> smart_persistence(double kt_now,
                                      const std::vector<ClearSkyContext>& future);

// Validated configuration schema for external sequence predictors (the
// transformer-style models trained outside this library). Nothing in-process
// consumes these values; they ride along so external tooling shares one
// config surface.
struct ExternalPredictorConfig {
    int patch_size = 16;
    int embed_dim = 256;
    int patches_per_frame = 64;
    int context_frames = kSeqFrames;
    int frame_width = 128;

    void validate() const;
    static ExternalPredictorConfig from_json_text(const std::string& text);
};

// Per-lead forecast metrics against the smart-persistence baseline.
struct LeadMetrics {
    int lead_min = 0;
    double rmse = 0.0;
    double fs = 0.0;  // 1 - rmse/rmse_spm
    std::int64_t n = 0;
};
struct ForecastReport {
    std::vector<LeadMetrics> leads;
    std::vector<double> spm_rmse;  // baseline per lead
};

// Forecast matrices: eval[sample][lead].
using ForecastMatrix = std::vector<std::array<double, kSeqFrames>>;

// Two-step forecasts for every sample: predict frames, resize to the
// estimator input, estimate, rescale with each future instant's clear-sky
// context. With a PassthroughPredictor the true future frames are used.
ForecastMatrix two_step_forecast(const SequenceSet& set, const ImageStore& store,
                                 const VideoPredictor& vp, const Estimator& est);

// Single-step reference: persist the anchor kt across all leads (the
// sequence-level analogue of smart persistence, exercising the same harness
// path as an external sequence model would).
ForecastMatrix single_step_persist_kt(const SequenceSet& set);

// Smart-persistence forecasts for every sample.
ForecastMatrix spm_forecast(const SequenceSet& set);

// Per-lead RMSE and FS. Every lead is evaluated on the common set of target
// instants reachable at all five leads, so per-lead numbers are directly
// comparable (and the ground-truth lower bound is exactly lead-invariant).
ForecastReport evaluate_forecasts(const SequenceSet& set, const ForecastMatrix& forecast,
                                  const ForecastMatrix& baseline);

void write_forecast_csv(const std::string& path, const ForecastReport& r);

}  // namespace skynow
