#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "skynow/align.hpp"
#include "skynow/image.hpp"
#include "skynow/tensor_io.hpp"

namespace skynow {

// The regression target: raw GHI, clear-sky index, or clearness index.
// `weighted` rescales the residual back to GHI inside the loss; it requires a
// normalized target.
struct TargetKind {
    enum class Kind : std::uint8_t { Ghi, ClearSkyIndex, ClearnessIndex };
    Kind kind = Kind::ClearSkyIndex;
    bool weighted = false;

    void validate() const;
    static TargetKind parse(const std::string& name);  // "ghi", "kt", "Kt", "ktw", "Ktw"
    std::string name() const;
};

double to_target(const AlignedPair& pair, const TargetKind& kind);
double from_target(double yhat, const ClearSkyContext& ctx, const TargetKind& kind);

// Batch MSE in target space; with `weighted`, the mean of
// (normalizer * (y - yhat))^2, which equals the GHI-space MSE exactly.
double loss(const std::vector<double>& y, const std::vector<double>& yhat,
            const std::vector<ClearSkyContext>& ctx, const TargetKind& kind);

// Exponential learning-rate decay to lr0/10 over the first 75% of training,
// then flat. Weight averaging starts at the same epoch.
struct TrainingSchedule {
    double lr0 = 1e-3;
    int n_epochs = 16;  // >= 4
    int batch = 64;

    int averaging_start() const;  // ceil(0.75 * n_epochs)
    void validate() const;
};

double lr_at(const TrainingSchedule& schedule, int epoch);

std::vector<double> average_weights(const std::vector<std::vector<double>>& snapshots);

// Feature layout for the linear estimators: the input frame is area-resized
// to feature_width, all channels flattened to [0,1], optionally the sun-mask
// channel is kept, optionally cos(zenith) is appended; a bias term is always
// appended last.
struct FeatureSpec {
    int feature_width = 16;
    bool use_mask_channel = false;
    bool use_cos_zenith = true;

    std::size_t dim() const;
};

std::vector<double> extract_features(const SkyImage& frame, double cos_zenith,
                                     const FeatureSpec& spec);

class Estimator {
public:
    virtual ~Estimator() = default;
    // GHI estimate for one frame at the given clear-sky context.
    virtual double estimate(const SkyImage& frame, double cos_zenith,
                            const ClearSkyContext& ctx) const = 0;
    virtual TargetKind target() const = 0;
};

// Closed-form ridge regression on the flattened features, fit in target
// space. lambda is the mean-square penalty on the non-bias weights.
class RidgeEstimator final : public Estimator {
public:
    double estimate(const SkyImage& frame, double cos_zenith,
                    const ClearSkyContext& ctx) const override;
    TargetKind target() const override { return target_; }

    double predict_target(const SkyImage& frame, double cos_zenith) const;

    FeatureSpec features() const { return spec_; }
    const std::vector<double>& weights() const { return weights_; }

    std::string to_json() const;
    static RidgeEstimator from_json(const std::string& text);

    friend RidgeEstimator fit_ridge(const std::vector<AlignedPair>&, const ImageStore&,
                                    const TargetKind&, double, const FeatureSpec&);
    friend class SgdEstimator;

private:
    FeatureSpec spec_;
    TargetKind target_;
    std::vector<double> weights_;  // dim(), bias last
};

RidgeEstimator fit_ridge(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                         const TargetKind& target, double lambda = 0.0,
                         const FeatureSpec& spec = FeatureSpec{});

// Mini-batch SGD on the same linear model, with the exponential lr schedule
// and tail weight averaging. Kept as the schedule/averaging consumer; on
// convex problems it lands on the ridge solution.
class SgdEstimator final : public Estimator {
public:
    double estimate(const SkyImage& frame, double cos_zenith,
                    const ClearSkyContext& ctx) const override;
    TargetKind target() const override { return target_; }
    const std::vector<double>& weights() const { return weights_; }

    friend SgdEstimator fit_linear_sgd(const std::vector<AlignedPair>&, const ImageStore&,
                                       const TargetKind&, const TrainingSchedule&,
                                       double, const FeatureSpec&, std::uint64_t);

private:
    FeatureSpec spec_;
    TargetKind target_;
    std::vector<double> weights_;
};

SgdEstimator fit_linear_sgd(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                            const TargetKind& target, const TrainingSchedule& schedule,
                            double lambda = 0.0, const FeatureSpec& spec = FeatureSpec{},
                            std::uint64_t seed = 0);

// Predictions produced outside the library (deep models), keyed by instant.
class ExternalEstimator final : public Estimator {
public:
    ExternalEstimator(std::vector<std::pair<UtcSeconds, double>> target_by_instant,
                      TargetKind target);
    static ExternalEstimator from_csv(const std::string& path, TargetKind target);

    double estimate(const SkyImage&, double, const ClearSkyContext&) const override;
    double estimate_at(UtcSeconds instant, const ClearSkyContext& ctx) const;
    TargetKind target() const override { return target_; }

private:
    std::vector<std::pair<UtcSeconds, double>> by_instant_;  // sorted
    TargetKind target_;
};

// External-estimator training configuration, kept as a validated schema only
// (optimizer/dropout/batch ranges for tools that train outside this library).
struct ExternalTrainConfig {
    double lr0 = 1e-4;
    std::string weight_init = "pretrained";  // or "random"
    double weight_decay = 0.0;
    int batch = 64;
    std::string optimizer = "adam";  // sgd | adam | adamw
    double dropout = 0.0;

    void validate() const;
    static ExternalTrainConfig from_json_text(const std::string& text);
};

}  // namespace skynow
