#include "skynow/modeling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "skynow/errors.hpp"
#include "skynow/kernels.hpp"

namespace skynow {

void TargetKind::validate() const {
    if (weighted && kind == Kind::Ghi)
        throw ConfigError("weighted loss requires a normalized target (kt or Kt)");
}

TargetKind TargetKind::parse(const std::string& name) {
    TargetKind t;
    if (name == "ghi") {
        t.kind = Kind::Ghi;
    } else if (name == "kt") {
        t.kind = Kind::ClearSkyIndex;
    } else if (name == "Kt") {
        t.kind = Kind::ClearnessIndex;
    } else if (name == "ktw" || name == "kt_weighted") {
        t.kind = Kind::ClearSkyIndex;
        t.weighted = true;
    } else if (name == "Ktw" || name == "Kt_weighted") {
        t.kind = Kind::ClearnessIndex;
        t.weighted = true;
    } else {
        throw ConfigError("unknown target kind: '" + name + "'");
    }
    return t;
}

std::string TargetKind::name() const {
    switch (kind) {
        case Kind::Ghi: return "ghi";
        case Kind::ClearSkyIndex: return weighted ? "ktw" : "kt";
        case Kind::ClearnessIndex: return weighted ? "Ktw" : "Kt";
    }
    return "?";
}

namespace {

double normalizer(const ClearSkyContext& ctx, const TargetKind& kind) {
    switch (kind.kind) {
        case TargetKind::Kind::Ghi: return 1.0;
        case TargetKind::Kind::ClearSkyIndex: return ctx.i_clr;
        case TargetKind::Kind::ClearnessIndex: return ctx.i_extr;
    }
    return 1.0;
}

}  // namespace

double to_target(const AlignedPair& pair, const TargetKind& kind) {
    const double norm = normalizer(pair.ctx, kind);
    if (kind.kind != TargetKind::Kind::Ghi && !(norm > 0.0))
        throw RangeError("to_target: zero normalizer at " + format_iso8601(pair.instant));
    return kind.kind == TargetKind::Kind::Ghi ? pair.label_ghi : pair.label_ghi / norm;
}

double from_target(double yhat, const ClearSkyContext& ctx, const TargetKind& kind) {
    const double norm = normalizer(ctx, kind);
    if (kind.kind != TargetKind::Kind::Ghi && !(norm > 0.0))
        throw RangeError("from_target: zero normalizer");
    return kind.kind == TargetKind::Kind::Ghi ? yhat : yhat * norm;
}

double loss(const std::vector<double>& y, const std::vector<double>& yhat,
            const std::vector<ClearSkyContext>& ctx, const TargetKind& kind) {
    if (y.empty() || y.size() != yhat.size())
        throw ShapeError("loss: empty batch or size mismatch");
    if (kind.weighted && ctx.size() != y.size())
        throw ShapeError("loss: weighted loss needs a context per sample");
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double e = y[i] - yhat[i];
        if (kind.weighted) e *= normalizer(ctx[i], kind);
        sum += e * e;
    }
    return sum / static_cast<double>(y.size());
}

int TrainingSchedule::averaging_start() const {
    return static_cast<int>(std::ceil(0.75 * n_epochs));
}

void TrainingSchedule::validate() const {
    if (!(lr0 > 0.0)) throw ConfigError("schedule: lr0 must be positive");
    if (n_epochs < 4) throw ConfigError("schedule: n_epochs must be >= 4");
    if (batch < 1) throw ConfigError("schedule: batch must be >= 1");
}

double lr_at(const TrainingSchedule& schedule, int epoch) {
    schedule.validate();
    if (epoch < 0 || epoch > schedule.n_epochs)
        throw RangeError("lr_at: epoch out of range");
    const int decay_epochs = schedule.averaging_start();
    const int i = std::min(epoch, decay_epochs);
    // lr0 * exp(i * ln(1/10) / (0.75 n)); flat at lr0/10 afterwards.
    return schedule.lr0 *
           std::exp(static_cast<double>(i) * std::log(0.1) / static_cast<double>(decay_epochs));
}

std::vector<double> average_weights(const std::vector<std::vector<double>>& snapshots) {
    if (snapshots.empty()) throw ShapeError("average_weights: no snapshots");
    const std::size_t d = snapshots[0].size();
    std::vector<double> mean(d, 0.0);
    for (const auto& s : snapshots) {
        if (s.size() != d) throw ShapeError("average_weights: dimension mismatch");
        for (std::size_t i = 0; i < d; ++i) mean[i] += s[i];
    }
    for (auto& v : mean) v /= static_cast<double>(snapshots.size());
    return mean;
}

std::size_t FeatureSpec::dim() const {
    const int ch = use_mask_channel ? 4 : 3;
    return static_cast<std::size_t>(feature_width) * feature_width * ch +
           (use_cos_zenith ? 1 : 0) + 1;  // + bias
}

std::vector<double> extract_features(const SkyImage& frame, double cos_zenith,
                                     const FeatureSpec& spec) {
    const int ch = spec.use_mask_channel ? 4 : 3;
    if (frame.channels < ch)
        throw ShapeError("extract_features: frame lacks the mask channel");
    std::vector<double> out;
    out.reserve(spec.dim());
    const int fw = spec.feature_width;
    std::vector<std::uint8_t> plane(static_cast<std::size_t>(frame.height) * frame.width);
    std::vector<std::uint8_t> small(static_cast<std::size_t>(fw) * fw);
    for (int c = 0; c < ch; ++c) {
        for (int y = 0; y < frame.height; ++y)
            for (int x = 0; x < frame.width; ++x)
                plane[static_cast<std::size_t>(y) * frame.width + x] = frame.at(y, x, c);
        if (frame.width == fw && frame.height == fw) {
            small = plane;
        } else {
            box_resize_u8_serial(plane.data(), frame.width, frame.height, frame.width,
                                 small.data(), fw, fw);
        }
        for (std::size_t i = 0; i < small.size(); ++i)
            out.push_back(static_cast<double>(small[i]) / 255.0);
    }
    if (spec.use_cos_zenith) out.push_back(cos_zenith);
    out.push_back(1.0);  // bias
    return out;
}

namespace {

// Shared between ridge and SGD: the dense feature matrix and targets.
struct DesignMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> x;  // n*d row-major
    std::vector<double> y;
};

DesignMatrix build_design(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                          const TargetKind& target, const FeatureSpec& spec) {
    if (pairs.empty()) throw DataError("fit: empty training set");
    DesignMatrix m;
    m.n = pairs.size();
    m.d = spec.dim();
    m.x.resize(m.n * m.d);
    m.y.resize(m.n);
    // Feature extraction dominates; frames are independent.
    #pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(m.n); ++i) {
        const auto k = static_cast<std::size_t>(i);
        ManifestEntry e;
        e.path = pairs[k].image_path;
        const SkyImage frame = store.load(e);
        const auto f = extract_features(frame, pairs[k].cos_zenith, spec);
        std::copy(f.begin(), f.end(), m.x.begin() + static_cast<std::ptrdiff_t>(k * m.d));
        m.y[k] = to_target(pairs[k], target);
    }
    return m;
}

}  // namespace

double RidgeEstimator::predict_target(const SkyImage& frame, double cos_zenith) const {
    const auto f = extract_features(frame, cos_zenith, spec_);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * weights_[i];
    return s;
}

double RidgeEstimator::estimate(const SkyImage& frame, double cos_zenith,
                                const ClearSkyContext& ctx) const {
    return from_target(predict_target(frame, cos_zenith), ctx, target_);
}

RidgeEstimator fit_ridge(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                         const TargetKind& target, double lambda,
                         const FeatureSpec& spec) {
    target.validate();
    const DesignMatrix m = build_design(pairs, store, target, spec);
    GramSystem sys = gram_accumulate(m.n, m.d, m.x.data(), m.y.data());
    // Mean-square scaling keeps lambda comparable across corpus sizes.
    const double inv_n = 1.0 / static_cast<double>(m.n);
    for (auto& g : sys.gram_lower) g *= inv_n;
    for (auto& b : sys.rhs) b *= inv_n;
    // Penalize everything except the bias (last column).
    for (std::size_t r = 0; r + 1 < m.d; ++r) sys.gram_lower[r * (r + 1) / 2 + r] += lambda;

    RidgeEstimator est;
    est.spec_ = spec;
    est.target_ = target;
    est.weights_ = solve_spd_packed(std::move(sys.gram_lower), std::move(sys.rhs));
    return est;
}

std::string RidgeEstimator::to_json() const {
    nlohmann::json j;
    j["type"] = "ridge";
    j["target"] = target_.name();
    j["feature_width"] = spec_.feature_width;
    j["use_mask_channel"] = spec_.use_mask_channel;
    j["use_cos_zenith"] = spec_.use_cos_zenith;
    j["weights"] = weights_;
    return j.dump();
}

RidgeEstimator RidgeEstimator::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("estimator json: ") + e.what());
    }
    RidgeEstimator est;
    est.target_ = TargetKind::parse(j.at("target").get<std::string>());
    est.spec_.feature_width = j.at("feature_width").get<int>();
    est.spec_.use_mask_channel = j.at("use_mask_channel").get<bool>();
    est.spec_.use_cos_zenith = j.at("use_cos_zenith").get<bool>();
    est.weights_ = j.at("weights").get<std::vector<double>>();
    if (est.weights_.size() != est.spec_.dim())
        throw ShapeError("estimator json: weight count does not match feature spec");
    return est;
}

double SgdEstimator::estimate(const SkyImage& frame, double cos_zenith,
                              const ClearSkyContext& ctx) const {
    const auto f = extract_features(frame, cos_zenith, spec_);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * weights_[i];
    return from_target(s, ctx, target_);
}

SgdEstimator fit_linear_sgd(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                            const TargetKind& target, const TrainingSchedule& schedule,
                            double lambda, const FeatureSpec& spec, std::uint64_t seed) {
    target.validate();
    schedule.validate();
    const DesignMatrix m = build_design(pairs, store, target, spec);

    std::vector<double> w(m.d, 0.0);
    std::vector<std::size_t> order(m.n);
    for (std::size_t i = 0; i < m.n; ++i) order[i] = i;
    std::mt19937_64 rng(seed);

    std::vector<std::vector<double>> tail_snapshots;
    const int avg_start = schedule.averaging_start();
    std::vector<double> grad(m.d);

    for (int epoch = 1; epoch <= schedule.n_epochs; ++epoch) {
        const double lr = lr_at(schedule, epoch - 1);
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t b0 = 0; b0 < m.n; b0 += static_cast<std::size_t>(schedule.batch)) {
            const std::size_t b1 = std::min(m.n, b0 + static_cast<std::size_t>(schedule.batch));
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t q = b0; q < b1; ++q) {
                const double* row = m.x.data() + order[q] * m.d;
                double pred = 0.0;
                for (std::size_t j = 0; j < m.d; ++j) pred += row[j] * w[j];
                const double r = pred - m.y[order[q]];
                for (std::size_t j = 0; j < m.d; ++j) grad[j] += r * row[j];
            }
            const double scale = 2.0 / static_cast<double>(b1 - b0);
            for (std::size_t j = 0; j < m.d; ++j) {
                double g = grad[j] * scale;
                if (j + 1 < m.d) g += 2.0 * lambda * w[j];  // bias unpenalized
                w[j] -= lr * g;
            }
        }
        if (epoch >= avg_start) tail_snapshots.push_back(w);
    }

    SgdEstimator est;
    est.spec_ = spec;
    est.target_ = target;
    est.weights_ = average_weights(tail_snapshots);
    return est;
}

ExternalEstimator::ExternalEstimator(
    std::vector<std::pair<UtcSeconds, double>> target_by_instant, TargetKind target)
    : by_instant_(std::move(target_by_instant)), target_(target) {
    std::sort(by_instant_.begin(), by_instant_.end());
}

ExternalEstimator ExternalEstimator::from_csv(const std::string& path, TargetKind target) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions csv: " + path);
    std::vector<std::pair<UtcSeconds, double>> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("instant", 0) == 0) continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("bad predictions row: " + line);
        rows.emplace_back(parse_iso8601(line.substr(0, comma)),
                          std::strtod(line.c_str() + comma + 1, nullptr));
    }
    return ExternalEstimator(std::move(rows), target);
}

double ExternalEstimator::estimate(const SkyImage&, double, const ClearSkyContext&) const {
    throw DataError("external estimator has no image path; use estimate_at(instant)");
}

double ExternalEstimator::estimate_at(UtcSeconds instant, const ClearSkyContext& ctx) const {
    auto it = std::lower_bound(by_instant_.begin(), by_instant_.end(),
                               std::make_pair(instant, -1e300));
    if (it == by_instant_.end() || it->first != instant)
        throw DataError("external estimator: no prediction at " + format_iso8601(instant));
    return from_target(it->second, ctx, target_);
}

void ExternalTrainConfig::validate() const {
    if (!(lr0 > 0.0)) throw ConfigError("external config: lr0 must be positive");
    if (weight_init != "pretrained" && weight_init != "random")
        throw ConfigError("external config: weight_init must be pretrained|random");
    if (weight_decay < 0.0 || weight_decay > 1e-3)
        throw ConfigError("external config: weight_decay out of [0, 1e-3]");
    if (batch != 64 && batch != 128)
        throw ConfigError("external config: batch must be 64 or 128");
    if (optimizer != "sgd" && optimizer != "adam" && optimizer != "adamw")
        throw ConfigError("external config: optimizer must be sgd|adam|adamw");
    if (dropout < 0.0 || dropout > 0.7)
        throw ConfigError("external config: dropout out of [0, 0.7]");
}

ExternalTrainConfig ExternalTrainConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("external config json: ") + e.what());
    }
    ExternalTrainConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "lr0") c.lr0 = val.get<double>();
        else if (key == "weight_init") c.weight_init = val.get<std::string>();
        else if (key == "weight_decay") c.weight_decay = val.get<double>();
        else if (key == "batch") c.batch = val.get<int>();
        else if (key == "optimizer") c.optimizer = val.get<std::string>();
        else if (key == "dropout") c.dropout = val.get<double>();
        else throw ConfigError("external config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

}  // namespace skynow
