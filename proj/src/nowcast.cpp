#include "skynow/nowcast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "skynow/errors.hpp"
#include "skynow/kernels.hpp"

namespace skynow {

SequenceSet build_sequences(const std::vector<AlignedPair>& pairs,
                            std::int64_t utc_offset_s, bool odd_days_only) {
    SequenceSet set;
    set.pairs = pairs;
    std::sort(set.pairs.begin(), set.pairs.end(),
              [](const AlignedPair& a, const AlignedPair& b) { return a.instant < b.instant; });

    std::map<UtcSeconds, std::size_t> by_instant;
    for (std::size_t i = 0; i < set.pairs.size(); ++i)
        by_instant.emplace(set.pairs[i].instant, i);  // keeps the first on duplicates

    for (std::size_t i = 0; i < set.pairs.size(); ++i) {
        const UtcSeconds t = set.pairs[i].instant;
        if (odd_days_only && local_day_of_month(t, utc_offset_s) % 2 == 0) continue;
        SequenceSample s;
        s.t = t;
        bool ok = true;
        for (int k = 0; k < kSeqFrames && ok; ++k) {
            auto it = by_instant.find(t - (kSeqFrames - 1 - k) * kSeqStepS);
            if (it == by_instant.end()) ok = false;
            else s.context[static_cast<std::size_t>(k)] = it->second;
        }
        for (int k = 0; k < kSeqFrames && ok; ++k) {
            auto it = by_instant.find(t + (k + 1) * kSeqStepS);
            if (it == by_instant.end()) ok = false;
            else s.targets[static_cast<std::size_t>(k)] = it->second;
        }
        if (ok) set.samples.push_back(s);
    }
    return set;
}

std::vector<SkyImage> FrozenPersistencePredictor::predict(
    const std::vector<SkyImage>& context) const {
    if (context.empty()) throw ShapeError("frozen predictor: empty context");
    return std::vector<SkyImage>(kSeqFrames, context.back());
}

std::vector<SkyImage> PassthroughPredictor::predict(const std::vector<SkyImage>&) const {
    throw DataError("passthrough predictor is resolved inside the forecast harness");
}

ExternalFramePredictor::ExternalFramePredictor(const ImageStore* store,
                                               std::string key_prefix)
    : store_(store), prefix_(std::move(key_prefix)) {}

std::vector<SkyImage> ExternalFramePredictor::predict(const std::vector<SkyImage>&) const {
    throw DataError("external frame predictor is keyed by anchor; use predict_at");
}

std::vector<SkyImage> ExternalFramePredictor::predict_at(UtcSeconds anchor) const {
    std::vector<SkyImage> out;
    out.reserve(kSeqFrames);
    for (int lead : kLeadMinutes) {
        ManifestEntry e;
        e.path = prefix_ + format_compact_timestamp(anchor) + "_lead" +
                 std::to_string(lead) + ".tns";
        out.push_back(store_->load(e));
    }
    return out;
}

void ExternalPredictorConfig::validate() const {
    if (patch_size < 1 || frame_width < patch_size || frame_width % patch_size != 0)
        throw ConfigError("predictor config: frame_width must be a multiple of patch_size");
    const int n = (frame_width / patch_size) * (frame_width / patch_size);
    if (patches_per_frame != n)
        throw ConfigError("predictor config: patches_per_frame must equal (W/p)^2 = " +
                          std::to_string(n));
    if (embed_dim < 1) throw ConfigError("predictor config: embed_dim must be positive");
    if (context_frames != kSeqFrames)
        throw ConfigError("predictor config: context_frames must be " +
                          std::to_string(kSeqFrames));
}

ExternalPredictorConfig ExternalPredictorConfig::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("predictor config json: ") + e.what());
    }
    ExternalPredictorConfig c;
    for (const auto& [key, val] : j.items()) {
        if (key == "patch_size") c.patch_size = val.get<int>();
        else if (key == "embed_dim") c.embed_dim = val.get<int>();
        else if (key == "patches_per_frame") c.patches_per_frame = val.get<int>();
        else if (key == "context_frames") c.context_frames = val.get<int>();
        else if (key == "frame_width") c.frame_width = val.get<int>();
        else throw ConfigError("predictor config: unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

std::vector<double> smart_persistence(double kt_now,
                                      const std::vector<ClearSkyContext>& future) {
    if (!std::isfinite(kt_now)) throw RangeError("smart_persistence: kt not finite");
    std::vector<double> out;
    out.reserve(future.size());
    for (const auto& ctx : future) out.push_back(kt_now * ctx.i_clr);
    return out;
}

ForecastMatrix two_step_forecast(const SequenceSet& set, const ImageStore& store,
                                 const VideoPredictor& vp, const Estimator& est) {
    const bool passthrough = dynamic_cast<const PassthroughPredictor*>(&vp) != nullptr;
    const auto* external = dynamic_cast<const ExternalFramePredictor*>(&vp);
    ForecastMatrix out(set.samples.size());

    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t si = 0; si < static_cast<std::int64_t>(set.samples.size()); ++si) {
        const auto& s = set.samples[static_cast<std::size_t>(si)];
        std::vector<SkyImage> frames;
        if (passthrough) {
            for (std::size_t k = 0; k < kSeqFrames; ++k) {
                ManifestEntry e;
                e.path = set.pairs[s.targets[k]].image_path;
                frames.push_back(store.load(e));
            }
        } else if (external) {
            frames = external->predict_at(s.t);
        } else {
            std::vector<SkyImage> context;
            for (std::size_t k = 0; k < kSeqFrames; ++k) {
                ManifestEntry e;
                e.path = set.pairs[s.context[k]].image_path;
                context.push_back(store.load(e));
            }
            frames = vp.predict(context);
        }
        if (frames.size() != kSeqFrames)
            throw ShapeError("video predictor returned wrong frame count");
        for (std::size_t k = 0; k < kSeqFrames; ++k) {
            const auto& tp = set.pairs[s.targets[k]];
            const SkyImage sized = resize_image(frames[k], 64);
            out[static_cast<std::size_t>(si)][k] =
                est.estimate(sized, tp.cos_zenith, tp.ctx);
        }
    }
    return out;
}

ForecastMatrix single_step_persist_kt(const SequenceSet& set) {
    ForecastMatrix out(set.samples.size());
    for (std::size_t si = 0; si < set.samples.size(); ++si) {
        const auto& s = set.samples[si];
        const auto& anchor = set.pairs[s.context[kSeqFrames - 1]];
        const double kt_now = clear_sky_index(anchor.label_ghi, anchor.ctx);
        for (std::size_t k = 0; k < kSeqFrames; ++k)
            out[si][k] = kt_now * set.pairs[s.targets[k]].ctx.i_clr;
    }
    return out;
}

ForecastMatrix spm_forecast(const SequenceSet& set) {
    ForecastMatrix out(set.samples.size());
    for (std::size_t si = 0; si < set.samples.size(); ++si) {
        const auto& s = set.samples[si];
        const auto& anchor = set.pairs[s.context[kSeqFrames - 1]];
        const double kt_now = clear_sky_index(anchor.label_ghi, anchor.ctx);
        std::vector<ClearSkyContext> future;
        future.reserve(kSeqFrames);
        for (std::size_t k = 0; k < kSeqFrames; ++k)
            future.push_back(set.pairs[s.targets[k]].ctx);
        const auto f = smart_persistence(kt_now, future);
        for (std::size_t k = 0; k < kSeqFrames; ++k) out[si][k] = f[k];
    }
    return out;
}

ForecastReport evaluate_forecasts(const SequenceSet& set, const ForecastMatrix& forecast,
                                  const ForecastMatrix& baseline) {
    if (forecast.size() != set.samples.size() || baseline.size() != set.samples.size())
        throw ShapeError("evaluate_forecasts: matrix size mismatch");

    // Common target-instant set: instants forecast at every lead. Evaluating
    // all leads on the same instants makes per-lead numbers comparable.
    std::set<UtcSeconds> common;
    for (std::size_t k = 0; k < kSeqFrames; ++k) {
        std::set<UtcSeconds> lead_set;
        for (const auto& s : set.samples)
            lead_set.insert(set.pairs[s.targets[k]].instant);
        if (k == 0) {
            common = std::move(lead_set);
        } else {
            std::set<UtcSeconds> inter;
            std::set_intersection(common.begin(), common.end(), lead_set.begin(),
                                  lead_set.end(), std::inserter(inter, inter.begin()));
            common = std::move(inter);
        }
    }

    ForecastReport report;
    for (std::size_t k = 0; k < kSeqFrames; ++k) {
        std::vector<double> truth, pred, base;
        for (std::size_t si = 0; si < set.samples.size(); ++si) {
            const auto& tp = set.pairs[set.samples[si].targets[k]];
            if (!common.count(tp.instant)) continue;
            truth.push_back(tp.label_ghi);
            pred.push_back(forecast[si][k]);
            base.push_back(baseline[si][k]);
        }
        LeadMetrics lm;
        lm.lead_min = kLeadMinutes[k];
        lm.n = static_cast<std::int64_t>(truth.size());
        if (truth.empty()) continue;  // lead with zero samples is omitted
        const ErrorSums fs_sums = error_sums(truth.size(), truth.data(), pred.data());
        const ErrorSums bs_sums = error_sums(truth.size(), truth.data(), base.data());
        lm.rmse = std::sqrt(fs_sums.sq / static_cast<double>(truth.size()));
        const double rmse_spm = std::sqrt(bs_sums.sq / static_cast<double>(truth.size()));
        report.spm_rmse.push_back(rmse_spm);
        if (lm.rmse == rmse_spm)
            lm.fs = 0.0;  // covers the 0/0 case on exact ties
        else
            lm.fs = 1.0 - lm.rmse / rmse_spm;
        report.leads.push_back(lm);
    }
    return report;
}

void write_forecast_csv(const std::string& path, const ForecastReport& r) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write forecast csv: " + path);
    out << "lead_min,rmse,fs,n\n";
    char buf[128];
    for (const auto& lm : r.leads) {
        std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%lld\n", lm.lead_min, lm.rmse,
                      lm.fs, static_cast<long long>(lm.n));
        out << buf;
    }
}

}  // namespace skynow
