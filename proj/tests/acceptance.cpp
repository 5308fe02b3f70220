// Acceptance suite: one line per criterion, PASS/FAIL/SKIP, nonzero exit on
// any FAIL. Criteria run on synthetic corpora with known ground truth; the
// two data-dependent checks are skipped unless the corresponding environment
// variables point at prepared real datasets.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "skynow/align.hpp"
#include "skynow/clear_sky.hpp"
#include "skynow/config.hpp"
#include "skynow/evaluation.hpp"
#include "skynow/modeling.hpp"
#include "skynow/nowcast.hpp"
#include "skynow/resample.hpp"
#include "skynow/splits.hpp"
#include "skynow/synth.hpp"

using namespace skynow;

namespace {

int g_failures = 0;
std::uint64_t g_seed = 20240901;  // --seed N overrides (robustness sweeps)

void report(const char* id, bool pass, const std::string& detail) {
    std::printf("%s  %s  %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    if (!pass) ++g_failures;
}

void report_skip(const char* id, const std::string& detail) {
    std::printf("SKIP  %s  %s\n", id, detail.c_str());
}

// ---------------------------------------------------------------- common ---

SyntheticScenario scenario_base() {
    SyntheticScenario sc;
    sc.site = {"synthia", 38.642, -121.148, 0.0, -8 * 3600};
    sc.camera = {FisheyeProjection::Equidistant, 0.65, 180.0, 64};
    sc.clear_sky.kind = ClearSkyKind::SimplifiedSolis;
    sc.clear_sky.parameters = {{"aod700", 0.1},
                               {"precipitable_water", 1.0},
                               {"pressure_pa", 101325.0}};
    sc.clouds = {true, 3, 10.0, 6.0, 1.0};
    sc.seed = g_seed;
    return sc;
}

// interpolate -> (shift) -> zenith filter -> align, the pipeline order.
std::vector<AlignedPair> align_pairs(const SyntheticCorpus& corpus,
                                     const SyntheticScenario& sc,
                                     std::int64_t shift_s, SeriesRole role,
                                     TimestampSource source) {
    IrradianceSeries s1 = interpolate_1s(corpus.series);
    s1 = apply_time_shift(s1, {shift_s}, role);
    s1 = zenith_filter(s1, sc.site, 80.0);
    AlignmentResult res =
        align(corpus.manifest, s1, {source, std::nullopt}, sc.clear_sky);
    return std::move(res.pairs);
}

double ghi_rmse(const std::vector<AlignedPair>& pairs, const ImageStore& store,
                const RidgeEstimator& est) {
    std::vector<double> truth(pairs.size()), pred(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        ManifestEntry e;
        e.path = pairs[i].image_path;
        truth[i] = pairs[i].label_ghi;
        pred[i] = est.estimate(store.load(e), pairs[i].cos_zenith, pairs[i].ctx);
    }
    return metrics(truth, pred).rmse;
}

// ------------------------------------------------------------- criteria ---

void c1_weighted_loss_identity() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(0.05, 1.3);
    std::uniform_real_distribution<double> clr(40.0, 1100.0);
    double worst = 0.0;
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 1 + rng() % 128;
        const bool use_kt = rep % 2 == 0;
        const TargetKind norm = TargetKind::parse(use_kt ? "kt" : "Kt");
        const TargetKind weighted = TargetKind::parse(use_kt ? "ktw" : "Ktw");
        std::vector<double> y(n), yhat(n), gt(n), gp(n);
        std::vector<ClearSkyContext> ctx(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = u(rng);
            yhat[i] = u(rng);
            const double c = clr(rng);
            ctx[i] = {c, c + clr(rng)};
            gt[i] = from_target(y[i], ctx[i], norm);
            gp[i] = from_target(yhat[i], ctx[i], norm);
        }
        const double lw = loss(y, yhat, ctx, weighted);
        const double lg = loss(gt, gp, ctx, TargetKind::parse("ghi"));
        worst = std::max(worst, std::abs(lw - lg) / std::max(1e-300, std::abs(lg)));
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "weighted kt/Kt loss == GHI-space MSE; worst rel diff %.2e (tol 1e-9)",
                  worst);
    report("C1", worst <= 1e-9, buf);
}

void c2_lr_schedule() {
    bool ok = true;
    double worst = 0.0;
    for (int n : {8, 16}) {
        TrainingSchedule s;
        s.lr0 = 1e-3;
        s.n_epochs = n;
        const int at = static_cast<int>(std::ceil(0.75 * n));
        const double rel = std::abs(lr_at(s, at) - s.lr0 / 10.0) / (s.lr0 / 10.0);
        worst = std::max(worst, rel);
        ok = ok && rel <= 1e-12;
        double prev = 1e300;
        for (int e = 0; e <= n; ++e) {
            const double lr = lr_at(s, e);
            ok = ok && lr <= prev;
            prev = lr;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "lr(ceil(0.75 n)) == lr0/10 (worst rel %.2e, tol 1e-12), monotone", worst);
    report("C2", ok, buf);
}

void c3_sun_mask_geometry() {
    const PipelineConfig cfg = default_config();
    const CameraModel cams[3] = {cfg.site("folsom").camera, cfg.site("sirta").camera,
                                 cfg.site("nrel").camera};
    bool ok = true;
    for (const auto& cam : cams) {
        const PixelPoint c = sun_center(cam, {0.0, 77.0});
        ok = ok && c.x == 32.0 && c.y == 32.0;
        for (double z = 0.0; z <= 80.0 && ok; z += 1.0)
            for (double a = 0.0; a < 360.0 && ok; a += 3.0) {
                const PixelPoint p = sun_center(cam, {z, a});
                ok = std::hypot(p.x - 32.0, p.y - 32.0) <= 32.0;
            }
        // Disc area vs brute-force rasterization, several positions.
        for (double z : {0.0, 23.0, 61.0, 79.0}) {
            for (double a : {10.0, 135.0, 290.0}) {
                const SunMask m = render_sun_mask(cam, {z, a});
                std::size_t want = 0;
                for (int y = 0; y < 64; ++y)
                    for (int x = 0; x < 64; ++x) {
                        const double dx = (x + 0.5) - m.center_x;
                        const double dy = (y + 0.5) - m.center_y;
                        if (dx * dx + dy * dy <= m.radius_px * m.radius_px) ++want;
                    }
                ok = ok && m.area() == want;
            }
        }
    }
    report("C3", ok,
           "zenith 0 maps to the exact center; sweep stays in the ROI disc; "
           "mask area equals brute-force rasterization");
}

void c4_spm_self_skill() {
    SyntheticScenario sc = scenario_base();
    sc.days = 1;
    sc.capture_interval_s = 120;
    const SyntheticCorpus corpus = generate(sc);
    const auto pairs = align_pairs(corpus, sc, 0, SeriesRole::Test,
                                   TimestampSource::DateModified);
    const SequenceSet set = build_sequences(pairs, sc.site.utc_offset_s);
    const ForecastMatrix spm = spm_forecast(set);
    const ForecastReport r = evaluate_forecasts(set, spm, spm);
    bool ok = r.leads.size() == kSeqFrames;
    for (const auto& lm : r.leads) ok = ok && lm.fs == 0.0;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "FS(SPM vs SPM) == 0 at all %zu leads (n=%lld each)",
                  r.leads.size(), r.leads.empty() ? 0LL : (long long)r.leads[0].n);
    report("C4", ok, buf);
}

void c5_ground_truth_lower_bound() {
    SyntheticScenario sc = scenario_base();
    sc.days = 3;
    sc.capture_interval_s = 120;
    const SyntheticCorpus corpus = generate(sc);
    const auto pairs = align_pairs(corpus, sc, 0, SeriesRole::Test,
                                   TimestampSource::DateModified);

    // Train on day 1, forecast-evaluate on days 2-3.
    const std::int64_t first_day = local_day_index(pairs.front().instant,
                                                   sc.site.utc_offset_s);
    std::vector<AlignedPair> train, eval;
    for (const auto& p : pairs)
        (local_day_index(p.instant, sc.site.utc_offset_s) == first_day ? train : eval)
            .push_back(p);

    const FeatureSpec spec{12, false, true};
    const RidgeEstimator est =
        fit_ridge(train, corpus.store, TargetKind::parse("kt"), 1e-4, spec);

    const SequenceSet set = build_sequences(eval, sc.site.utc_offset_s);
    const PassthroughPredictor pass;
    const ForecastMatrix f = two_step_forecast(set, corpus.store, pass, est);
    const ForecastMatrix spm = spm_forecast(set);
    const ForecastReport r = evaluate_forecasts(set, f, spm);

    // Independent route: plain estimation RMSE on the common instant set.
    std::set<UtcSeconds> common;
    for (std::size_t k = 0; k < kSeqFrames; ++k) {
        std::set<UtcSeconds> lead;
        for (const auto& s : set.samples)
            lead.insert(set.pairs[s.targets[k]].instant);
        if (k == 0) common = std::move(lead);
        else {
            std::set<UtcSeconds> inter;
            std::set_intersection(common.begin(), common.end(), lead.begin(), lead.end(),
                                  std::inserter(inter, inter.begin()));
            common = std::move(inter);
        }
    }
    std::vector<AlignedPair> common_pairs;
    for (const auto& p : set.pairs)
        if (common.count(p.instant)) common_pairs.push_back(p);
    const double est_rmse = ghi_rmse(common_pairs, corpus.store, est);

    double spread = 0.0, worst_eq = 0.0;
    for (const auto& lm : r.leads) {
        spread = std::max(spread, std::abs(lm.rmse - r.leads[0].rmse));
        worst_eq = std::max(worst_eq, std::abs(lm.rmse - est_rmse));
    }
    const bool ok = r.leads.size() == kSeqFrames && spread <= 1e-9 && worst_eq <= 1e-9;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "passthrough RMSE constant across leads (spread %.2e) and equal to the "
                  "estimation RMSE %.3f W/m2 (worst diff %.2e, tol 1e-9)",
                  spread, est_rmse, worst_eq);
    report("C5", ok, buf);
}

void c6_time_shift_recovery() {
    SyntheticScenario train_sc = scenario_base();
    train_sc.days = 12;
    train_sc.start_month = 6;
    train_sc.start_day = 1;
    train_sc.averaging = AveragingMode::Backward;
    train_sc.averaging_window_s = 60;

    SyntheticScenario test_sc = train_sc;
    test_sc.start_month = 7;
    test_sc.start_day = 3;
    test_sc.days = 6;
    test_sc.seed = train_sc.seed + 1;

    const SyntheticCorpus train_corpus = generate(train_sc);
    const SyntheticCorpus test_corpus = generate(test_sc);

    const FeatureSpec spec{12, false, true};
    const TargetKind kt = TargetKind::parse("kt");
    const double lambda = 1e-4;

    // Day folds fixed from the unshifted alignment.
    const auto base_pairs = align_pairs(train_corpus, train_sc, 0, SeriesRole::Train,
                                        TimestampSource::DateModified);
    SplitSpec fold_spec;
    const FoldAssignment folds =
        stratified_group_kfold(base_pairs, fold_spec, train_sc.site.utc_offset_s);

    std::int64_t best_shift = 0;
    double best_score = 1e300;
    std::vector<std::string> sweep;
    for (std::int64_t shift = -30; shift <= 30; shift += 10) {
        const auto pairs = align_pairs(train_corpus, train_sc, shift, SeriesRole::Train,
                                       TimestampSource::DateModified);
        double mean_rmse = 0.0;
        for (int f = 0; f < fold_spec.k; ++f) {
            std::vector<AlignedPair> fit_part, val_part;
            for (const auto& p : pairs) {
                const auto day = local_day_index(p.instant, train_sc.site.utc_offset_s);
                (folds.fold(day) == f ? val_part : fit_part).push_back(p);
            }
            const RidgeEstimator est =
                fit_ridge(fit_part, train_corpus.store, kt, lambda, spec);
            mean_rmse += ghi_rmse(val_part, train_corpus.store, est);
        }
        mean_rmse /= fold_spec.k;
        char item[48];
        std::snprintf(item, sizeof(item), "%+lld:%.2f", (long long)shift, mean_rmse);
        sweep.push_back(item);
        if (mean_rmse < best_score) {
            best_score = mean_rmse;
            best_shift = shift;
        }
    }

    // Final models at the selected shift and at zero, tested unshifted.
    const auto test_pairs = align_pairs(test_corpus, test_sc, 0, SeriesRole::Test,
                                        TimestampSource::DateModified);
    const auto train_best = align_pairs(train_corpus, train_sc, best_shift,
                                        SeriesRole::Train, TimestampSource::DateModified);
    const RidgeEstimator est_best =
        fit_ridge(train_best, train_corpus.store, kt, lambda, spec);
    const RidgeEstimator est_zero =
        fit_ridge(base_pairs, train_corpus.store, kt, lambda, spec);
    const double rmse_best = ghi_rmse(test_pairs, test_corpus.store, est_best);
    const double rmse_zero = ghi_rmse(test_pairs, test_corpus.store, est_zero);

    const bool shift_ok = best_shift <= -20 && best_shift >= -40;
    const bool gain_ok = rmse_best < rmse_zero;
    std::string detail = "cv sweep {";
    for (std::size_t i = 0; i < sweep.size(); ++i)
        detail += (i ? " " : "") + sweep[i];
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "}; selected %+lld s (want -30 +/- 10); test RMSE %.2f < %.2f at zero: %s",
                  (long long)best_shift, rmse_best, rmse_zero, gain_ok ? "yes" : "no");
    detail += buf;
    report("C6", shift_ok && gain_ok, detail);
}

void c7_alignment_policy_effect() {
    SyntheticScenario train_sc = scenario_base();
    train_sc.days = 12;
    train_sc.drift_schedule = {240, 420, 330, 510, 280, 460};
    SyntheticScenario test_sc = train_sc;
    test_sc.start_month = 7;
    test_sc.start_day = 3;
    test_sc.days = 8;
    test_sc.seed = train_sc.seed + 2;

    const SyntheticCorpus train_corpus = generate(train_sc);
    const SyntheticCorpus test_corpus = generate(test_sc);
    const FeatureSpec spec{12, false, true};
    const TargetKind kt = TargetKind::parse("kt");

    EvaluationReport reports[2];
    const TimestampSource sources[2] = {TimestampSource::DateModified,
                                        TimestampSource::FileName};
    for (int i = 0; i < 2; ++i) {
        const auto train = align_pairs(train_corpus, train_sc, 0, SeriesRole::Train,
                                       sources[i]);
        const auto test = align_pairs(test_corpus, test_sc, 0, SeriesRole::Test,
                                      sources[i]);
        const RidgeEstimator est = fit_ridge(train, train_corpus.store, kt, 1e-4, spec);
        std::vector<double> pred(test.size());
        for (std::size_t p = 0; p < test.size(); ++p) {
            ManifestEntry e;
            e.path = test[p].image_path;
            pred[p] = est.estimate(test_corpus.store.load(e), test[p].cos_zenith,
                                   test[p].ctx);
        }
        reports[i] = stratify(test, pred, test_sc.site.utc_offset_s);
    }
    const EvaluationReport& dm = reports[0];
    const EvaluationReport& fn = reports[1];
    const double cloudy_gap = fn.cloudy.rmse - dm.cloudy.rmse;
    const double clear_gap = fn.clear.rmse - dm.clear.rmse;
    const bool ok = dm.overall.rmse < fn.overall.rmse && cloudy_gap > clear_gap;
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "correct-policy RMSE %.2f < drifted %.2f; cloudy gap %.2f > clear gap "
                  "%.2f",
                  dm.overall.rmse, fn.overall.rmse, cloudy_gap, clear_gap);
    report("C7", ok, buf);
}

void c8_target_ablation() {
    SyntheticScenario train_sc = scenario_base();
    train_sc.start_year = 2018;
    train_sc.start_month = 1;
    train_sc.start_day = 4;
    train_sc.days = 36;
    train_sc.day_stride = 10;  // spread across the full year
    SyntheticScenario test_sc = train_sc;
    test_sc.start_year = 2019;
    test_sc.start_day = 9;
    test_sc.days = 12;
    test_sc.day_stride = 30;
    test_sc.seed = train_sc.seed + 3;

    const SyntheticCorpus train_corpus = generate(train_sc);
    const SyntheticCorpus test_corpus = generate(test_sc);
    const auto train = align_pairs(train_corpus, train_sc, 0, SeriesRole::Train,
                                   TimestampSource::DateModified);
    const auto test = align_pairs(test_corpus, test_sc, 0, SeriesRole::Test,
                                  TimestampSource::DateModified);
    const FeatureSpec spec{12, false, true};
    const RidgeEstimator est_kt =
        fit_ridge(train, train_corpus.store, TargetKind::parse("kt"), 1e-4, spec);
    const RidgeEstimator est_ghi =
        fit_ridge(train, train_corpus.store, TargetKind::parse("ghi"), 1e-4, spec);
    const double rmse_kt = ghi_rmse(test, test_corpus.store, est_kt);
    const double rmse_ghi = ghi_rmse(test, test_corpus.store, est_ghi);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "multi-season corpus: kt-target test RMSE %.2f < GHI-target %.2f",
                  rmse_kt, rmse_ghi);
    report("C8", rmse_kt < rmse_ghi, buf);
}

void c9_split_integrity() {
    // 1000 lightweight synthetic days.
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> ghi(0.0, 1150.0);
    std::vector<AlignedPair> pairs;
    const UtcSeconds base = utc_from_civil({2014, 1, 1, 16, 0, 0});
    for (int d = 0; d < 1000; ++d)
        for (int i = 0; i < 30; ++i) {
            AlignedPair p;
            p.instant = base + static_cast<UtcSeconds>(d) * 86400 + i * 120;
            p.label_ghi = ghi(rng);
            pairs.push_back(p);
        }
    SplitSpec spec;
    spec.seed = 5;
    const std::int64_t off = -8 * 3600;
    const FoldAssignment a = stratified_group_kfold(pairs, spec, off);
    const FoldAssignment b = stratified_group_kfold(pairs, spec, off);
    bool ok = a.fold_of_day == b.fold_of_day;

    // Zero leakage: every day in exactly one fold.
    ok = ok && a.fold_of_day.size() == 1000;

    // Fold-bin histograms within 20% relative of the global per-fold share.
    const auto global = label_histogram(pairs, spec);
    std::vector<std::vector<double>> fold_hist(
        5, std::vector<double>(static_cast<std::size_t>(spec.n_bins), 0.0));
    std::vector<double> fold_tot(5, 0.0);
    for (const auto& p : pairs) {
        const int f = a.fold(local_day_index(p.instant, off));
        int bin = static_cast<int>(p.label_ghi / spec.bin_width_wm2);
        bin = std::min(bin, spec.n_bins - 1);
        fold_hist[static_cast<std::size_t>(f)][static_cast<std::size_t>(bin)] += 1.0;
        fold_tot[static_cast<std::size_t>(f)] += 1.0;
    }
    double total = 0.0;
    for (auto c : global) total += static_cast<double>(c);
    double worst = 0.0;
    for (int f = 0; f < 5; ++f)
        for (int bn = 0; bn < spec.n_bins; ++bn) {
            const double gf = static_cast<double>(global[static_cast<std::size_t>(bn)]) / total;
            if (gf <= 0.0) continue;
            const double ff =
                fold_hist[static_cast<std::size_t>(f)][static_cast<std::size_t>(bn)] /
                fold_tot[static_cast<std::size_t>(f)];
            worst = std::max(worst, std::abs(ff - gf) / gf);
        }
    ok = ok && worst <= 0.20;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "1000 days: no day leakage, reproducible, worst fold-bin deviation "
                  "%.1f%% (tol 20%%)",
                  100.0 * worst);
    report("C9", ok, buf);
}

void c10_reno_detection() {
    SyntheticScenario sc = scenario_base();
    sc.clouds.enabled = false;
    sc.days = 1;
    const SyntheticCorpus corpus = generate(sc);
    IrradianceSeries day = zenith_filter(corpus.series, sc.site, 80.0);

    const auto flags = detect_clear_periods(day, sc.clear_sky);
    std::size_t clear = 0;
    for (auto f : flags) clear += f == SkyCondition::Clear;
    const double clear_frac = static_cast<double>(clear) / flags.size();

    // Inject +/-200 W/m2 square-wave ramps into the middle half of the day.
    IrradianceSeries ramped = day;
    const std::size_t lo = day.size() / 4, hi = 3 * day.size() / 4;
    for (std::size_t i = lo; i < hi; ++i)
        ramped.ghi[i] += ((i - lo) / 10 % 2 == 0) ? 200.0 : -200.0;
    const auto rflags = detect_clear_periods(ramped, sc.clear_sky);
    std::size_t cloudy = 0;
    for (std::size_t i = lo; i < hi; ++i) cloudy += rflags[i] == SkyCondition::Cloudy;
    const double cloudy_frac = static_cast<double>(cloudy) / static_cast<double>(hi - lo);

    const bool ok = clear_frac >= 0.99 && cloudy_frac >= 0.95;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "all-clear day %.1f%% clear (>=99%%); ramp region %.1f%% cloudy (>=95%%)",
                  100.0 * clear_frac, 100.0 * cloudy_frac);
    report("C10", ok, buf);
}

void c11_metric_identities() {
    std::mt19937_64 rng(111);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    double worst_scale = 0.0, worst_decomp = 0.0;
    bool jensen = true;
    for (int rep = 0; rep < 10000; ++rep) {
        const std::size_t n = 2 + rng() % 40;
        std::vector<double> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = u(rng);
            p[i] = u(rng);
        }
        const MetricSet m = metrics(t, p);
        jensen = jensen && m.rmse >= m.mae - 1e-12;

        const double c = 0.25 + (rep % 7);
        std::vector<double> tc(n), pc(n);
        for (std::size_t i = 0; i < n; ++i) {
            tc[i] = c * t[i];
            pc[i] = c * p[i];
        }
        const MetricSet ms = metrics(tc, pc);
        worst_scale = std::max(worst_scale, std::abs(ms.nrmse - m.nrmse) / m.nrmse);

        // Subgroup decomposition: split in two, n-weighted MSEs must add up.
        const std::size_t half = n / 2;
        if (half >= 1 && n - half >= 1) {
            const MetricSet a = metrics({t.begin(), t.begin() + static_cast<std::ptrdiff_t>(half)},
                                        {p.begin(), p.begin() + static_cast<std::ptrdiff_t>(half)});
            const MetricSet b = metrics({t.begin() + static_cast<std::ptrdiff_t>(half), t.end()},
                                        {p.begin() + static_cast<std::ptrdiff_t>(half), p.end()});
            const double lhs = m.rmse * m.rmse * static_cast<double>(n);
            const double rhs = a.rmse * a.rmse * static_cast<double>(half) +
                               b.rmse * b.rmse * static_cast<double>(n - half);
            worst_decomp = std::max(worst_decomp, std::abs(lhs - rhs) / lhs);
        }
    }
    const bool ok = worst_scale <= 1e-10 && worst_decomp <= 1e-10 && jensen;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "nRMSE scale-invariance %.1e, MSE decomposition %.1e (tol 1e-10), "
                  "RMSE >= MAE everywhere: %s",
                  worst_scale, worst_decomp, jensen ? "yes" : "no");
    report("C11", ok, buf);
}

void c12_real_data_optional() {
    const char* sirta = std::getenv("SKYNOW_SIRTA_DIR");
    const char* folsom = std::getenv("SKYNOW_FOLSOM_DIR");
    if (!sirta) {
        report_skip("C12a",
                    "real SIRTA 2019 data not present (set SKYNOW_SIRTA_DIR to a "
                    "prepared corpus: manifest.csv + series.csv + img/)");
    } else {
        try {
            const PipelineConfig cfg = default_config();
            const SiteConfig& site_cfg = cfg.site("sirta");
            const std::string dir(sirta);
            const ImageManifest manifest = read_manifest_csv(dir + "/manifest.csv");
            IrradianceSeries series =
                read_series_csv(dir + "/series.csv", site_cfg.site);
            IrradianceSeries s1 = interpolate_1s(series);
            s1 = zenith_filter(s1, site_cfg.site, 80.0);
            AlignmentResult res = align(manifest, s1, site_cfg.policy,
                                        site_cfg.clear_sky, site_cfg.reno);
            const SequenceSet set =
                build_sequences(res.pairs, site_cfg.site.utc_offset_s, true);
            const ForecastMatrix spm = spm_forecast(set);
            const ForecastReport r = evaluate_forecasts(set, spm, spm);
            const double want[5] = {93.6, 117.4, 129.8, 137.6, 143.1};
            bool ok = r.leads.size() == 5;
            std::string detail = "SPM per-lead RMSE vs published {";
            for (std::size_t k = 0; k < r.leads.size(); ++k) {
                char item[40];
                std::snprintf(item, sizeof(item), "%s%.1f/%.1f", k ? " " : "",
                              r.leads[k].rmse, want[k]);
                detail += item;
                ok = ok && std::abs(r.leads[k].rmse - want[k]) / want[k] <= 0.05;
            }
            detail += "} within 5%";
            report("C12a", ok, detail);
        } catch (const std::exception& e) {
            report("C12a", false, std::string("error: ") + e.what());
        }
    }
    if (!folsom) {
        report_skip("C12b",
                    "real Folsom data not present (set SKYNOW_FOLSOM_DIR to a "
                    "prepared corpus with manifest.csv)");
    } else {
        try {
            const std::string dir(folsom);
            const ImageManifest manifest = read_manifest_csv(dir + "/manifest.csv");
            const auto drift = drift_report(manifest, -8 * 3600);
            // Fig. 6-window behavior: a sustained stretch of days where the
            // file name runs ~690 s (11 min 30 s) ahead.
            std::size_t near = 0;
            for (const auto& d : drift)
                if (d.mean_fn_minus_dm_s > 600.0 && d.mean_fn_minus_dm_s < 800.0) ++near;
            const bool ok = near >= 5;
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "%zu days with mean FN-DM drift in [600, 800] s (want >= 5, "
                          "positive sign = FN ahead)",
                          near);
            report("C12b", ok, buf);
        } catch (const std::exception& e) {
            report("C12b", false, std::string("error: ") + e.what());
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--seed") g_seed = std::strtoull(argv[i + 1], nullptr, 10);
    std::printf("skynow acceptance suite (seed %llu)\n",
                static_cast<unsigned long long>(g_seed));
    c1_weighted_loss_identity();
    c2_lr_schedule();
    c3_sun_mask_geometry();
    c4_spm_self_skill();
    c5_ground_truth_lower_bound();
    c6_time_shift_recovery();
    c7_alignment_policy_effect();
    c8_target_ablation();
    c9_split_integrity();
    c10_reno_detection();
    c11_metric_identities();
    c12_real_data_optional();
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
