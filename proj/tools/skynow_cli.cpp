// skynow command-line pipeline. Subcommands mirror the processing stages:
//   synth    generate a synthetic corpus with known ground truth
//   ingest   decode raw camera frames into the tensor store + manifest
//   process  fuse/resample/shift/filter an irradiance series
//   align    pair images with interpolated labels; drift reports
//   split    train/test split, k-fold map, optional interval thinning
//   fit      train the ridge estimator, save parameters as JSON
//   evaluate stratified estimation report
//   forecast sequence construction, SPM baseline, two-step harness
// Every command is deterministic given (inputs, config, --seed).

#include <fcntl.h>
#include <omp.h>
#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <opencv2/imgcodecs.hpp>

#include "skynow/align.hpp"
#include "skynow/config.hpp"
#include "skynow/errors.hpp"
#include "skynow/evaluation.hpp"
#include "skynow/modeling.hpp"
#include "skynow/nowcast.hpp"
#include "skynow/resample.hpp"
#include "skynow/splits.hpp"
#include "skynow/synth.hpp"

namespace fs = std::filesystem;
using namespace skynow;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string site = "folsom";
    std::uint64_t seed = 0;
    int jobs = 0;
    std::string out_dir = "out";
    bool dry_run = false;
};

PipelineConfig load(const CommonArgs& a) {
    PipelineConfig cfg = a.config_path.empty() ? default_config() : load_config(a.config_path);
    if (a.seed) cfg.seed = a.seed;
    if (a.jobs > 0) omp_set_num_threads(a.jobs);
    return cfg;
}

// One lock file per output directory; concurrent writers fail fast.
class OutDirLock {
public:
    explicit OutDirLock(const std::string& dir) : path_(dir + "/.lock") {
        fs::create_directories(dir);
        const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
        if (fd < 0)
            throw DataError("output dir locked by another run (remove " + path_ +
                            " if stale)");
        ::close(fd);
    }
    ~OutDirLock() { std::error_code ec; fs::remove(path_, ec); }

private:
    std::string path_;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "pipeline config JSON");
    cmd->add_option("--site", a.site, "site name (folsom|sirta|nrel|...)");
    cmd->add_option("--seed", a.seed, "seed overriding the config");
    cmd->add_option("--jobs", a.jobs, "OpenMP thread count");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_flag("--dry-run", a.dry_run, "print the plan and exit");
}

std::uint64_t fnv1a(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        for (std::streamsize i = 0; i < in.gcount(); ++i)
            h = (h ^ static_cast<unsigned char>(buf[i])) * 1099511628211ull;
    }
    return h;
}

UtcSeconds mtime_utc(const std::string& path) {
    // libstdc++ 11 lacks clock_cast; bridge file_clock to system_clock.
    const auto ft = fs::last_write_time(path);
    const auto sys = std::chrono::system_clock::now() +
                     std::chrono::duration_cast<std::chrono::system_clock::duration>(
                         ft - fs::file_time_type::clock::now());
    return std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch())
        .count();
}

// Filename stem must embed YYYYMMDD_HHMMSS somewhere.
std::optional<UtcSeconds> timestamp_from_name(const std::string& stem) {
    for (std::size_t i = 0; i + 15 <= stem.size(); ++i) {
        if (stem[i + 8] != '_') continue;
        bool digits = true;
        for (std::size_t k = 0; k < 15 && digits; ++k)
            digits = (k == 8) || (stem[i + k] >= '0' && stem[i + k] <= '9');
        if (!digits) continue;
        try {
            return parse_compact_timestamp(stem.substr(i, 15));
        } catch (const DataError&) {
        }
    }
    return std::nullopt;
}

// ------------------------------------------------------------------ synth --

int cmd_synth(const CommonArgs& a, int days, const std::string& start,
              bool no_clouds, const std::string& averaging, int window_s,
              const std::string& drift_csv, int capture_s, int stride) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc_cfg = cfg.site(a.site);
    SyntheticScenario sc;
    sc.site = sc_cfg.site;
    sc.site.name = a.site;
    sc.camera = sc_cfg.camera;
    sc.clear_sky = sc_cfg.clear_sky;
    sc.days = days;
    sc.day_stride = stride;
    sc.capture_interval_s = capture_s;
    sc.seed = cfg.seed;
    sc.clouds.enabled = !no_clouds;
    if (!start.empty()) {
        const CivilDateTime c = civil_from_utc(parse_iso8601(start + "T00:00:00Z"));
        sc.start_year = c.year;
        sc.start_month = c.month;
        sc.start_day = c.day;
    }
    if (averaging == "backward") sc.averaging = AveragingMode::Backward;
    else if (averaging == "forward") sc.averaging = AveragingMode::Forward;
    else if (averaging != "none") throw ConfigError("averaging must be none|backward|forward");
    sc.averaging_window_s = window_s;
    if (!drift_csv.empty()) {
        std::string item;
        for (char ch : drift_csv + ",") {
            if (ch == ',') {
                if (!item.empty()) sc.drift_schedule.push_back(std::stoll(item));
                item.clear();
            } else item.push_back(ch);
        }
    }
    if (a.dry_run) {
        std::cout << "plan: generate " << sc.days << " day(s) for site " << a.site
                  << " into " << a.out_dir << "\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const SyntheticCorpus corpus = generate(sc);
    write_corpus(corpus, a.out_dir);
    std::cout << "wrote " << corpus.manifest.entries.size() << " images, "
              << corpus.series.size() << " samples to " << a.out_dir << "\n";
    return 0;
}

// ----------------------------------------------------------------- ingest --

int cmd_ingest(const CommonArgs& a, const std::string& image_dir) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);

    std::vector<std::string> files;
    if (!image_dir.empty() && fs::exists(image_dir))
        for (const auto& e : fs::directory_iterator(image_dir)) {
            const std::string ext = e.path().extension().string();
            if (ext == ".jpg" || ext == ".jpeg" || ext == ".png") files.push_back(e.path().string());
        }
    std::sort(files.begin(), files.end());

    if (a.dry_run) {
        std::cout << "plan: ingest " << files.size() << " frame(s) from " << image_dir
                  << " into " << a.out_dir << "\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    fs::create_directories(a.out_dir + "/img");

    // Content-hash state enables idempotent re-runs.
    const std::string state_path = a.out_dir + "/ingest_state.csv";
    std::map<std::string, std::uint64_t> prior;
    if (fs::exists(state_path)) {
        std::ifstream st(state_path);
        std::string line;
        while (std::getline(st, line)) {
            const auto comma = line.find(',');
            if (comma != std::string::npos)
                prior[line.substr(0, comma)] =
                    std::strtoull(line.c_str() + comma + 1, nullptr, 10);
        }
    }

    ImageManifest manifest;
    manifest.base_dir = a.out_dir;
    std::vector<std::string> rejects;
    std::map<std::string, std::uint64_t> state;
    std::size_t skipped = 0;
    for (const auto& path : files) {
        const std::string stem = fs::path(path).stem().string();
        const auto named = timestamp_from_name(stem);
        if (!named) {
            rejects.push_back(path + ",no_timestamp_in_name");
            continue;
        }
        const std::uint64_t hash = fnv1a(path);
        state[path] = hash;
        const std::string out_rel = "img/" + stem + ".tns";
        ManifestEntry e;
        e.path = out_rel;
        e.ts_file_name = *named;
        e.ts_date_modified = mtime_utc(path);
        e.exposure = stem.find("short") != std::string::npos ? Exposure::Short
                                                             : Exposure::Long;
        e.site_id = a.site;

        const auto it = prior.find(path);
        if (it != prior.end() && it->second == hash &&
            fs::exists(a.out_dir + "/" + out_rel)) {
            ++skipped;  // unchanged input, output already present
            manifest.entries.push_back(e);
            continue;
        }
        const cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
        if (bgr.empty()) {
            rejects.push_back(path + ",decode_failed");
            continue;
        }
        if (sc.raw_width && (bgr.cols != sc.raw_width || bgr.rows != sc.raw_height)) {
            rejects.push_back(path + ",unexpected_dims");
            continue;
        }
        SkyImage img;
        img.height = bgr.rows;
        img.width = bgr.cols;
        img.channels = 3;
        img.pixels.resize(img.pixel_count());
        for (int y = 0; y < bgr.rows; ++y) {
            const auto* row = bgr.ptr<cv::Vec3b>(y);
            for (int x = 0; x < bgr.cols; ++x) {
                img.at(y, x, 0) = row[x][2];
                img.at(y, x, 1) = row[x][1];
                img.at(y, x, 2) = row[x][0];
            }
        }
        apply_roi(img, sc.roi);
        const SkyImage small = crop_and_resize(img, sc.roi, cfg.out_width);
        write_tensor_u8(a.out_dir + "/" + out_rel, small);
        manifest.entries.push_back(e);
    }
    write_manifest_csv(a.out_dir + "/manifest.csv", manifest);
    {
        std::ofstream st(state_path);
        for (const auto& [p, h] : state) st << p << ',' << h << '\n';
        std::ofstream rej(a.out_dir + "/rejects.csv");
        rej << "path,reason\n";
        for (const auto& r : rejects) rej << r << '\n';
    }
    std::cout << "ingested " << manifest.entries.size() << " frame(s) (" << skipped
              << " unchanged, " << rejects.size() << " rejected) into " << a.out_dir
              << "\n";
    if (manifest.entries.empty())
        std::cerr << "warning: empty manifest (no usable frames found)\n";
    return 0;
}

// ---------------------------------------------------------------- process --

int cmd_process(const CommonArgs& a, const std::string& series_csv,
                const std::string& role_name, bool multisensor) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    const SeriesRole role = role_name == "train" ? SeriesRole::Train : SeriesRole::Test;
    if (a.dry_run) {
        std::cout << "plan: process " << series_csv << " as " << role_name
                  << " (fuse=" << multisensor << ", shift="
                  << (role == SeriesRole::Train ? sc.train_time_shift_s : 0)
                  << "s, zenith<=80)\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);

    IrradianceSeries series;
    if (multisensor) {
        const MultiSensorSeries ms = read_multisensor_csv(series_csv, sc.site);
        MedianFilterResult fused = median_consistency_filter(ms);
        std::cout << "median filter: kept " << fused.accepted.size() << ", rejected "
                  << fused.rejected_inconsistent << " inconsistent, "
                  << fused.rejected_missing_component << " incomplete\n";
        series = std::move(fused.accepted);
    } else {
        series = read_series_csv(series_csv, sc.site);
    }
    if (sc.derive_dni) derive_dni_from_ghi_dhi(series, sc.site);

    GapReport gaps;
    IrradianceSeries s1 = interpolate_1s(series, &gaps);
    // Stage order is fixed: shift before the zenith filter.
    s1 = apply_time_shift(
        s1, {role == SeriesRole::Train ? sc.train_time_shift_s : 0}, role);
    s1 = zenith_filter(s1, sc.site, 80.0);

    write_series_csv(a.out_dir + "/series_1s.csv", s1);
    std::ofstream gap_out(a.out_dir + "/gap_report.csv");
    gap_out << "day,dropped_seconds\n";
    for (const auto& [day, secs] : gaps.dropped_seconds_by_day) {
        const CivilDateTime c = civil_from_utc(day * 86400);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
        gap_out << buf << ',' << secs << '\n';
    }
    std::cout << "processed " << s1.size() << " 1-s samples; dropped "
              << gaps.total_dropped_seconds << " gap seconds over " << gaps.gap_count
              << " gap(s)\n";
    return 0;
}

// ------------------------------------------------------------------ align --

int cmd_align(const CommonArgs& a, const std::string& manifest_csv,
              const std::string& series_csv) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    if (a.dry_run) {
        std::cout << "plan: align " << manifest_csv << " with " << series_csv << " ("
                  << (sc.policy.source == TimestampSource::FileName ? "file_name"
                                                                    : "date_modified")
                  << " policy)\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const ImageManifest manifest = read_manifest_csv(manifest_csv);
    IrradianceSeries s1 = read_series_csv(series_csv, sc.site);
    if (!s1.has_stage(SeriesStage::Interpolated1s) && s1.native_interval_s == 1)
        s1.mark_stage(SeriesStage::Interpolated1s);  // accept externally produced 1-s data
    const AlignmentResult res = align(manifest, s1, sc.policy, sc.clear_sky, sc.reno);
    write_pairs_csv(a.out_dir + "/pairs.csv", res.pairs);

    std::ofstream drift_out(a.out_dir + "/drift_report.csv");
    drift_out << "day,mean_fn_minus_dm_s,images\n";
    for (const auto& d : drift_report(manifest, sc.site.utc_offset_s)) {
        const CivilDateTime c = civil_from_utc(d.day * 86400);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d,%.3f,%lld\n", c.year, c.month,
                      c.day, d.mean_fn_minus_dm_s, (long long)d.image_count);
        drift_out << buf;
    }
    for (const TimestampSource src :
         {TimestampSource::FileName, TimestampSource::DateModified}) {
        const auto hist = second_histogram(manifest, src);
        std::ofstream hist_out(a.out_dir +
                               (src == TimestampSource::FileName
                                    ? "/seconds_histogram_fn.csv"
                                    : "/seconds_histogram_dm.csv"));
        hist_out << "second,count\n";
        for (int s = 0; s < 60; ++s)
            hist_out << s << ',' << hist[static_cast<std::size_t>(s)] << '\n';
    }
    std::int64_t dropped = 0;
    for (const auto& [r, n] : res.dropped) dropped += n;
    std::cout << "aligned " << res.pairs.size() << " pair(s), dropped " << dropped
              << " of " << res.manifest_size << " image(s)\n";
    return 0;
}

// ------------------------------------------------------------------ split --

int cmd_split(const CommonArgs& a, const std::string& pairs_csv, int thin_minutes) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    if (a.dry_run) {
        std::cout << "plan: split " << pairs_csv << " by test years, k=" << sc.split.k
                  << ", thin=" << thin_minutes << " min\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const auto pairs = read_pairs_csv(pairs_csv, sc.site);
    SplitSpec spec = sc.split;
    spec.seed = cfg.seed;
    const TrainTestSplit split = split_train_test(pairs, spec, sc.site.utc_offset_s);
    std::vector<AlignedPair> train = split.train;
    if (thin_minutes > 1)
        train = thin_by_interval(train, thin_minutes, sc.site.utc_offset_s);
    write_pairs_csv(a.out_dir + "/train.csv", train);
    write_pairs_csv(a.out_dir + "/test.csv", split.test);
    write_pairs_csv(a.out_dir + "/test_clear.csv", split.test_clear);
    write_pairs_csv(a.out_dir + "/test_cloudy.csv", split.test_cloudy);
    const FoldAssignment folds =
        stratified_group_kfold(train, spec, sc.site.utc_offset_s);
    write_fold_csv(a.out_dir + "/folds.csv", folds);
    write_split_manifest_json(a.out_dir + "/split_manifest.json", split, a.site);
    std::cout << "train " << train.size() << ", test " << split.test.size() << " ("
              << split.test_clear.size() << " clear / " << split.test_cloudy.size()
              << " cloudy)\n";
    return 0;
}

// -------------------------------------------------------------------- fit --

int cmd_fit(const CommonArgs& a, const std::string& pairs_csv,
            const std::string& image_dir, const std::string& target,
            double lambda) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    const TargetKind kind = target.empty() ? cfg.target : TargetKind::parse(target);
    if (a.dry_run) {
        std::cout << "plan: fit ridge (target " << kind.name() << ", lambda " << lambda
                  << ") on " << pairs_csv << "\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const auto pairs = read_pairs_csv(pairs_csv, sc.site);
    const DirImageStore store(image_dir);
    FeatureSpec spec = cfg.features;
    const double lam = lambda >= 0 ? lambda : cfg.ridge_lambda;
    const RidgeEstimator est = fit_ridge(pairs, store, kind, lam, spec);
    std::ofstream out(a.out_dir + "/estimator.json");
    out << est.to_json() << '\n';
    std::cout << "fit " << pairs.size() << " pair(s); estimator.json written\n";
    return 0;
}

// --------------------------------------------------------------- evaluate --

int cmd_evaluate(const CommonArgs& a, const std::string& pairs_csv,
                 const std::string& image_dir, const std::string& estimator_json,
                 const std::string& predictions_csv) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    if (a.dry_run) {
        std::cout << "plan: evaluate " << pairs_csv << " with "
                  << (predictions_csv.empty() ? estimator_json : predictions_csv)
                  << "\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const auto pairs = read_pairs_csv(pairs_csv, sc.site);
    std::vector<double> pred(pairs.size());
    std::string model_name;
    if (!predictions_csv.empty()) {
        const ExternalEstimator ext =
            ExternalEstimator::from_csv(predictions_csv, cfg.target);
        for (std::size_t i = 0; i < pairs.size(); ++i)
            pred[i] = ext.estimate_at(pairs[i].instant, pairs[i].ctx);
        model_name = "external";
    } else {
        std::ifstream in(estimator_json);
        if (!in) throw ConfigError("cannot open estimator: " + estimator_json);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        const RidgeEstimator est = RidgeEstimator::from_json(text);
        const DirImageStore store(image_dir);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            ManifestEntry e;
            e.path = pairs[i].image_path;
            pred[i] = est.estimate(store.load(e), pairs[i].cos_zenith, pairs[i].ctx);
        }
        model_name = "ridge";
    }
    const EvaluationReport report = stratify(pairs, pred, sc.site.utc_offset_s);
    write_report_json(a.out_dir + "/report.json", report, a.site, model_name);
    write_report_csv(a.out_dir + "/report.csv", report);
    std::printf("overall rmse %.3f mae %.3f nrmse %.4f (n=%lld)\n", report.overall.rmse,
                report.overall.mae, report.overall.nrmse,
                (long long)report.overall.n);
    return 0;
}

// --------------------------------------------------------------- forecast --

int cmd_forecast(const CommonArgs& a, const std::string& pairs_csv,
                 const std::string& image_dir, const std::string& estimator_json,
                 const std::string& predictor, bool odd_days,
                 const std::string& frames_dir) {
    const PipelineConfig cfg = load(a);
    const SiteConfig& sc = cfg.site(a.site);
    if (a.dry_run) {
        std::cout << "plan: forecast " << pairs_csv << " with predictor " << predictor
                  << "\n";
        return 0;
    }
    OutDirLock lock(a.out_dir);
    const auto pairs = read_pairs_csv(pairs_csv, sc.site);
    const SequenceSet set = build_sequences(pairs, sc.site.utc_offset_s, odd_days);
    const ForecastMatrix baseline = spm_forecast(set);

    ForecastMatrix forecast;
    if (predictor == "spm") {
        forecast = baseline;
    } else if (predictor == "single-step-persist") {
        forecast = single_step_persist_kt(set);
    } else {
        std::ifstream in(estimator_json);
        if (!in) throw ConfigError("cannot open estimator: " + estimator_json);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        const RidgeEstimator est = RidgeEstimator::from_json(text);
        const DirImageStore store(image_dir);
        if (predictor == "frozen") {
            forecast = two_step_forecast(set, store, FrozenPersistencePredictor{}, est);
        } else if (predictor == "passthrough") {
            forecast = two_step_forecast(set, store, PassthroughPredictor{}, est);
        } else if (predictor == "external") {
            const DirImageStore frames(frames_dir);
            forecast = two_step_forecast(set, store,
                                         ExternalFramePredictor(&frames, "pred_"), est);
        } else {
            throw ConfigError("unknown predictor: " + predictor);
        }
    }
    const ForecastReport report = evaluate_forecasts(set, forecast, baseline);
    write_forecast_csv(a.out_dir + "/forecast.csv", report);
    for (const auto& lm : report.leads)
        std::printf("lead %2d min: rmse %.3f fs %+.4f (n=%lld)\n", lm.lead_min, lm.rmse,
                    lm.fs, (long long)lm.n);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sky-image solar irradiance estimation and nowcasting pipeline"};
    app.require_subcommand(1);

    CommonArgs a;
    int days = 3, window_s = 60, capture_s = 60, stride = 1, thin_minutes = 1;
    bool no_clouds = false, multisensor = false, odd_days = false;
    std::string start, averaging = "none", drift_csv, image_dir, series_csv;
    std::string manifest_csv, pairs_csv, target, estimator_json, predictions_csv;
    std::string predictor = "frozen", frames_dir, role = "test";
    double lambda = -1.0;

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
    add_common(synth, a);
    synth->add_option("--days", days);
    synth->add_option("--start", start, "first day, YYYY-MM-DD");
    synth->add_flag("--no-clouds", no_clouds);
    synth->add_option("--averaging", averaging, "none|backward|forward");
    synth->add_option("--window", window_s, "averaging window seconds");
    synth->add_option("--drift", drift_csv, "per-day FN-DM drift seconds, comma list");
    synth->add_option("--capture-interval", capture_s, "seconds between frames");
    synth->add_option("--day-stride", stride, "calendar days between generated days");

    auto* ingest = app.add_subcommand("ingest", "decode raw frames into the store");
    add_common(ingest, a);
    ingest->add_option("--images", image_dir, "directory of JPEG/PNG frames");

    auto* process = app.add_subcommand("process", "fuse/resample/shift/filter a series");
    add_common(process, a);
    process->add_option("--series", series_csv)->required();
    process->add_option("--role", role, "train|test");
    process->add_flag("--multisensor", multisensor, "median-fuse repeated timestamps");

    auto* align_cmd = app.add_subcommand("align", "pair images with labels");
    add_common(align_cmd, a);
    align_cmd->add_option("--manifest", manifest_csv)->required();
    align_cmd->add_option("--series", series_csv, "1-second series csv")->required();

    auto* split = app.add_subcommand("split", "train/test split and folds");
    add_common(split, a);
    split->add_option("--pairs", pairs_csv)->required();
    split->add_option("--thin-minutes", thin_minutes, "train sample interval");

    auto* fit = app.add_subcommand("fit", "train the ridge estimator");
    add_common(fit, a);
    fit->add_option("--pairs", pairs_csv)->required();
    fit->add_option("--images", image_dir, "tensor store dir")->required();
    fit->add_option("--target", target, "ghi|kt|Kt|ktw|Ktw");
    fit->add_option("--lambda", lambda, "ridge penalty");

    auto* evaluate = app.add_subcommand("evaluate", "stratified estimation report");
    add_common(evaluate, a);
    evaluate->add_option("--pairs", pairs_csv)->required();
    evaluate->add_option("--images", image_dir, "tensor store dir");
    evaluate->add_option("--estimator", estimator_json, "estimator JSON");
    evaluate->add_option("--predictions", predictions_csv,
                         "external predictions csv (instant_utc,target)");

    auto* forecast = app.add_subcommand("forecast", "two-step forecasting harness");
    add_common(forecast, a);
    forecast->add_option("--pairs", pairs_csv)->required();
    forecast->add_option("--images", image_dir, "tensor store dir");
    forecast->add_option("--estimator", estimator_json, "estimator JSON");
    forecast->add_option("--predictor", predictor,
                         "spm|single-step-persist|frozen|passthrough|external");
    forecast->add_flag("--odd-days", odd_days, "keep odd days of month (test rule)");
    forecast->add_option("--frames", frames_dir, "external predicted-frame store");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(a, days, start, no_clouds, averaging, window_s, drift_csv,
                             capture_s, stride);
        if (ingest->parsed()) return cmd_ingest(a, image_dir);
        if (process->parsed()) return cmd_process(a, series_csv, role, multisensor);
        if (align_cmd->parsed()) return cmd_align(a, manifest_csv, series_csv);
        if (split->parsed()) return cmd_split(a, pairs_csv, thin_minutes);
        if (fit->parsed()) return cmd_fit(a, pairs_csv, image_dir, target, lambda);
        if (evaluate->parsed())
            return cmd_evaluate(a, pairs_csv, image_dir, estimator_json, predictions_csv);
        if (forecast->parsed())
            return cmd_forecast(a, pairs_csv, image_dir, estimator_json, predictor,
                                odd_days, frames_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const RangeError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
