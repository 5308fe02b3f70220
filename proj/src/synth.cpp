#include "skynow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "skynow/errors.hpp"
#include "skynow/solar.hpp"

namespace skynow {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_rand(std::uint64_t& state) {
    state = splitmix64(state);
    return static_cast<double>(state >> 11) * 0x1.0p-53;
}

struct Cloud {
    double x, y;    // px, toroidal
    double vx, vy;  // px per minute
};

// Minimum toroidal separation on a WxW torus.
double torus_d2(double ax, double ay, double bx, double by, double w) {
    double dx = std::abs(ax - bx);
    double dy = std::abs(ay - by);
    dx = std::min(dx, w - dx);
    dy = std::min(dy, w - dy);
    return dx * dx + dy * dy;
}

struct DayResult {
    std::vector<ManifestEntry> entries;
    std::vector<std::pair<std::string, SkyImage>> images;
    std::vector<UtcSeconds> sample_t;
    std::vector<double> sample_ghi;
    std::vector<UtcSeconds> truth_t;
    std::vector<double> truth_kt;
};

class DayGenerator {
public:
    DayGenerator(const SyntheticScenario& sc, UtcSeconds day_start, std::uint64_t day_seed,
                 std::int64_t drift_s)
        : sc_(sc), day_start_(day_start), drift_s_(drift_s) {
        std::uint64_t rng = day_seed;
        const double w = sc.camera.width;
        for (int i = 0; i < sc.clouds.count; ++i) {
            Cloud c;
            c.x = unit_rand(rng) * w;
            c.y = unit_rand(rng) * w;
            const double ang = unit_rand(rng) * 2.0 * M_PI;
            c.vx = std::cos(ang) * sc.clouds.velocity_px_min;
            c.vy = std::sin(ang) * sc.clouds.velocity_px_min;
            clouds_.push_back(c);
        }
        sun_radius_ = 5.0 * (sc.camera.width / 64.0);
    }

    DayResult run() {
        DayResult out;
        // Daylight span at capture resolution.
        std::vector<UtcSeconds> captures;
        for (int s = 0; s < 86400; s += sc_.capture_interval_s) {
            const UtcSeconds t = day_start_ + s;
            if (solar_position(sc_.site, t).zenith_deg <= sc_.max_zenith_deg)
                captures.push_back(t);
        }
        if (captures.empty()) return out;

        const int w = sc_.averaging_window_s;
        const UtcSeconds lo = captures.front() - (sc_.averaging == AveragingMode::Backward ? w : 0);
        const UtcSeconds hi = captures.back() + (sc_.averaging == AveragingMode::Forward ? w : 0);

        // Instantaneous GHI on the 1-second lattice covering the day.
        const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
        std::vector<double> inst(n);
        for (std::size_t i = 0; i < n; ++i) inst[i] = instantaneous_ghi(lo + static_cast<UtcSeconds>(i));

        // Emitted per-minute samples.
        for (const UtcSeconds t : captures) {
            double value = 0.0;
            switch (sc_.averaging) {
                case AveragingMode::None:
                    value = inst[static_cast<std::size_t>(t - lo)];
                    break;
                case AveragingMode::Backward: {
                    double s = 0.0;
                    for (int k = 1; k <= w; ++k) s += inst[static_cast<std::size_t>(t - lo - k + 1)];
                    value = s / w;
                    break;
                }
                case AveragingMode::Forward: {
                    double s = 0.0;
                    for (int k = 0; k < w; ++k) s += inst[static_cast<std::size_t>(t - lo + k)];
                    value = s / w;
                    break;
                }
            }
            out.sample_t.push_back(t);
            out.sample_ghi.push_back(value);
        }

        // Images + truth at capture instants.
        for (const UtcSeconds t : captures) {
            const SolarPosition pos = solar_position(sc_.site, t);
            const double kt = kt_at(t);
            out.truth_t.push_back(t);
            out.truth_kt.push_back(kt);

            SkyImage img = render(t, pos);
            img.ts_date_modified = t;
            img.ts_file_name = t + drift_s_;
            img.site_id = sc_.site.name;
            const std::string path =
                "img/" + sc_.site.name + "_" + format_compact_timestamp(t) + ".tns";
            ManifestEntry e;
            e.path = path;
            e.ts_file_name = img.ts_file_name;
            e.ts_date_modified = img.ts_date_modified;
            e.exposure = Exposure::Long;
            e.site_id = sc_.site.name;
            out.entries.push_back(e);
            out.images.emplace_back(path, std::move(img));
        }
        return out;
    }

private:
    double minutes_since_start(UtcSeconds t) const {
        return static_cast<double>(t - day_start_) / 60.0;
    }

    void cloud_at(const Cloud& c, double minutes, double w, double* cx, double* cy) const {
        *cx = std::fmod(c.x + c.vx * minutes, w);
        if (*cx < 0) *cx += w;
        *cy = std::fmod(c.y + c.vy * minutes, w);
        if (*cy < 0) *cy += w;
    }

    // Opacity-weighted fraction of the sun disc covered by clouds.
    double occlusion(UtcSeconds t, const PixelPoint& sun) const {
        if (!sc_.clouds.enabled || clouds_.empty()) return 0.0;
        const double w = sc_.camera.width;
        const double minutes = minutes_since_start(t);
        std::vector<std::pair<double, double>> pos(clouds_.size());
        for (std::size_t i = 0; i < clouds_.size(); ++i)
            cloud_at(clouds_[i], minutes, w, &pos[i].first, &pos[i].second);
        const double cr2 = sc_.clouds.radius_px * sc_.clouds.radius_px;
        int covered = 0, total = 0;
        const int y0 = static_cast<int>(std::floor(sun.y - sun_radius_));
        const int y1 = static_cast<int>(std::ceil(sun.y + sun_radius_));
        const int x0 = static_cast<int>(std::floor(sun.x - sun_radius_));
        const int x1 = static_cast<int>(std::ceil(sun.x + sun_radius_));
        const double sr2 = sun_radius_ * sun_radius_;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double px = x + 0.5, py = y + 0.5;
                const double dx = px - sun.x, dy = py - sun.y;
                if (dx * dx + dy * dy > sr2) continue;
                ++total;
                for (const auto& [cx, cy] : pos) {
                    if (torus_d2(px, py, cx, cy, w) <= cr2) {
                        ++covered;
                        break;
                    }
                }
            }
        }
        if (total == 0) return 0.0;
        return sc_.clouds.opacity * static_cast<double>(covered) / total;
    }

    double kt_at(UtcSeconds t) const {
        const SolarPosition pos = solar_position(sc_.site, t);
        if (pos.zenith_deg >= 90.0) return 0.0;
        const PixelPoint sun = sun_center(sc_.camera, pos);
        return kt_from_occlusion(occlusion(t, sun), sc_.kt_floor);
    }

    double instantaneous_ghi(UtcSeconds t) const {
        const SolarPosition pos = solar_position(sc_.site, t);
        if (pos.zenith_deg >= 90.0) return 0.0;
        const ClearSkyContext ctx = predict_clear_sky(sc_.clear_sky, pos, sc_.site);
        const PixelPoint sun = sun_center(sc_.camera, pos);
        return kt_from_occlusion(occlusion(t, sun), sc_.kt_floor) * ctx.i_clr;
    }

    SkyImage render(UtcSeconds t, const SolarPosition& pos) const {
        const int W = sc_.camera.width;
        SkyImage img = SkyImage::filled(W, W, 3, 0);
        const double half = W / 2.0;
        const double roi_r2 = half * half;
        const PixelPoint sun = sun_center(sc_.camera, pos);
        const double sr2 = sun_radius_ * sun_radius_;
        const double minutes = minutes_since_start(t);
        std::vector<std::pair<double, double>> cpos(clouds_.size());
        for (std::size_t i = 0; i < clouds_.size(); ++i)
            cloud_at(clouds_[i], minutes, W, &cpos[i].first, &cpos[i].second);
        const double cr2 = sc_.clouds.radius_px * sc_.clouds.radius_px;

        for (int y = 0; y < W; ++y) {
            for (int x = 0; x < W; ++x) {
                const double px = x + 0.5, py = y + 0.5;
                const double rx = px - half, ry = py - half;
                if (rx * rx + ry * ry > roi_r2) continue;  // outside ROI stays black
                // Sky gradient, slightly brighter toward the center.
                const double shade = 1.0 - 0.3 * std::sqrt((rx * rx + ry * ry) / roi_r2);
                double r = 60.0 * shade, g = 105.0 * shade, b = 180.0 * shade;
                const double sx = px - sun.x, sy = py - sun.y;
                if (sx * sx + sy * sy <= sr2) {
                    r = 250.0;
                    g = 244.0;
                    b = 214.0;
                }
                if (sc_.clouds.enabled) {
                    for (const auto& [cx, cy] : cpos) {
                        if (torus_d2(px, py, cx, cy, W) <= cr2) {
                            const double a = sc_.clouds.opacity;
                            r = a * 205.0 + (1.0 - a) * r;
                            g = a * 205.0 + (1.0 - a) * g;
                            b = a * 208.0 + (1.0 - a) * b;
                            break;
                        }
                    }
                }
                img.at(y, x, 0) = static_cast<std::uint8_t>(std::lround(r));
                img.at(y, x, 1) = static_cast<std::uint8_t>(std::lround(g));
                img.at(y, x, 2) = static_cast<std::uint8_t>(std::lround(b));
            }
        }
        return img;
    }

    const SyntheticScenario& sc_;
    UtcSeconds day_start_;
    std::int64_t drift_s_;
    std::vector<Cloud> clouds_;
    double sun_radius_;
};

}  // namespace

double kt_from_occlusion(double occlusion_fraction, double kt_floor) {
    const double f = std::clamp(occlusion_fraction, 0.0, 1.0);
    return 1.0 - (1.0 - kt_floor) * f;
}

void SyntheticScenario::validate() const {
    site.validate();
    if (days < 1) throw ConfigError("synthetic: days must be >= 1");
    if (day_stride < 1) throw ConfigError("synthetic: day_stride must be >= 1");
    if (clouds.opacity < 0.0 || clouds.opacity > 1.0)
        throw ConfigError("synthetic: opacity out of [0, 1]");
    if (averaging != AveragingMode::None &&
        (averaging_window_s < 1 || averaging_window_s > 120))
        throw ConfigError("synthetic: averaging window out of [1, 120] s");
    if (kt_floor < 0.0 || kt_floor >= 1.0)
        throw ConfigError("synthetic: kt_floor out of [0, 1)");
    if (capture_interval_s < 1) throw ConfigError("synthetic: bad capture interval");
}

SyntheticCorpus generate(const SyntheticScenario& scenario) {
    scenario.validate();
    // Days are site-local: the scan starts at local midnight so each day holds
    // exactly one daylight run.
    const UtcSeconds first_day =
        utc_from_civil({scenario.start_year, scenario.start_month, scenario.start_day,
                        0, 0, 0}) -
        scenario.site.utc_offset_s;

    std::vector<DayResult> results(static_cast<std::size_t>(scenario.days));
    // Per-day RNG streams split from the master seed keep generation
    // reproducible for any thread count.
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t d = 0; d < scenario.days; ++d) {
        const UtcSeconds day_start = first_day + d * scenario.day_stride * 86400;
        const std::uint64_t day_seed =
            splitmix64(scenario.seed ^ (0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(d + 1)));
        const std::int64_t drift =
            scenario.drift_schedule.empty()
                ? 0
                : scenario.drift_schedule[static_cast<std::size_t>(d) %
                                          scenario.drift_schedule.size()];
        DayGenerator gen(scenario, day_start, day_seed, drift);
        results[static_cast<std::size_t>(d)] = gen.run();
    }

    SyntheticCorpus corpus;
    corpus.series.site = scenario.site;
    corpus.series.native_interval_s = scenario.capture_interval_s;
    for (auto& day : results) {
        for (auto& e : day.entries) corpus.manifest.entries.push_back(std::move(e));
        for (auto& [path, img] : day.images) corpus.store.put(path, std::move(img));
        for (std::size_t i = 0; i < day.sample_t.size(); ++i) {
            // dni=0, dhi=ghi keeps the component closure exact by construction.
            corpus.series.push(day.sample_t[i], day.sample_ghi[i], day.sample_ghi[i], 0.0);
        }
        corpus.truth_instant.insert(corpus.truth_instant.end(), day.truth_t.begin(),
                                    day.truth_t.end());
        corpus.truth_kt.insert(corpus.truth_kt.end(), day.truth_kt.begin(),
                               day.truth_kt.end());
    }
    corpus.series.check_monotone();
    return corpus;
}

void write_corpus(const SyntheticCorpus& corpus, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir + "/img");
    for (const auto& e : corpus.manifest.entries) {
        ManifestEntry key;
        key.path = e.path;
        const SkyImage img = corpus.store.load(key);
        write_tensor_u8(dir + "/" + e.path, img);
    }
    ImageManifest m = corpus.manifest;
    m.base_dir = dir;
    write_manifest_csv(dir + "/manifest.csv", m);
    write_series_csv(dir + "/series.csv", corpus.series);
    std::ofstream truth(dir + "/kt_truth.csv");
    if (!truth) throw DataError("cannot write kt truth csv");
    truth << "instant_utc,kt_true\n";
    char buf[96];
    for (std::size_t i = 0; i < corpus.truth_instant.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%s,%.12g\n",
                      format_iso8601(corpus.truth_instant[i]).c_str(), corpus.truth_kt[i]);
        truth << buf;
    }
}

}  // namespace skynow
