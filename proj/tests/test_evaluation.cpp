#include <doctest.h>

#include <cmath>
#include <random>

#include "skynow/errors.hpp"
#include "skynow/evaluation.hpp"

using namespace skynow;

namespace {

constexpr std::int64_t kOffset = -8 * 3600;

AlignedPair mk(UtcSeconds t, double ghi, SkyCondition sky) {
    AlignedPair p;
    p.instant = t;
    p.label_ghi = ghi;
    p.sky = sky;
    return p;
}

}  // namespace

TEST_CASE("metric formulas on pinned examples") {
    CHECK(metrics({100.0, 100.0}, {100.0, 100.0}).rmse == 0.0);
    const MetricSet m = metrics({100.0, 100.0}, {90.0, 110.0});
    CHECK(m.rmse == doctest::Approx(10.0));
    CHECK(m.mae == doctest::Approx(10.0));
    CHECK(m.nrmse == doctest::Approx(0.1));
    CHECK(m.n == 2);
    CHECK_THROWS_AS(metrics({}, {}), ShapeError);
    CHECK_THROWS_AS(metrics({0.0, 0.0}, {1.0, 1.0}), DataError);  // zero mean truth
}

TEST_CASE("metrics agree with a brute-force recompute on random data") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    const std::size_t n = 10000;
    std::vector<double> t(n), p(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = u(rng);
        p[i] = u(rng);
    }
    const MetricSet fast = metrics(t, p);
    long double sq = 0, ab = 0, mean = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double e = t[i] - p[i];
        sq += e * e;
        ab += fabsl(e);
        mean += t[i];
    }
    const double rmse = std::sqrt(static_cast<double>(sq / n));
    CHECK(fast.rmse == doctest::Approx(rmse).epsilon(1e-10));
    CHECK(fast.mae == doctest::Approx(static_cast<double>(ab / n)).epsilon(1e-10));
    CHECK(fast.nrmse ==
          doctest::Approx(rmse / static_cast<double>(mean / n)).epsilon(1e-10));
    const MetricSet slow = metrics_serial(t, p);
    CHECK(fast.rmse == slow.rmse);
    CHECK(fast.mae == slow.mae);
}

TEST_CASE("metric identities: scaling, permutation, rmse >= mae") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(1.0, 1000.0);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 10 + rng() % 200;
        std::vector<double> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = u(rng);
            p[i] = u(rng);
        }
        const MetricSet base = metrics(t, p);
        CHECK(base.rmse >= base.mae - 1e-12);

        const double c = 3.25;
        std::vector<double> tc(n), pc(n);
        for (std::size_t i = 0; i < n; ++i) {
            tc[i] = c * t[i];
            pc[i] = c * p[i];
        }
        const MetricSet scaled = metrics(tc, pc);
        CHECK(scaled.rmse == doctest::Approx(c * base.rmse).epsilon(1e-10));
        CHECK(scaled.mae == doctest::Approx(c * base.mae).epsilon(1e-10));
        CHECK(scaled.nrmse == doctest::Approx(base.nrmse).epsilon(1e-10));

        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<double> tp(n), pp(n);
        for (std::size_t i = 0; i < n; ++i) {
            tp[i] = t[order[i]];
            pp[i] = p[order[i]];
        }
        const MetricSet perm = metrics(tp, pp);
        CHECK(perm.rmse == doctest::Approx(base.rmse).epsilon(1e-12));
        CHECK(perm.mae == doctest::Approx(base.mae).epsilon(1e-12));
    }
}

TEST_CASE("stratified report partitions and decomposes") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(50.0, 900.0);
    std::vector<AlignedPair> pairs;
    std::vector<double> preds;
    // Two seasons, several hours, both sky conditions.
    for (int month : {1, 7}) {
        for (int day = 1; day <= 5; ++day) {
            for (int hour = 15; hour <= 23; ++hour) {
                const UtcSeconds t = utc_from_civil({2016, month, day, hour, 30, 0});
                const double ghi = u(rng);
                pairs.push_back(mk(t, ghi, rng() % 2 ? SkyCondition::Clear
                                                     : SkyCondition::Cloudy));
                preds.push_back(ghi + (u(rng) - 475.0) * 0.1);
            }
        }
    }
    const EvaluationReport r = stratify(pairs, preds, kOffset);
    CHECK(r.overall.n == static_cast<std::int64_t>(pairs.size()));
    CHECK(r.clear.n + r.cloudy.n == r.overall.n);
    std::int64_t season_n = 0, hour_n = 0;
    for (const auto& s : r.by_season) season_n += s.n;
    for (const auto& h : r.by_hour) hour_n += h.n;
    CHECK(season_n == r.overall.n);
    CHECK(hour_n == r.overall.n);

    // Variance decomposition: overall MSE = weighted mean of subgroup MSEs.
    const double overall_mse = r.overall.rmse * r.overall.rmse;
    double acc = 0.0;
    for (const auto& s : {r.clear, r.cloudy})
        acc += s.rmse * s.rmse * static_cast<double>(s.n);
    CHECK(acc / static_cast<double>(r.overall.n) ==
          doctest::Approx(overall_mse).epsilon(1e-10));
}

TEST_CASE("all-clear input leaves the cloudy subgroup empty") {
    std::vector<AlignedPair> pairs;
    std::vector<double> preds;
    for (int i = 0; i < 10; ++i) {
        pairs.push_back(mk(utc_from_civil({2016, 7, 1, 18, i, 0}), 500.0,
                           SkyCondition::Clear));
        preds.push_back(501.0);
    }
    const EvaluationReport r = stratify(pairs, preds, kOffset);
    CHECK(r.cloudy.n == 0);
    CHECK(r.cloudy.rmse == 0.0);
    CHECK(r.clear.n == 10);
}

TEST_CASE("hourly nrmse tracks an injected per-hour noise profile") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<AlignedPair> pairs;
    std::vector<double> preds;
    // Hours 18..21 UTC = 10..13 local; noise amplitude doubles each hour.
    const double amp[4] = {5.0, 10.0, 20.0, 40.0};
    for (int d = 1; d <= 20; ++d) {
        for (int h = 0; h < 4; ++h) {
            for (int m = 0; m < 60; m += 2) {
                const UtcSeconds t = utc_from_civil({2016, 7, d, 18 + h, m, 0});
                pairs.push_back(mk(t, 600.0, SkyCondition::Clear));
                preds.push_back(600.0 + amp[h] * gauss(rng));
            }
        }
    }
    const EvaluationReport r = stratify(pairs, preds, kOffset);
    for (int h = 0; h < 4; ++h) {
        const MetricSet& m = r.by_hour[static_cast<std::size_t>(10 + h)];
        REQUIRE(m.n > 0);
        CHECK(m.nrmse == doctest::Approx(amp[h] / 600.0).epsilon(0.15));
    }
    // Profile ordering is preserved.
    CHECK(r.by_hour[10].nrmse < r.by_hour[11].nrmse);
    CHECK(r.by_hour[11].nrmse < r.by_hour[12].nrmse);
    CHECK(r.by_hour[12].nrmse < r.by_hour[13].nrmse);
}

TEST_CASE("season bucketing follows meteorological quarters") {
    CHECK(season_index(12) == 0);
    CHECK(season_index(1) == 0);
    CHECK(season_index(3) == 1);
    CHECK(season_index(6) == 2);
    CHECK(season_index(9) == 3);
    CHECK(season_index(11) == 3);
}

TEST_CASE("report serialization carries counts everywhere") {
    std::vector<AlignedPair> pairs{mk(utc_from_civil({2016, 7, 1, 18, 0, 0}), 500.0,
                                      SkyCondition::Clear)};
    const EvaluationReport r = stratify(pairs, {490.0}, kOffset);
    const std::string j = report_to_json(r, "synthetic", "ridge");
    CHECK(j.find("\"dataset\"") != std::string::npos);
    CHECK(j.find("\"cloudy\"") != std::string::npos);
    CHECK(j.find("\"n\"") != std::string::npos);
}
