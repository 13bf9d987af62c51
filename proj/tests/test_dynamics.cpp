#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "satnc/dynamics.hpp"
#include "satnc/error.hpp"

using namespace satnc;

namespace {

/// Two nodes joined by one edge bundle whose multiplicity follows `mult`.
Scenario link_scenario(const std::vector<int>& mult, int m = 8) {
    Scenario sc;
    sc.graphs.dt_s = 60.0;
    for (std::size_t k = 0; k < mult.size(); ++k) {
        MultiGraph g(2);
        g.set(0, 1, mult[k]);
        sc.graphs.snapshots.push_back(g);
        sc.graphs.times_s.push_back(60.0 * static_cast<double>(k));
    }
    sc.source = 0;
    sc.sinks = {1};
    sc.field = FieldSpec{m};
    sc.unit_bps = 8.0;
    return sc;
}

RateSeries series_of(const std::vector<double>& v, double dt = 60.0) {
    RateSeries s{"test", {}, v};
    for (std::size_t k = 0; k < v.size(); ++k) s.times_s.push_back(dt * static_cast<double>(k));
    return s;
}

}  // namespace

TEST_CASE("distribution time") {
    CHECK(t_distribution(66, 3, 6400.0) == doctest::Approx(89.8425).epsilon(1e-9));
    CHECK(t_distribution(66, 1, 6400.0) == doctest::Approx(44.92125).epsilon(1e-9));
    CHECK(t_distribution(66, 3, 12800.0) == doctest::Approx(t_distribution(66, 3, 6400.0) / 2.0));
    CHECK(t_distribution(20, 2, 6400.0) / t_distribution(10, 2, 6400.0) == doctest::Approx(8.0));
    CHECK(t_distribution(40, 2, 6400.0) / t_distribution(20, 2, 6400.0) == doctest::Approx(8.0));
    CHECK_THROWS_AS(t_distribution(0, 3, 6400.0), DomainError);
}

TEST_CASE("percentile uses linear interpolation") {
    CHECK(percentile({1, 2, 3, 4}, 75) == doctest::Approx(3.25));
    CHECK(percentile({4, 1, 3, 2}, 50) == doctest::Approx(2.5));
    CHECK(percentile({1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, 90) == doctest::Approx(9.1));
    CHECK(percentile({7}, 90) == 7);
}

TEST_CASE("constant topology") {
    const auto sc = link_scenario(std::vector<int>(30, 4));
    const auto a = analyze(sc);
    for (double v : a.r_opt.values) CHECK(v == doctest::Approx(4.0));
    for (double v : a.r_int_cum.values) CHECK(v == doctest::Approx(4.0));
    CHECK(a.stable.tau_s == 0.0);
    CHECK_FALSE(a.period.period_s.has_value());
    CHECK(a.report.papr == doctest::Approx(1.0));
    CHECK(a.report.p50 == doctest::Approx(1.0));
    CHECK(a.report.p75 == doctest::Approx(1.0));
    CHECK(a.report.max_ra == doctest::Approx(1.0));
    CHECK(a.report.recommendation == Recommendation::Intersection);
}

TEST_CASE("disconnected snapshots have zero rate") {
    const auto sc = link_scenario({3, 0, 3});
    const auto r = r_opt_series(sc);
    CHECK(r.values[1] == 0.0);
    CHECK(r.values[0] == doctest::Approx(3.0));
}

TEST_CASE("intersection of one snapshot is that snapshot") {
    const auto sc = link_scenario({5, 2, 7, 3});
    const auto h = max_flow_series(sc);
    for (int k = 0; k < 4; ++k) {
        CHECK(intersection_graph(sc, k, k) == sc.graphs.snapshots[static_cast<std::size_t>(k)]);
        CHECK(r_intersection(sc, k, k) == doctest::Approx(sc.rate_of(h[static_cast<std::size_t>(k)])));
    }
    CHECK(r_intersection(sc, 0, 3) == doctest::Approx(2.0));
    CHECK(r_intersection(sc, 2, 3) == doctest::Approx(3.0));
    CHECK_THROWS_AS(intersection_graph(sc, 2, 1), DomainError);
}

TEST_CASE("cumulative intersection never grows and bounds r_opt") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> m(50);
        for (auto& x : m) x = 1 + static_cast<int>(rng() % 9);
        const auto sc = link_scenario(m);
        const auto cum = r_intersection_cumulative(sc);
        const auto opt = r_opt_series(sc);
        for (std::size_t k = 1; k < cum.values.size(); ++k) CHECK(cum.values[k] <= cum.values[k - 1]);
        for (int a = 0; a < 50; a += 7)
            for (int b = a; b < 50; b += 5) {
                const double ri = r_intersection(sc, a, b);
                for (int t = a; t <= b; ++t) CHECK(opt.values[static_cast<std::size_t>(t)] >= ri);
            }
    }
}

TEST_CASE("static rate pays for the larger field") {
    const auto sc = link_scenario(std::vector<int>(40, 9));
    const auto h = max_flow_series(sc);
    const auto st = r_static_series(sc, h);
    // |F| = 256: tau = 1 needs 512 > 256, so 9 bits per symbol.
    CHECK(st.values[0] == doctest::Approx(9.0 * 8.0 / 9.0));
    CHECK(st.values[1] == doctest::Approx(9.0 * 8.0 / 10.0));
    for (std::size_t k = 1; k < st.values.size(); ++k) CHECK(st.values[k] <= st.values[k - 1]);
    // Strict drop whenever |F| * tau reaches the next power of two.
    for (std::size_t tau : {2u, 4u, 8u, 16u, 32u}) CHECK(st.values[tau - 1] < st.values[tau - 2]);
}

TEST_CASE("interval rate formula") {
    const auto sc = link_scenario({6, 6, 4, 4, 5, 5});
    CHECK(r_interval(sc, 6, 6, 0.0) == doctest::Approx(r_intersection(sc, 0, 5)));
    CHECK(r_interval(sc, 6, 6, 180.0) == doctest::Approx(r_intersection(sc, 0, 5) / 2.0));
    CHECK(r_interval(sc, 6, 2, 60.0) == doctest::Approx((6.0 + 4.0 + 5.0) * (120.0 - 60.0) / 360.0));
    CHECK_THROWS_AS(r_interval(sc, 6, 1, 60.0), DomainError);
    CHECK_THROWS_AS(r_interval(sc, 6, 4, 0.0), DomainError);
    // Airtime factor never exceeds one.
    for (int w : {1, 2, 3, 6}) {
        double best = 0.0;
        for (int s = 0; s < 6; s += w) best = std::max(best, r_intersection(sc, s, s + w - 1));
        CHECK(r_interval(sc, 6, w, 30.0) <= best);
    }
}

TEST_CASE("period from peak spacing") {
    std::vector<double> v(120, 1.0);
    v[30] = 5.0;
    v[80] = 5.0;
    const auto p = t_period(series_of(v));
    REQUIRE(p.period_s.has_value());
    CHECK(*p.period_s / 60.0 == doctest::Approx(50.0));

    std::vector<double> sine(400);
    for (std::size_t k = 0; k < sine.size(); ++k) sine[k] = std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / 37.0);
    const auto ps = t_period(series_of(sine));
    REQUIRE(ps.period_s.has_value());
    CHECK(std::abs(*ps.period_s / 60.0 - 37.0) <= 1.0);

    CHECK_FALSE(t_period(series_of(std::vector<double>(50, 2.0))).period_s.has_value());

    // A flat-topped peak counts once, at its centre.
    std::vector<double> plateau(60, 0.0);
    plateau[10] = plateau[11] = 3.0;
    plateau[40] = plateau[41] = 3.0;
    const auto pp = t_period(series_of(plateau));
    REQUIRE(pp.peaks.size() == 2);
    CHECK(pp.peaks[0] == doctest::Approx(10.5));
    CHECK(*pp.period_s / 60.0 == doctest::Approx(30.0));
}

TEST_CASE("stable time of a step-down series") {
    std::vector<int> m(60, 2);
    for (int k = 0; k < 5; ++k) m[static_cast<std::size_t>(k)] = 6;
    const auto sc = link_scenario(m);
    const auto st = tau_stable(r_intersection_cumulative(sc), std::nullopt);
    CHECK(st.tau_s == doctest::Approx(5 * 60.0));
    CHECK_FALSE(st.capped);

    const auto capped = tau_stable(r_intersection_cumulative(sc), 120.0);
    CHECK(capped.capped);
    CHECK(capped.tau_s == doctest::Approx(120.0));

    CHECK(tau_stable(r_intersection_cumulative(link_scenario(std::vector<int>(20, 3))), std::nullopt).tau_s == 0.0);
}

TEST_CASE("interior interval optimum") {
    // One deep fade at the end: short windows lose airtime, long ones inherit the fade.
    std::vector<int> m(60, 10);
    m[59] = 2;
    const auto sc = link_scenario(m);
    const double r_int = r_intersection(sc, 0, 59);
    const auto res = find_t_opt(sc, 60, 0.0, 90.0, r_int);
    REQUIRE(res.t_opt_s.has_value());
    CHECK(*res.t_opt_s / 60.0 == doctest::Approx(10.0));
    CHECK_FALSE(res.monotone);
    for (const auto& p : res.sweep) CHECK(p.window_s > 90.0);

    const auto c = criteria(r_opt_series(sc), r_int, res.best_rate, 2.1);
    CHECK(c.max_ra == doctest::Approx(5.0));
    CHECK(c.rate_r > 1.0);
    CHECK(c.recommendation == Recommendation::Interval);
}

TEST_CASE("monotone interval profile has no optimum") {
    const auto sc = link_scenario(std::vector<int>(60, 10));
    const auto res = find_t_opt(sc, 60, 0.0, 90.0, r_intersection(sc, 0, 59));
    CHECK_FALSE(res.t_opt_s.has_value());
    CHECK(res.monotone);
    CHECK(res.sweep.back().window_s == doctest::Approx(3600.0));
}

TEST_CASE("windows shorter than the stable time are skipped") {
    const auto sc = link_scenario(std::vector<int>(60, 10));
    const auto res = find_t_opt(sc, 60, 600.0, 0.0, 10.0);
    REQUIRE_FALSE(res.sweep.empty());
    CHECK(res.sweep.front().window_s == doctest::Approx(600.0));
}

TEST_CASE("rateR below one exactly when no optimum exists") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> m(60);
        const int base = 2 + static_cast<int>(rng() % 4);
        for (auto& x : m) x = base + static_cast<int>(rng() % 6 == 0 ? rng() % 8 : 0);
        const auto sc = link_scenario(m);
        const double r_int = r_intersection(sc, 0, 59);
        const double td = 30.0 + static_cast<double>(rng() % 200);
        const auto res = find_t_opt(sc, 60, 0.0, td, r_int);
        const auto c = criteria(r_opt_series(sc), r_int, res.best_rate, 2.1);
        CHECK((c.rate_r < 1.0) == !res.t_opt_s.has_value());
    }
}

TEST_CASE("criteria ratios") {
    const auto c = criteria(series_of({1, 2, 3, 6}), 2.0, 2.5, 2.1);
    CHECK(c.papr == doctest::Approx(6.0 / 3.0));
    CHECK(c.max_ra == doctest::Approx(3.0));
    CHECK(c.rate_r == doctest::Approx(1.25));
    CHECK(c.p50 == doctest::Approx(6.0 / 2.5));
    CHECK(c.p75 == doctest::Approx(6.0 / 3.75));
    CHECK(c.p75 <= c.p50);
    CHECK(c.papr >= 1.0);
    CHECK(c.recommendation == Recommendation::Interval);
    CHECK(criteria(series_of({1, 2, 3, 6}), 2.0, 2.5, 3.5).recommendation == Recommendation::Intersection);

    const auto z = criteria(series_of({1, 2}), 0.0, 0.5, 2.1);
    CHECK_FALSE(z.ratios_defined);
    CHECK(std::isnan(z.rate_r));
}

TEST_CASE("analysis is a pure function of the scenario") {
    std::vector<int> m(90);
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = 3 + static_cast<int>((k * 7) % 5);
    const auto sc = link_scenario(m);
    std::stringstream a, b;
    const auto x = analyze(sc), y = analyze(sc);
    write_rates_csv(x, a);
    write_interval_sweep_csv(x, a);
    write_criteria_row("s", x.report, a);
    write_rates_csv(y, b);
    write_interval_sweep_csv(y, b);
    write_criteria_row("s", y.report, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("scenario validation") {
    auto sc = link_scenario({1, 2});
    sc.sinks.clear();
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.sinks = {0};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc.sinks = {3};
    CHECK_THROWS_AS(sc.validate(), ConfigError);
}
