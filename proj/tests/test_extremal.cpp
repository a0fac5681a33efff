#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kolmo/extremal.hpp"
#include "kolmo/verify.hpp"

using namespace kolmo;

namespace {

ExtremalParams random_params(std::mt19937& rng, int r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = std::exp(std::log(0.1) + u(rng) * (std::log(10.0) - std::log(0.1)));
    const double l = std::exp(std::log(0.1) + u(rng) * (std::log(10.0) - std::log(0.1)));
    return {r, a, u(rng) * 0.9 * a, l};
}

} // namespace

TEST_CASE("tent construction: spot values") {
    // a = 2b puts the descending edge's zero exactly at the origin.
    CHECK(evaluate(build_tent({1, 2.0, 1.0, 1.0}), 0.0) == doctest::Approx(0.0));
    // a > 2b leaves a positive value at the origin: l (a - 2b).
    CHECK(evaluate(build_tent({1, 3.0, 1.0, 1.0}), 0.0) == doctest::Approx(1.0));
    // b = 0 collapses to the truncated line 5 (t+1)_+.
    const auto line = build_tent({1, 1.0, 0.0, 5.0});
    CHECK(line.segment_count() == 1);
    for (double t : {-2.0, -1.0, -0.4, 0.0})
        CHECK(evaluate(line, t) == doctest::Approx(5.0 * std::max(t + 1.0, 0.0)));
    // Peak value l (a - b) at t = -b.
    CHECK(evaluate(build_tent({1, 3.0, 1.0, 2.0}), -1.0) == doctest::Approx(4.0));

    CHECK_THROWS_AS(build_tent({1, 1.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_tent({1, 1.0, 0.0, -1.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_tent({1, 1.0, -0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("iterated antiderivatives: hand values and the b = 0 monomial") {
    CHECK(evaluate(build_extremal({2, 2.0, 1.0, 1.0}), 0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(evaluate(build_extremal({3, 2.0, 1.0, 1.0}), 0.0) == doctest::Approx(1.0).epsilon(1e-13));

    const auto q = build_extremal({2, 1.0, 0.0, 1.0});   // (t+1)_+^2 / 2
    CHECK(evaluate(q, 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    for (double t : {-0.75, -0.25})
        CHECK(evaluate(q, t) == doctest::Approx((t + 1.0) * (t + 1.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("support: the extremal function vanishes left of -a") {
    std::mt19937 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto params = random_params(rng, 2 + static_cast<int>(rng() % 5));
        const auto f = build_extremal(params);
        CHECK(evaluate(f, -params.a) == 0.0);
        CHECK(evaluate(f, -params.a - 0.5) == 0.0);
        CHECK(evaluate(f, -10.0 * params.a) == 0.0);
    }
}

TEST_CASE("norm table: hand-derived spot values") {
    const auto t3 = norm_table({3, 2.0, 1.0, 1.0});
    for (int k = 0; k <= 3; ++k)
        CHECK(t3.at(k) == doctest::Approx(1.0).epsilon(1e-12));

    const auto t2 = norm_table({2, 1.0, 0.0, 1.0});
    CHECK(t2.at(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(t2.at(1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t2.at(2) == 1.0);

    // b = 0 monomial: entry k is l a^(r-k) / (r-k)!.
    const ExtremalParams mono{4, 1.7, 0.0, 2.3};
    const auto t4 = norm_table(mono);
    for (int k = 0; k <= 3; ++k)
        CHECK(t4.at(k) ==
              doctest::Approx(mono.l * std::pow(mono.a, 4 - k) / factorial(4 - k)).epsilon(1e-12));
}

TEST_CASE("norm table: exact top entries") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto params = random_params(rng, 2 + static_cast<int>(rng() % 6));
        const auto table = norm_table(params);
        CHECK(table.at(params.r) == params.l);
        CHECK(table.at(params.r - 1) == params.l * (params.a - params.b));
    }
}

TEST_CASE("norm at order r-1 is the tent peak on both sides of a = 2b") {
    // Checked against the sup search rather than trusted from the formula.
    for (const ExtremalParams params :
         {ExtremalParams{4, 3.0, 0.5, 1.3},     // a > 2b
          ExtremalParams{4, 3.0, 2.0, 1.3},     // a < 2b
          ExtremalParams{4, 3.0, 1.5, 1.3}}) {  // a = 2b
        const auto f = build_extremal(params);
        auto d = f;
        for (int k = 0; k < params.r - 1; ++k) d = derivative(d);
        CHECK(sup_norm_halfline(d) ==
              doctest::Approx(params.l * (params.a - params.b)).epsilon(1e-12));
    }
}

TEST_CASE("derivatives 0..r-1 are nonnegative and nondecreasing up to r-2") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 15; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 6);
        const auto params = random_params(rng, r);
        const auto f = build_extremal(params);
        CHECK(min_derivative_slack(f, r - 1, 1000) >= -1e-12);

        auto d = f;
        for (int k = 0; k <= r - 2; ++k) {
            double prev = -1e300;
            double scale_seen = 1.0;
            for (int i = 0; i <= 1000; ++i) {
                const double t = -params.a * (1.0 - i / 1000.0);
                const double v = evaluate(d, t);
                scale_seen = std::max(scale_seen, std::abs(v));
                CHECK(v >= prev - 1e-12 * scale_seen);
                prev = v;
            }
            d = derivative(d);
        }
    }
}

TEST_CASE("scaling law: norms transform as mu lambda^(r-k)") {
    const auto id = scale_params({3, 2.0, 1.0, 1.0}, 1.0, 1.0);
    CHECK(id.a == 2.0);
    CHECK(id.b == 1.0);
    CHECK(id.l == 1.0);

    // Monomial case doubled in time: norms {1/2, 1, 1} -> {2, 2, 1}.
    const auto doubled = norm_table(scale_params({2, 1.0, 0.0, 1.0}, 2.0, 1.0));
    CHECK(doubled.at(0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(doubled.at(1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(doubled.at(2) == doctest::Approx(1.0));

    const auto tripled = norm_table(scale_params({3, 2.0, 1.0, 1.0}, 1.0, 3.0));
    const auto base3 = norm_table({3, 2.0, 1.0, 1.0});
    for (int k = 0; k <= 3; ++k)
        CHECK(tripled.at(k) == doctest::Approx(3.0 * base3.at(k)).epsilon(1e-13));

    std::mt19937 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 6);
        const auto params = random_params(rng, r);
        const auto base = norm_table(params);
        for (double lambda : {0.5, 2.0, 10.0})
            for (double mu : {0.1, 1.0, 7.0}) {
                const auto scaled = norm_table(scale_params(params, lambda, mu));
                for (int k = 0; k <= r; ++k) {
                    const double want = mu * std::pow(lambda, r - k) * base.at(k);
                    CHECK(scaled.at(k) == doctest::Approx(want).epsilon(1e-10));
                }
            }
    }
}

TEST_CASE("norm table agrees with the quadrature oracle") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 6);
        const auto params = random_params(rng, r);
        const auto table = norm_table(params);
        const auto f = build_extremal(params);
        for (int k = 0; k <= r - 2; ++k)
            CHECK(quad_norm(f, k, r) == doctest::Approx(table.at(k)).epsilon(1e-6));
        CHECK(quad_norm(f, r - 1, r) == doctest::Approx(table.at(r - 1)).epsilon(1e-4));
    }
}
