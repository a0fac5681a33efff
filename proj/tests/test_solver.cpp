#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "kolmo/errors.hpp"
#include "kolmo/solve.hpp"

using namespace kolmo;

namespace {

SolveRequest make_request(int r, int j1, int j2, double M1, double M2, double Mr) {
    SolveRequest req;
    req.r = r;
    req.j1 = j1;
    req.j2 = j2;
    req.targets.set(j1, M1);
    req.targets.set(j2, M2);
    req.targets.set(r, Mr);
    return req;
}

ExtremalParams random_params(std::mt19937& rng, int r) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double a = std::exp(std::log(0.1) + u(rng) * (std::log(10.0) - std::log(0.1)));
    const double l = std::exp(std::log(0.1) + u(rng) * (std::log(10.0) - std::log(0.1)));
    return {r, a, u(rng) * 0.9 * a, l};
}

} // namespace

TEST_CASE("three-norm slack: spot values and argument checks") {
    CHECK(olovyanishnikov_slack(2, 0, 1, 1.0, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    // Equality case: the b = 0 member with a = sqrt(2), r = 4, orders (0, 2).
    const double M0 = 1.0 / 6.0;
    CHECK(std::abs(olovyanishnikov_slack(4, 0, 2, M0, 1.0, 1.0)) <= 1e-15);
    // Cross-check the equality values against the constructed member itself.
    const auto table = norm_table({4, std::sqrt(2.0), 0.0, 1.0});
    CHECK(table.at(0) == doctest::Approx(M0).epsilon(1e-13));
    CHECK(table.at(2) == doctest::Approx(1.0).epsilon(1e-13));

    // The bound does not depend on M_j1, so the slack grows with it.
    CHECK(olovyanishnikov_slack(4, 0, 2, 1e9, 1.0, 1.0) > 1e8);

    CHECK_THROWS_AS(olovyanishnikov_slack(4, 2, 1, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(olovyanishnikov_slack(4, 0, 4, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(olovyanishnikov_slack(4, 0, 2, -1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("b = 0 closed form") {
    const auto p1 = solve_b_zero(2, 1, 1.0, 1.0);
    CHECK(p1.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(norm_table(p1).at(0) == doctest::Approx(0.5).epsilon(1e-13));

    const auto p2 = solve_b_zero(4, 2, 1.0, 1.0);
    CHECK(p2.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(norm_table(p2).at(0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));

    // Commutes with the scaling law.
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.3, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int r = 3 + static_cast<int>(rng() % 5);
        const int j = static_cast<int>(rng() % (r - 1));
        const double Mj = u(rng), Mr = u(rng), lambda = u(rng), mu = u(rng);
        const auto base = solve_b_zero(r, j, Mj, Mr);
        const auto scaled = solve_b_zero(r, j, mu * std::pow(lambda, r - j) * Mj, mu * Mr);
        const auto expect = scale_params(base, lambda, mu);
        CHECK(scaled.a == doctest::Approx(expect.a).epsilon(1e-12));
        CHECK(scaled.l == doctest::Approx(expect.l).epsilon(1e-12));
    }
}

TEST_CASE("inner solve: monomial case and the hand-solved b = 1 instance") {
    CHECK(solve_inner_a(3, 1, 0.0, 1.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // r = 3, j2 = 1, b = 1, l = 1: the derivative norm is the tent area
    // (a-1)^2 for a <= 2, so the target 1 is hit exactly at a = 2.
    const double a = solve_inner_a(3, 1, 1.0, 1.0, 1.0);
    CHECK(a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(norm_table({3, a, 1.0, 1.0}).at(1) == doctest::Approx(1.0).epsilon(1e-12));

    // Brute-force scan: a single crossing of the target on (1, 4].
    int crossings = 0;
    double prev = norm_table({3, 1.0 + 1e-9, 1.0, 1.0}).at(1) - 1.0;
    for (int i = 1; i <= 3000; ++i) {
        const double x = 1.0 + 3.0 * i / 3000.0;
        const double cur = norm_table({3, x, 1.0, 1.0}).at(1) - 1.0;
        if (prev < 0.0 && cur >= 0.0) ++crossings;
        if (prev > 0.0 && cur <= 0.0) ++crossings;
        prev = cur;
    }
    CHECK(crossings == 1);

    // The norm vanishes as a approaches b.
    CHECK(norm_table({3, 1.0 + 1e-12, 1.0, 1.0}).at(1) < 1e-9);
}

TEST_CASE("outer solve: boundary case returns the b = 0 member") {
    const auto res = solve_outer_b(make_request(4, 0, 2, 1.0 / 6.0, 1.0, 1.0));
    CHECK(res.boundary_case);
    CHECK(res.params.b == 0.0);
    CHECK(res.params.a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    for (int k : {0, 2, 4})
        CHECK(res.residuals.at(k) <= 1e-9);
}

TEST_CASE("outer solve: interior case r=4, targets (1, 1, 1)") {
    const auto res = solve_outer_b(make_request(4, 0, 2, 1.0, 1.0, 1.0));
    CHECK(!res.boundary_case);
    CHECK(res.params.b > 0.0);
    CHECK(res.achieved.at(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.achieved.at(2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(res.achieved.at(4) == 1.0);

    // Bracket soundness: the returned b sits strictly inside the final
    // bracket and the residual changes sign across it.
    CHECK(res.bracket_lo < res.params.b);
    CHECK(res.params.b < res.bracket_hi);
    auto eta = [&](double b) {
        const double a = solve_inner_a(4, 2, b, 1.0, 1.0);
        return norm_table({4, a, b, 1.0}).at(0) - 1.0;
    };
    CHECK(eta(res.bracket_lo) <= 0.0);
    CHECK(eta(res.bracket_hi) >= 0.0);
}

TEST_CASE("outer solve: eta(0) matches the b = 0 closed form") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const int r = 3 + static_cast<int>(rng() % 6);
        const int j2 = 1 + static_cast<int>(rng() % (r - 2));
        const int j1 = static_cast<int>(rng() % j2);
        const double a0 = solve_inner_a(r, j2, 0.0, 1.0, 1.0);
        const double eta0 = norm_table({r, a0, 0.0, 1.0}).at(j1);
        const double e1 = static_cast<double>(r - j1) / (r - j2);
        const double closed = std::pow(factorial(r - j2), e1) / factorial(r - j1);
        CHECK(eta0 == doctest::Approx(closed).epsilon(1e-10));
    }
}

TEST_CASE("outer solve: eta grows past any target along doubling b") {
    const double target = 50.0;
    double b = 1.0;
    bool exceeded = false;
    for (int i = 0; i < 60 && !exceeded; ++i) {
        const double a = solve_inner_a(4, 2, b, 1.0, 1.0);
        exceeded = norm_table({4, a, b, 1.0}).at(0) > target;
        b *= 2.0;
    }
    CHECK(exceeded);
}

TEST_CASE("outer solve: roundtrip over random admissible triples") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const int r = 3 + static_cast<int>(rng() % 6);
        const int j2 = 1 + static_cast<int>(rng() % (r - 2));
        const int j1 = static_cast<int>(rng() % j2);
        const auto params = random_params(rng, r);
        const auto table = norm_table(params);
        const auto res = solve_outer_b(
            make_request(r, j1, j2, table.at(j1), table.at(j2), table.at(r)));
        for (int k : {j1, j2, r})
            CHECK(std::abs(res.achieved.at(k) - table.at(k)) <= 1e-8 * table.at(k));
    }
}

TEST_CASE("outer solve: homogeneity of the whole pipeline") {
    const auto base = solve_outer_b(make_request(4, 0, 2, 1.0, 1.0, 1.0));
    for (double lambda : {0.5, 2.0})
        for (double mu : {0.1, 10.0}) {
            const auto scaled = solve_outer_b(make_request(
                4, 0, 2, mu * std::pow(lambda, 4) * 1.0, mu * std::pow(lambda, 2) * 1.0, mu));
            const auto expect = scale_params(base.params, lambda, mu);
            CHECK(scaled.params.a == doctest::Approx(expect.a).epsilon(1e-9));
            CHECK(scaled.params.b == doctest::Approx(expect.b).epsilon(1e-9));
            CHECK(scaled.params.l == doctest::Approx(expect.l).epsilon(1e-12));
        }
}

TEST_CASE("outer solve: infeasible and invalid requests") {
    CHECK_THROWS_AS(solve_outer_b(make_request(4, 0, 2, 0.1, 1.0, 1.0)), infeasible_error);
    try {
        solve_outer_b(make_request(4, 0, 2, 0.1, 1.0, 1.0));
    } catch (const infeasible_error& e) {
        CHECK(e.slack() < 0.0);
    }
    CHECK_THROWS_AS(solve_outer_b(make_request(4, 0, 3, 1.0, 1.0, 1.0)),
                    std::invalid_argument);   // j2 > r-2
    CHECK_THROWS_AS(solve_outer_b(make_request(2, 0, 1, 1.0, 1.0, 1.0)),
                    std::invalid_argument);   // r < 3
}
