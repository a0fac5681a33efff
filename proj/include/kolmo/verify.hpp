#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "kolmo/extremal.hpp"
#include "kolmo/piecewise.hpp"

namespace kolmo {

/// Building block of a generated class member: either a full extremal
/// instance or a truncated power c (t + alpha)^r_+ / r! (stored as the b = 0
/// extremal with a = alpha, l = c).
struct Atom {
    enum class Kind { extremal, truncated_power };
    Kind kind = Kind::extremal;
    ExtremalParams params;
};

/// A nonnegative combination of atoms plus a constant offset, known by
/// construction to lie in the (r-1)-monotone class.
struct ClassMember {
    int r = 2;
    std::vector<Atom> atoms;
    double offset = 0.0;
    PiecewisePolynomial realized = PiecewisePolynomial::zero();
};

/// Realizes the sum and validates class membership on a grid
/// (internal_error on failure: construction guarantees membership).
ClassMember make_member(int r, std::vector<Atom> atoms, double offset);

/// Deterministic member with 1..max_atoms random atoms: log-uniform scales
/// a, l, c, alpha in [0.1, 10], b uniform in [0, 0.9 a], offset in [0, 10].
ClassMember random_member(int r, int max_atoms, std::uint64_t seed);

/// Independent recomputation of ||p^(k)|| for a function of degree <= r per
/// segment.  Does not reuse the derivative/antiderivative/sup machinery: the
/// (r-1)-st derivative is sampled through divided differences of p on a
/// per-segment grid, lower orders are rebuilt from it by composite
/// Gauss-Legendre quadrature, and the sup is a dense grid search
/// (10^4 points per segment plus endpoints).  Slow by design.
double quad_norm(const PiecewisePolynomial& p, int k, int r);

/// Minimum of p^(k)(t) / max(1, sup |p^(k)|) over orders 0..max_order and a
/// grid of the given size; >= -1e-10 for genuine class members.
double min_derivative_slack(const PiecewisePolynomial& p, int max_order, int grid_points);

/// Measured norms of a class member: orders <= r-2 by the value at 0 (with a
/// monotonicity check on a grid, reported through *monotone_ok when given),
/// order r-1 by sup search, order r as the largest |r! c_r| over segments.
NormProfile measure_member_profile(const PiecewisePolynomial& p, int r,
                                   bool* monotone_ok = nullptr);

/// Generic measured norms: sup of |p^(k)| for k < r, leading-coefficient
/// essential sup at k = r.
NormProfile measure_norms(const PiecewisePolynomial& p, int r);

struct SweepEntry {
    std::uint64_t seed = 0;   // per-trial derived seed
    int r = 0;
    int trial = 0;
    bool skipped = false;     // all norms zero, inequalities vacuous
    bool monotone_ok = true;
    double min_slack = 0.0;   // relative: (M_k1 - bound) / M_k1, min over pairs
    std::array<int, 2> worst_pair{0, 0};
};

struct SweepReport {
    int r_min = 3;
    int r_max = 3;
    int trials = 0;
    std::uint64_t seed = 0;
    int max_atoms = 3;
    int grid_points = 0;       // membership grid per function
    int sup_grid_points = 0;   // quad_norm dense search per segment
    double slack_tol = 1e-9;
    std::vector<SweepEntry> entries;
    double min_slack = 0.0;                    // over non-skipped entries
    std::vector<std::uint64_t> failing_seeds;  // slack < -slack_tol or bad grid check
};

/// Per-member slack measurement used by the sweep; exposed for tests.
SweepEntry sweep_member(const ClassMember& member);

/// Draws `trials` members for every r in [r_min, r_max] and checks the
/// three-norm inequality over all order pairs k1 < k2 < r.  Deterministic
/// for a fixed seed regardless of thread count.
SweepReport property_sweep(int r_min, int r_max, int trials, std::uint64_t seed,
                           int threads = 1, int max_atoms = 3);

} // namespace kolmo
