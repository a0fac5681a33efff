#pragma once

#include <map>

#include "kolmo/piecewise.hpp"

namespace kolmo {

/// Parameters (r, a, b, l) of the two-knot extremal family: the tent
/// l((t+a)_+ - 2(t+b)_+)_+ and its iterated antiderivatives.
/// Invariants: r >= 1, a > b >= 0, l > 0.
struct ExtremalParams {
    int r = 1;
    double a = 1.0;
    double b = 0.0;
    double l = 1.0;
};

/// Throws std::invalid_argument if the parameter invariants fail.
void validate(const ExtremalParams& params);

/// Map from derivative order k to sup-norm value.
struct NormProfile {
    std::map<int, double> entries;

    double at(int k) const;
    bool contains(int k) const { return entries.count(k) != 0; }
    void set(int k, double v) { entries[k] = v; }
};

/// n!, as a double.
double factorial(int n);

/// The piecewise-linear tent l((t+a)_+ - 2(t+b)_+)_+ restricted to (-inf, 0].
/// Rises on [-a, -b] with slope l, falls with slope -l until it reaches zero
/// (at a-2b when a < 2b, cut off by the origin otherwise).  Knots closer than
/// 1e-14 * max(1, a) to each other or to 0 are merged.
PiecewisePolynomial build_tent(const ExtremalParams& params);

/// The (r-1)-fold antiderivative of the tent; vanishes for t <= -a and has
/// nonnegative derivatives of all orders 0..r-1 on the half-line.
PiecewisePolynomial build_extremal(const ExtremalParams& params);

/// Sup-norms of all derivatives 0..r of the extremal function.  Orders
/// k <= r-2 are nondecreasing functions, so their norm is the value at 0,
/// read off the constructed piecewise polynomial; order r-1 is the tent peak
/// l*(a-b) and order r is l, both stored as those exact expressions.
NormProfile norm_table(const ExtremalParams& params);

/// (r, lambda*a, lambda*b, mu*l).  The norm table of the result equals the
/// original with entry k multiplied by mu * lambda^(r-k).
ExtremalParams scale_params(const ExtremalParams& params, double lambda, double mu);

} // namespace kolmo
