#pragma once

#include <optional>
#include <utility>

#include "kolmo/piecewise.hpp"
#include "kolmo/solve.hpp"

namespace kolmo {

constexpr double kDefaultTol = 1e-9;

/// The four-norm problem: do the positive targets at orders
/// 0 = k1 < k2 < k3 <= r-2, k4 = r arise as derivative sup-norms of an
/// (r-1)-monotone function on the half-line?
struct FourNormProblem {
    int r = 4;
    int k2 = 1;
    int k3 = 2;
    NormProfile targets;   // entries at 0, k2, k3 and r
};

/// Throws std::invalid_argument if the order chain or positivity fails.
void validate(const FourNormProblem& problem);

/// Outcome of the feasibility decision.  Infeasible is a value, not an
/// error; both inequality slacks are reported so callers can see which
/// condition failed and by how much.  phi_norm, slack_outer and params are
/// unset when the inner inequality already fails (the matched spline is
/// never built in that case).
struct FeasibilityReport {
    bool feasible = false;
    double slack_inner = 0.0;                   // M_k2 minus the three-norm bound
    std::optional<double> phi_norm;             // sup-norm of the matched spline
    std::optional<double> slack_outer;          // M_0 - phi_norm
    std::optional<ExtremalParams> params;
};

/// A function achieving all four norms: the matched spline plus a constant.
struct Witness {
    ExtremalParams params;
    PiecewisePolynomial spline = PiecewisePolynomial::zero();
    double shift = 0.0;       // M_0 - phi_norm, >= 0
    NormProfile achieved;     // all orders 0..r

    /// The witness as a single piecewise polynomial (spline + shift).
    PiecewisePolynomial as_piecewise() const;
};

/// Extremal member whose derivative norms at orders (k2, k3, r) equal the
/// given targets.  Requires the triple to satisfy the three-norm inequality
/// with slack >= -tol * M_k2; throws infeasible_error otherwise.
std::pair<ExtremalParams, PiecewisePolynomial>
build_matched_extremal(int r, int k2, int k3, double M_k2, double M_k3, double M_r,
                       double tol = kDefaultTol);

/// The feasibility decision.  Checks the three-norm inequality on
/// (M_k2, M_k3, M_r) first; when it holds, builds the matched spline and
/// compares M_0 against its sup-norm.  Solver non-convergence propagates as
/// an exception, distinct from an infeasible verdict.
FeasibilityReport decide(const FourNormProblem& problem, double tol = kDefaultTol);

/// Witness construction for a feasible problem: spline + (M_0 - phi_norm).
/// The achieved profile keeps the solved norms at orders >= 1 (the constant
/// vanishes under differentiation) and M_0 at order 0.  Asserts the four
/// achieved values match the targets to 1e-8 relative (internal_error
/// otherwise); throws infeasible_error when the report says infeasible.
Witness synthesize(const FourNormProblem& problem, const FeasibilityReport& report,
                   double tol = kDefaultTol);
Witness synthesize(const FourNormProblem& problem, double tol = kDefaultTol);

/// olovyanishnikov_slack on entries of an arbitrary measured profile.
double three_norm_slack(int r, int k1, int k2, const NormProfile& profile);

} // namespace kolmo
