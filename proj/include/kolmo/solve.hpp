#pragma once

#include <map>

#include "kolmo/extremal.hpp"

namespace kolmo {

/// Find extremal parameters whose derivative norms at orders (j1, j2, r)
/// match the given targets.
struct SolveRequest {
    int r = 3;
    int j1 = 0;
    int j2 = 1;
    NormProfile targets;   // entries at j1, j2 and r, all > 0
    double tol = 1e-9;     // relative residual / boundary tolerance
};

struct SolveResult {
    ExtremalParams params;
    NormProfile achieved;              // full table 0..r
    std::map<int, double> residuals;   // relative, at j1, j2, r
    long inner_iterations = 0;
    int outer_iterations = 0;
    bool boundary_case = false;        // b = 0 closed form was used
    double bracket_lo = 0.0;           // final outer bracket for b (when bisected)
    double bracket_hi = 0.0;
};

/// Signed slack of the three-norm inequality on the multiply monotone class:
/// M_j1 - ((r-j2)!^((r-j1)/(r-j2)) / (r-j1)!) * M_j2^((r-j1)/(r-j2))
///      * M_r^((j1-j2)/(r-j2)).
/// Nonnegative means the triple is admissible.  Requires 0 <= j1 < j2 < r and
/// positive norms.
double olovyanishnikov_slack(int r, int j1, int j2, double M_j1, double M_j2, double M_r);

/// Closed-form b = 0 solution: l = M_r and a = ((r-j)! * M_j / M_r)^(1/(r-j)),
/// so the norm at order j equals M_j up to rounding.
ExtremalParams solve_b_zero(int r, int j, double M_j, double M_r);

/// For fixed b, finds a > b with norm_table(r, a, b, l)[j2] = M_j2 to 1e-12
/// relative.  The norm is continuous in a, vanishes as a -> b and grows
/// without bound, so a left-anchored doubling bracket followed by bisection
/// always lands on a crossing.  Throws no_convergence_error if the bracket
/// exceeds 2^60 * max(1, b) without crossing.
double solve_inner_a(int r, int j2, double b, double M_j2, double l);

/// Two-level solve: normalizes l = M_r, rescales time so the j2 and r targets
/// become 1, then bisects the outer knot parameter b against the j1 target.
/// Requests whose slack is within tolerance of zero take the b = 0 closed
/// form directly.  Throws infeasible_error when the slack is negative beyond
/// tolerance and no_convergence_error if a bracket cap is hit.
SolveResult solve_outer_b(const SolveRequest& request);

} // namespace kolmo
