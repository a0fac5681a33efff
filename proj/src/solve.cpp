#include "kolmo/solve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kolmo/errors.hpp"

namespace kolmo {

namespace {

void check_orders(int r, int j1, int j2) {
    if (!(0 <= j1 && j1 < j2 && j2 < r))
        throw std::invalid_argument("need 0 <= j1 < j2 < r, got j1=" + std::to_string(j1) +
                                    " j2=" + std::to_string(j2) + " r=" + std::to_string(r));
}

void check_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}

struct InnerSolve {
    double a = 0.0;
    long iterations = 0;
};

/// Norm of the j2-th derivative as a function of a, for fixed b and l.
double psi(int r, int j2, double b, double l, double a) {
    return norm_table({r, a, b, l}).at(j2);
}

InnerSolve solve_inner(int r, int j2, double b, double M_j2, double l) {
    check_orders(r, 0, j2);
    if (j2 > r - 2)
        throw std::invalid_argument("solve_inner_a: j2 must be <= r-2");
    check_positive(M_j2, "M_j2");
    check_positive(l, "l");

    InnerSolve out;
    const double unit = std::max(1.0, b);

    // Left anchor just right of b, where the norm is essentially zero.
    double eps = 1e-12 * unit;
    double lo = b + eps;
    double f_lo = psi(r, j2, b, l, lo) - M_j2;
    ++out.iterations;
    while (f_lo >= 0.0) {
        eps *= 0.25;
        if (eps < 1e-280) throw no_convergence_error("solve_inner_a: no left anchor");
        lo = b + eps;
        f_lo = psi(r, j2, b, l, lo) - M_j2;
        ++out.iterations;
    }

    // Double the bracket width until the norm exceeds the target.
    double width = unit;
    const double cap = std::ldexp(unit, 60);
    double hi = b + width;
    double f_hi = psi(r, j2, b, l, hi) - M_j2;
    ++out.iterations;
    while (f_hi < 0.0) {
        lo = hi;
        f_lo = f_hi;
        width *= 2.0;
        if (width > cap)
            throw no_convergence_error("solve_inner_a: bracket cap exceeded");
        hi = b + width;
        f_hi = psi(r, j2, b, l, hi) - M_j2;
        ++out.iterations;
    }

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = psi(r, j2, b, l, mid) - M_j2;
        ++out.iterations;
        if (fm == 0.0) {
            lo = hi = mid;
            break;
        }
        if (fm < 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    out.a = 0.5 * (lo + hi);
    if (out.a <= b) out.a = hi;   // guard against rounding onto the boundary

    const double residual = std::abs(psi(r, j2, b, l, out.a) - M_j2);
    if (residual > 1e-12 * M_j2)
        throw internal_error("solve_inner_a: residual above 1e-12 relative");
    return out;
}

} // namespace

double olovyanishnikov_slack(int r, int j1, int j2, double M_j1, double M_j2, double M_r) {
    check_orders(r, j1, j2);
    check_positive(M_j1, "M_j1");
    check_positive(M_j2, "M_j2");
    check_positive(M_r, "M_r");
    const double e1 = static_cast<double>(r - j1) / static_cast<double>(r - j2);
    const double e2 = static_cast<double>(j1 - j2) / static_cast<double>(r - j2);
    const double bound = std::pow(factorial(r - j2), e1) / factorial(r - j1) *
                         std::pow(M_j2, e1) * std::pow(M_r, e2);
    return M_j1 - bound;
}

ExtremalParams solve_b_zero(int r, int j, double M_j, double M_r) {
    if (!(0 <= j && j < r))
        throw std::invalid_argument("solve_b_zero: need 0 <= j < r");
    check_positive(M_j, "M_j");
    check_positive(M_r, "M_r");
    const double a = std::pow(factorial(r - j) * M_j / M_r, 1.0 / (r - j));
    return {r, a, 0.0, M_r};
}

double solve_inner_a(int r, int j2, double b, double M_j2, double l) {
    if (b < 0.0) throw std::invalid_argument("solve_inner_a: b must be >= 0");
    return solve_inner(r, j2, b, M_j2, l).a;
}

SolveResult solve_outer_b(const SolveRequest& request) {
    const int r = request.r, j1 = request.j1, j2 = request.j2;
    if (r < 3) throw std::invalid_argument("solve_outer_b: r must be >= 3");
    check_orders(r, j1, j2);
    if (j2 > r - 2) throw std::invalid_argument("solve_outer_b: j2 must be <= r-2");
    const double tol = request.tol;
    if (!(tol >= 1e-13)) throw std::invalid_argument("solve_outer_b: tol floor is 1e-13");

    const double M1 = request.targets.at(j1);
    const double M2 = request.targets.at(j2);
    const double Mr = request.targets.at(r);
    check_positive(M1, "target at j1");
    check_positive(M2, "target at j2");
    check_positive(Mr, "target at r");

    const double slack = olovyanishnikov_slack(r, j1, j2, M1, M2, Mr);
    if (slack < -tol * M1)
        throw infeasible_error("solve_outer_b: targets violate the three-norm inequality",
                               slack);

    SolveResult result;
    if (slack <= tol * M1) {
        // Equality boundary: the b = 0 member already matches all three.
        result.params = solve_b_zero(r, j2, M2, Mr);
        result.boundary_case = true;
    } else {
        // Rescale time so the j2 and r targets become 1; keeps a, b of
        // order one and the bisection well conditioned.
        const double lambda = std::pow(Mr / M2, 1.0 / (r - j2));
        const double mu = 1.0 / Mr;
        const double T1 = mu * std::pow(lambda, r - j1) * M1;

        auto eta = [&](double b) {
            const InnerSolve inner = solve_inner(r, j2, b, 1.0, 1.0);
            result.inner_iterations += inner.iterations;
            return norm_table({r, inner.a, b, 1.0}).at(j1);
        };

        double lo = 0.0;
        double hi = 1.0;
        double f_hi = eta(hi) - T1;
        ++result.outer_iterations;
        while (f_hi <= 0.0) {
            lo = hi;
            hi *= 2.0;
            if (hi > std::ldexp(1.0, 60))
                throw no_convergence_error("solve_outer_b: bracket cap exceeded");
            f_hi = eta(hi) - T1;
            ++result.outer_iterations;
        }

        while (hi - lo > 1e-12 * std::max(1.0, hi)) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = eta(mid) - T1;
            ++result.outer_iterations;
            if (fm <= 0.0)
                lo = mid;
            else
                hi = mid;
            if (result.outer_iterations > 400)
                throw no_convergence_error("solve_outer_b: outer bisection stalled");
        }
        const double b_n = 0.5 * (lo + hi);
        const double a_n = solve_inner(r, j2, b_n, 1.0, 1.0).a;
        result.params = {r, a_n / lambda, b_n / lambda, Mr};
        result.bracket_lo = lo / lambda;
        result.bracket_hi = hi / lambda;
    }

    result.achieved = norm_table(result.params);
    for (int k : {j1, j2, r}) {
        const double target = request.targets.at(k);
        result.residuals[k] = std::abs(result.achieved.at(k) - target) / target;
        if (result.residuals[k] > tol)
            throw internal_error("solve_outer_b: residual above tolerance at order " +
                                 std::to_string(k));
    }
    return result;
}

} // namespace kolmo
