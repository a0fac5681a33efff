#include "kolmo/feasibility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kolmo/errors.hpp"

namespace kolmo {

void validate(const FourNormProblem& problem) {
    if (problem.r < 4)
        throw std::invalid_argument("four-norm problem: r must be >= 4");
    if (!(0 < problem.k2 && problem.k2 < problem.k3 && problem.k3 <= problem.r - 2))
        throw std::invalid_argument("four-norm problem: need 0 < k2 < k3 <= r-2");
    for (int k : {0, problem.k2, problem.k3, problem.r}) {
        const double v = problem.targets.at(k);
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("four-norm problem: target at order " +
                                        std::to_string(k) + " must be positive");
    }
}

PiecewisePolynomial Witness::as_piecewise() const {
    return add_constant(spline, shift);
}

std::pair<ExtremalParams, PiecewisePolynomial>
build_matched_extremal(int r, int k2, int k3, double M_k2, double M_k3, double M_r,
                       double tol) {
    SolveRequest request;
    request.r = r;
    request.j1 = k2;
    request.j2 = k3;
    request.targets.set(k2, M_k2);
    request.targets.set(k3, M_k3);
    request.targets.set(r, M_r);
    request.tol = tol;
    const SolveResult result = solve_outer_b(request);
    return {result.params, build_extremal(result.params)};
}

FeasibilityReport decide(const FourNormProblem& problem, double tol) {
    validate(problem);
    const double M0 = problem.targets.at(0);
    const double M2 = problem.targets.at(problem.k2);
    const double M3 = problem.targets.at(problem.k3);
    const double Mr = problem.targets.at(problem.r);

    FeasibilityReport report;
    report.slack_inner = olovyanishnikov_slack(problem.r, problem.k2, problem.k3, M2, M3, Mr);
    if (report.slack_inner < -tol * M2) {
        report.feasible = false;
        return report;
    }

    SolveRequest request;
    request.r = problem.r;
    request.j1 = problem.k2;
    request.j2 = problem.k3;
    request.targets.set(problem.k2, M2);
    request.targets.set(problem.k3, M3);
    request.targets.set(problem.r, Mr);
    request.tol = tol;
    const SolveResult result = solve_outer_b(request);

    report.params = result.params;
    report.phi_norm = result.achieved.at(0);
    report.slack_outer = M0 - *report.phi_norm;
    report.feasible = *report.slack_outer >= -tol * *report.phi_norm;
    return report;
}

Witness synthesize(const FourNormProblem& problem, const FeasibilityReport& report,
                   double tol) {
    if (!report.feasible)
        throw infeasible_error("synthesize: problem is infeasible",
                               report.slack_outer ? *report.slack_outer : report.slack_inner);
    if (!report.params || !report.phi_norm)
        throw internal_error("synthesize: feasible report lacks solved parameters");
    (void)tol;

    Witness w;
    w.params = *report.params;
    w.spline = build_extremal(w.params);
    const double M0 = problem.targets.at(0);
    w.shift = std::max(0.0, M0 - *report.phi_norm);
    w.achieved = norm_table(w.params);
    w.achieved.set(0, *report.phi_norm + w.shift);

    for (int k : {0, problem.k2, problem.k3, problem.r}) {
        const double target = problem.targets.at(k);
        if (std::abs(w.achieved.at(k) - target) > 1e-8 * target)
            throw internal_error("synthesize: achieved norm misses target at order " +
                                 std::to_string(k));
    }
    return w;
}

Witness synthesize(const FourNormProblem& problem, double tol) {
    return synthesize(problem, decide(problem, tol), tol);
}

double three_norm_slack(int r, int k1, int k2, const NormProfile& profile) {
    return olovyanishnikov_slack(r, k1, k2, profile.at(k1), profile.at(k2), profile.at(r));
}

} // namespace kolmo
