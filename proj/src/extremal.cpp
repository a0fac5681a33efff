#include "kolmo/extremal.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace kolmo {

void validate(const ExtremalParams& params) {
    if (params.r < 1)
        throw std::invalid_argument("extremal: r must be >= 1");
    if (!(params.l > 0.0) || !std::isfinite(params.l))
        throw std::invalid_argument("extremal: l must be positive");
    if (!(params.b >= 0.0) || !(params.a > params.b) || !std::isfinite(params.a))
        throw std::invalid_argument("extremal: need a > b >= 0");
}

double NormProfile::at(int k) const {
    auto it = entries.find(k);
    if (it == entries.end())
        throw std::out_of_range("norm profile: no entry at order " + std::to_string(k));
    return it->second;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

PiecewisePolynomial build_tent(const ExtremalParams& params) {
    validate(params);
    const double a = params.a, b = params.b, l = params.l;
    const double merge_tol = 1e-14 * std::max(1.0, a);

    std::vector<double> bp{-a};
    std::vector<std::vector<double>> segs;
    segs.push_back({0.0, l});                       // rising edge on [-a, -b]
    if (b > merge_tol) {
        bp.push_back(-b);
        segs.push_back({l * (a - b), -l});          // falling edge
        const double cut = a - 2.0 * b;             // where the falling edge hits zero
        if (cut < -merge_tol) {
            bp.push_back(cut);
            segs.push_back({0.0});
        }
    }
    return PiecewisePolynomial(std::move(bp), std::move(segs), 0.0);
}

PiecewisePolynomial build_extremal(const ExtremalParams& params) {
    PiecewisePolynomial f = build_tent(params);
    for (int j = 2; j <= params.r; ++j) f = antiderivative(f);
    return f;
}

NormProfile norm_table(const ExtremalParams& params) {
    validate(params);
    NormProfile table;
    table.set(params.r, params.l);
    table.set(params.r - 1, params.l * (params.a - params.b));
    PiecewisePolynomial f = build_tent(params);
    for (int j = 2; j <= params.r; ++j) {
        f = antiderivative(f);
        table.set(params.r - j, evaluate(f, 0.0));
    }
    return table;
}

ExtremalParams scale_params(const ExtremalParams& params, double lambda, double mu) {
    if (!(lambda > 0.0) || !(mu > 0.0))
        throw std::invalid_argument("scale_params: factors must be positive");
    return {params.r, lambda * params.a, lambda * params.b, mu * params.l};
}

} // namespace kolmo
