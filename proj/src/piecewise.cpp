#include "kolmo/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kolmo {

namespace {

std::vector<double> trim_trailing_zeros(std::vector<double> c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    if (c.empty()) c.push_back(0.0);
    return c;
}

double max_abs_coeff(const std::vector<double>& c) {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

/// Bisect f on [lo, hi] assuming f(lo) and f(hi) have opposite signs.
template <typename F>
double bisect(F&& f, double lo, double hi, double f_lo) {
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;   // interval at one ulp
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void cubic_real_roots(double c0, double c1, double c2, double c3,
                      std::vector<double>& out) {
    // Depressed form: u = y - c2 / (3 c3), y^3 + p y + q = 0.
    const double inv = 1.0 / c3;
    const double a2 = c2 * inv, a1 = c1 * inv, a0 = c0 * inv;
    const double shift = a2 / 3.0;
    const double p = a1 - a2 * a2 / 3.0;
    const double q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    const double disc = 0.25 * q * q + p * p * p / 27.0;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double y = std::cbrt(-0.5 * q + s) + std::cbrt(-0.5 * q - s);
        out.push_back(y - shift);
    } else if (p == 0.0) {
        out.push_back(std::cbrt(-q) - shift);
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
        const double theta = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            out.push_back(m * std::cos((theta - 2.0 * M_PI * k) / 3.0) - shift);
    }
}

} // namespace

PiecewisePolynomial::PiecewisePolynomial(std::vector<double> breakpoints,
                                         std::vector<std::vector<double>> segments,
                                         double left_tail_value)
    : breakpoints_(std::move(breakpoints)),
      segments_(std::move(segments)),
      left_tail_(left_tail_value) {
    if (breakpoints_.empty())
        throw std::invalid_argument("piecewise: need at least one breakpoint");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] < breakpoints_[i + 1]))
            throw std::invalid_argument("piecewise: breakpoints must be strictly increasing");
    if (!(breakpoints_.back() <= 0.0))
        throw std::invalid_argument("piecewise: breakpoints must be <= 0");
    const std::size_t expected =
        breakpoints_.size() - 1 + (breakpoints_.back() < 0.0 ? 1 : 0);
    if (segments_.size() != expected)
        throw std::invalid_argument("piecewise: segment count does not match breakpoints");
    for (auto& seg : segments_) seg = trim_trailing_zeros(std::move(seg));
    if (!std::isfinite(left_tail_))
        throw std::invalid_argument("piecewise: non-finite tail value");
}

PiecewisePolynomial PiecewisePolynomial::zero() { return constant(0.0); }

PiecewisePolynomial PiecewisePolynomial::constant(double c) {
    return PiecewisePolynomial({0.0}, {}, c);
}

std::pair<double, double> PiecewisePolynomial::segment_interval(std::size_t i) const {
    const double left = breakpoints_[i];
    const double right = (i + 1 < breakpoints_.size()) ? breakpoints_[i + 1] : 0.0;
    return {left, right};
}

int PiecewisePolynomial::segment_index(double t) const {
    if (segments_.empty() || t <= breakpoints_.front()) return -1;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    auto idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    if (idx >= segments_.size()) idx = segments_.size() - 1;
    return static_cast<int>(idx);
}

double poly_eval(const std::vector<double>& coeffs, double u) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * u + *it;
    return v;
}

std::vector<double> poly_rebase(const std::vector<double>& coeffs, double delta) {
    // q_k = sum_{i >= k} c_i C(i, k) delta^(i-k)
    const std::size_t n = coeffs.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double binom = 1.0;   // C(i, k), starting at i = k
        double dp = 1.0;      // delta^(i-k)
        double acc = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            acc += coeffs[i] * binom * dp;
            binom *= static_cast<double>(i + 1) / static_cast<double>(i + 1 - k);
            dp *= delta;
        }
        out[k] = acc;
    }
    return out;
}

std::vector<double> poly_roots_in(const std::vector<double>& coeffs, double lo, double hi) {
    std::vector<double> cand;
    const double scale = max_abs_coeff(coeffs);
    if (scale == 0.0) return {};

    // Effective degree for root seeding: drop near-degenerate leading terms.
    std::size_t deg = coeffs.size() - 1;
    while (deg > 0 && std::abs(coeffs[deg]) <= 1e-12 * scale) --deg;

    if (deg == 0) {
        return {};
    } else if (deg == 1) {
        cand.push_back(-coeffs[0] / coeffs[1]);
    } else if (deg == 2) {
        const double a = coeffs[2], b = coeffs[1], c = coeffs[0];
        const double disc = b * b - 4.0 * a * c;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            const double q = -0.5 * (b + std::copysign(s, b));
            cand.push_back(q / a);
            if (q != 0.0)
                cand.push_back(c / q);
            else
                cand.push_back(-b / (2.0 * a));
        }
    } else if (deg == 3) {
        cubic_real_roots(coeffs[0], coeffs[1], coeffs[2], coeffs[3], cand);
    } else {
        // Grid-seeded bisection on sign changes; 64 cells per segment.
        const int cells = 64;
        const double h = (hi - lo) / cells;
        auto f = [&](double u) { return poly_eval(coeffs, u); };
        double x0 = lo, f0 = f(x0);
        for (int i = 1; i <= cells; ++i) {
            const double x1 = (i == cells) ? hi : lo + i * h;
            const double f1 = f(x1);
            if (f0 == 0.0)
                cand.push_back(x0);
            else if (f0 * f1 < 0.0)
                cand.push_back(bisect(f, x0, x1, f0));
            x0 = x1;
            f0 = f1;
        }
        if (f0 == 0.0) cand.push_back(x0);
    }

    std::vector<double> out;
    for (double u : cand)
        if (std::isfinite(u) && u > lo && u < hi) out.push_back(u);
    return out;
}

double evaluate(const PiecewisePolynomial& p, double t) {
    if (t > 0.0) throw std::domain_error("evaluate: t must be <= 0");
    const int idx = p.segment_index(t);
    if (idx < 0) return p.left_tail_value();
    return poly_eval(p.segments()[idx], t - p.breakpoints()[idx]);
}

PiecewisePolynomial derivative(const PiecewisePolynomial& p) {
    std::vector<std::vector<double>> segs;
    segs.reserve(p.segment_count());
    for (const auto& c : p.segments()) {
        if (c.size() <= 1) {
            segs.push_back({0.0});
            continue;
        }
        std::vector<double> d(c.size() - 1);
        for (std::size_t j = 1; j < c.size(); ++j) d[j - 1] = c[j] * static_cast<double>(j);
        segs.push_back(std::move(d));
    }
    return PiecewisePolynomial(p.breakpoints(), std::move(segs), 0.0);
}

PiecewisePolynomial antiderivative(const PiecewisePolynomial& p) {
    if (p.left_tail_value() != 0.0)
        throw std::invalid_argument("antiderivative: left tail must vanish");
    std::vector<std::vector<double>> segs;
    segs.reserve(p.segment_count());
    double acc = 0.0;   // running value at the left end of the current segment
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
        const auto& c = p.segments()[i];
        std::vector<double> ic(c.size() + 1);
        ic[0] = acc;
        for (std::size_t j = 0; j < c.size(); ++j) ic[j + 1] = c[j] / static_cast<double>(j + 1);
        const auto [left, right] = p.segment_interval(i);
        acc = poly_eval(ic, right - left);
        segs.push_back(std::move(ic));
    }
    return PiecewisePolynomial(p.breakpoints(), std::move(segs), 0.0);
}

double sup_norm_halfline(const PiecewisePolynomial& p) {
    double best = std::abs(p.left_tail_value());
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
        const auto& c = p.segments()[i];
        const auto [left, right] = p.segment_interval(i);
        const double len = right - left;
        best = std::max(best, std::abs(poly_eval(c, 0.0)));
        best = std::max(best, std::abs(poly_eval(c, len)));
        if (c.size() <= 2) continue;   // affine pieces peak at their ends
        std::vector<double> dc(c.size() - 1);
        for (std::size_t j = 1; j < c.size(); ++j) dc[j - 1] = c[j] * static_cast<double>(j);
        for (double u : poly_roots_in(dc, 0.0, len))
            best = std::max(best, std::abs(poly_eval(c, u)));
    }
    return best;
}

PiecewisePolynomial add(const PiecewisePolynomial& p, const PiecewisePolynomial& q) {
    std::vector<double> knots;
    knots.reserve(p.breakpoints().size() + q.breakpoints().size());
    knots.insert(knots.end(), p.breakpoints().begin(), p.breakpoints().end());
    knots.insert(knots.end(), q.breakpoints().begin(), q.breakpoints().end());
    std::sort(knots.begin(), knots.end());

    double span = 1.0;
    for (double k : knots) span = std::max(span, std::abs(k));
    const double tol = 1e-12 * span;

    std::vector<double> merged;
    for (double k : knots)
        if (merged.empty() || k - merged.back() > tol) merged.push_back(k);
    if (!merged.empty() && merged.back() > -tol && merged.back() < 0.0) {
        // A knot within tolerance of the origin collapses onto it.
        merged.back() = 0.0;
    }

    auto local_coeffs = [](const PiecewisePolynomial& f, double at, double probe) {
        const int idx = f.segment_index(probe);
        if (idx < 0) return std::vector<double>{f.left_tail_value()};
        return poly_rebase(f.segments()[idx], at - f.breakpoints()[idx]);
    };

    std::vector<std::vector<double>> segs;
    const std::size_t nseg = merged.size() - 1 + (merged.back() < 0.0 ? 1 : 0);
    for (std::size_t i = 0; i < nseg; ++i) {
        const double left = merged[i];
        const double right = (i + 1 < merged.size()) ? merged[i + 1] : 0.0;
        const double probe = 0.5 * (left + right);
        auto cp = local_coeffs(p, left, probe);
        auto cq = local_coeffs(q, left, probe);
        if (cp.size() < cq.size()) std::swap(cp, cq);
        for (std::size_t j = 0; j < cq.size(); ++j) cp[j] += cq[j];
        segs.push_back(std::move(cp));
    }
    return PiecewisePolynomial(std::move(merged), std::move(segs),
                               p.left_tail_value() + q.left_tail_value());
}

PiecewisePolynomial scale(const PiecewisePolynomial& p, double factor) {
    std::vector<std::vector<double>> segs = p.segments();
    for (auto& c : segs)
        for (double& v : c) v *= factor;
    return PiecewisePolynomial(p.breakpoints(), std::move(segs),
                               p.left_tail_value() * factor);
}

PiecewisePolynomial add_constant(const PiecewisePolynomial& p, double c) {
    std::vector<std::vector<double>> segs = p.segments();
    for (auto& coeffs : segs) coeffs[0] += c;
    return PiecewisePolynomial(p.breakpoints(), std::move(segs),
                               p.left_tail_value() + c);
}

} // namespace kolmo
