#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace kolmo {

/// A piecewise polynomial on the half-line (-inf, 0].
///
/// The function is described by strictly increasing breakpoints
/// t_0 < t_1 < ... < t_n <= 0, a constant value on the tail (-inf, t_0], and
/// one coefficient list per segment.  Segment i covers [t_i, t_{i+1}] (the
/// final segment ends at 0 when t_n < 0) and stores its polynomial in
/// coordinates local to the left endpoint: sum_j c_j (t - t_i)^j.  Local
/// coordinates keep evaluation stable when |t_i| is large.
///
/// Immutable value type; every operation below is a pure function, so
/// instances can be shared freely between threads.
class PiecewisePolynomial {
public:
    /// Throws std::invalid_argument if the breakpoints are not strictly
    /// increasing and <= 0, or if the segment count does not match them.
    PiecewisePolynomial(std::vector<double> breakpoints,
                        std::vector<std::vector<double>> segments,
                        double left_tail_value);

    static PiecewisePolynomial zero();
    static PiecewisePolynomial constant(double c);

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<std::vector<double>>& segments() const { return segments_; }
    double left_tail_value() const { return left_tail_; }

    std::size_t segment_count() const { return segments_.size(); }

    /// Interval [left, right] covered by segment i.
    std::pair<double, double> segment_interval(std::size_t i) const;

    /// Index of the segment whose interval contains t, or -1 when t <= t_0.
    int segment_index(double t) const;

private:
    std::vector<double> breakpoints_;
    std::vector<std::vector<double>> segments_;
    double left_tail_ = 0.0;
};

/// p(t) for t <= 0; throws std::domain_error for t > 0.  Returns the tail
/// value for t <= t_0; segment lookup is half-open [t_i, t_{i+1}) except the
/// last segment, which is closed at its right end.
double evaluate(const PiecewisePolynomial& p, double t);

/// Segment-wise formal derivative.  The tail becomes 0 and breakpoints are
/// preserved; the result is the a.e. derivative, jumps at breakpoints allowed.
PiecewisePolynomial derivative(const PiecewisePolynomial& p);

/// The antiderivative vanishing on the tail.  Requires left_tail_value == 0
/// (throws std::invalid_argument otherwise); continuous across breakpoints
/// by construction.
PiecewisePolynomial antiderivative(const PiecewisePolynomial& p);

/// sup_{t <= 0} |p(t)|, computed from the segment structure: tail value,
/// segment endpoint values, and interior critical points of each segment.
double sup_norm_halfline(const PiecewisePolynomial& p);

/// Pointwise sum; breakpoint sets are merged (knots closer than
/// 1e-12 * scale collapse).
PiecewisePolynomial add(const PiecewisePolynomial& p, const PiecewisePolynomial& q);

/// factor * p, coefficient-wise.
PiecewisePolynomial scale(const PiecewisePolynomial& p, double factor);

/// p + c as a function (tail and every segment shifted by c).
PiecewisePolynomial add_constant(const PiecewisePolynomial& p, double c);

/// sum_j c_j u^j by Horner's rule.
double poly_eval(const std::vector<double>& coeffs, double u);

/// Coefficients of the same polynomial about a base moved by delta:
/// q(u) = p(u + delta).
std::vector<double> poly_rebase(const std::vector<double>& coeffs, double delta);

/// Real roots of sum_j c_j u^j inside the open interval (lo, hi).  Closed
/// formulas up to cubic; bracketed bisection on a 64-point grid above that.
std::vector<double> poly_roots_in(const std::vector<double>& coeffs, double lo, double hi);

} // namespace kolmo
