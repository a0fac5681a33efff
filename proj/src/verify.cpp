#include "kolmo/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "kolmo/errors.hpp"
#include "kolmo/solve.hpp"

namespace kolmo {

namespace {

constexpr int kSupGrid = 10000;          // dense search points per segment
constexpr int kMemberGrid = 1000;        // class-membership grid per function
constexpr double kMemberSlackTol = 1e-10;

// 8-point Gauss-Legendre nodes and weights on [-1, 1]; exact through
// degree 15, which covers the integrands below for r <= 16.
constexpr double kGlNode[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498, 0.1834346424956498, 0.5255324099163290,
    0.7966664774136267, 0.9602898564975363};
constexpr double kGlWeight[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

// --- deterministic sampling helpers (stable across compilers) ---

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t r, std::uint64_t trial) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= 0x100000001b3ULL * (r + 1);
    splitmix64(s);
    s ^= 0x100000001b3ULL * (trial + 1);
    return splitmix64(s);
}

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    double unit() {   // uniform in [0, 1)
        return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    }
    double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int uniform_int(int lo, int hi) {   // inclusive bounds
        return lo + static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

// --- linear reconstruction of p^(r-1), one model per segment ---
//
// Within a segment p is a single polynomial of degree <= r, so its (r-1)-st
// derivative is affine there and an order-(r-1) divided difference over r
// points recovers it exactly at the stencil mean.  Sliding windows over a
// per-segment grid give point estimates; a least-squares line through them
// is the segment model.  The difference table loses roughly
// eps * |p| / h^(r-1) to cancellation, so sampling runs in 128-bit floats
// and every fit carries that noise bound; fits whose bound is not well
// under the global derivative scale are discarded.  Discarded segments are
// rebuilt left to right by continuing the Taylor jet across the knot: the
// (r-1)-st derivative is continuous for functions assembled by iterated
// antidifferentiation, so only the degree-r coefficient can jump, and that
// single jump is recovered by comparing the quadrature of p over the
// segment with the integral of the continued polynomial.

#if defined(__SIZEOF_FLOAT128__)
using qfloat = __float128;
constexpr double kQEps = 1.93e-34;
#else
using qfloat = long double;
constexpr double kQEps = 1.1e-19;
#endif

struct SegmentLine {
    double left = 0.0;
    double right = 0.0;
    double value0 = 0.0;   // value at `left`
    double slope = 0.0;
    double at(double t) const { return value0 + slope * (t - left); }
};

qfloat qabs(qfloat x) { return x < 0 ? -x : x; }

/// p(t) sampled with extended precision; own Horner, shared breakpoint lookup.
qfloat eval_q(const PiecewisePolynomial& p, double t) {
    const int idx = p.segment_index(t);
    if (idx < 0) return p.left_tail_value();
    const auto& c = p.segments()[idx];
    const qfloat u = static_cast<qfloat>(t) - static_cast<qfloat>(p.breakpoints()[idx]);
    qfloat v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * u + static_cast<qfloat>(*it);
    return v;
}

struct SegmentFit {
    bool fitted = false;
    double noise = 0.0;         // cancellation bound for the estimates
    double value_scale = 0.0;   // |model| at the segment ends
    std::vector<double> xs;     // kept for the jet pass
    std::vector<qfloat> ys;
};

/// Newton-form interpolant of the samples, truncated to degree r, as power
/// coefficients about `left`.
std::vector<qfloat> jet_from_samples(const std::vector<double>& xs,
                                     const std::vector<qfloat>& ys, double left, int r) {
    const std::size_t n = xs.size();
    std::vector<qfloat> dd(ys);
    std::vector<qfloat> newton(n);
    newton[0] = dd[0];
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i)
            dd[i] = (dd[i + 1] - dd[i]) /
                    (static_cast<qfloat>(xs[i + level]) - static_cast<qfloat>(xs[i]));
        newton[level] = dd[0];
    }
    std::vector<qfloat> coeffs{newton[n - 1]};
    for (std::size_t j = n - 1; j-- > 0;) {
        const qfloat node = static_cast<qfloat>(xs[j]) - static_cast<qfloat>(left);
        coeffs.insert(coeffs.begin(), qfloat(0));
        for (std::size_t k = 0; k + 1 < coeffs.size(); ++k)
            coeffs[k] = coeffs[k] - node * coeffs[k + 1];
        coeffs[0] = coeffs[0] + newton[j];
    }
    coeffs.resize(static_cast<std::size_t>(r) + 1, qfloat(0));
    return coeffs;
}

void jet_shift(std::vector<qfloat>& jet, qfloat delta) {
    const std::size_t n = jet.size();
    std::vector<qfloat> out(n, qfloat(0));
    for (std::size_t k = 0; k < n; ++k) {
        qfloat binom = 1;
        qfloat dp = 1;
        qfloat acc = 0;
        for (std::size_t i = k; i < n; ++i) {
            acc = acc + jet[i] * binom * dp;
            binom = binom * static_cast<qfloat>(static_cast<double>(i + 1)) /
                    static_cast<qfloat>(static_cast<double>(i + 1 - k));
            dp = dp * delta;
        }
        out[k] = acc;
    }
    jet = std::move(out);
}

std::vector<SegmentLine> high_deriv_model(const PiecewisePolynomial& p, int r) {
    const std::size_t nseg = p.segment_count();
    std::vector<SegmentLine> model(nseg);
    std::vector<SegmentFit> fit(nseg);

    const double span = std::max(-p.breakpoints().front(), 1e-12);
    const double degenerate = 1e-12 * span;
    const qfloat fact_r1 = static_cast<qfloat>(factorial(r - 1));
    const int samples = std::max(r + 3, 12);

    for (std::size_t s = 0; s < nseg; ++s) {
        const auto [left, right] = p.segment_interval(s);
        model[s].left = left;
        model[s].right = right;
        const double len = right - left;
        if (len < degenerate) continue;

        auto& f = fit[s];
        f.xs.resize(samples);
        f.ys.resize(samples);
        double y_scale = 0.0;
        for (int i = 0; i < samples; ++i) {
            f.xs[i] = left + len * i / (samples - 1);
            if (f.xs[i] > 0.0) f.xs[i] = 0.0;
            f.ys[i] = eval_q(p, f.xs[i]);
            y_scale = std::max(y_scale, static_cast<double>(qabs(f.ys[i])));
        }

        const std::size_t window = static_cast<std::size_t>(r);
        const std::size_t count = samples - window + 1;
        std::vector<qfloat> mx(count), my(count), dd(window);
        for (std::size_t i = 0; i < count; ++i) {
            qfloat mean = 0;
            for (std::size_t j = 0; j < window; ++j) {
                mean = mean + static_cast<qfloat>(f.xs[i + j]);
                dd[j] = f.ys[i + j];
            }
            for (std::size_t level = 1; level < window; ++level)
                for (std::size_t j = 0; j + level < window; ++j)
                    dd[j] = (dd[j + 1] - dd[j]) / (static_cast<qfloat>(f.xs[i + j + level]) -
                                                   static_cast<qfloat>(f.xs[i + j]));
            mx[i] = mean / static_cast<qfloat>(static_cast<double>(window));
            my[i] = fact_r1 * dd[0];
        }

        qfloat xbar = 0, ybar = 0;
        for (std::size_t i = 0; i < count; ++i) {
            xbar = xbar + mx[i];
            ybar = ybar + my[i];
        }
        xbar = xbar / static_cast<qfloat>(static_cast<double>(count));
        ybar = ybar / static_cast<qfloat>(static_cast<double>(count));
        qfloat sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < count; ++i) {
            sxx = sxx + (mx[i] - xbar) * (mx[i] - xbar);
            sxy = sxy + (mx[i] - xbar) * (my[i] - ybar);
        }
        const qfloat slope = sxx > 0 ? sxy / sxx : qfloat(0);
        model[s].slope = static_cast<double>(slope);
        model[s].value0 =
            static_cast<double>(ybar + slope * (static_cast<qfloat>(left) - xbar));

        const double h = len / (samples - 1);
        f.noise = y_scale > 0.0
                      ? std::exp(std::log(kQEps * y_scale) +
                                 (r - 1) * (std::log(2.0) - std::log(h)))
                      : 0.0;
        f.value_scale = std::max(std::abs(model[s].value0),
                                 std::abs(model[s].at(right)));
        f.fitted = true;
    }

    // Global derivative scale from self-consistent fits, then the trust cut.
    double d_scale = 0.0;
    for (std::size_t s = 0; s < nseg; ++s)
        if (fit[s].fitted && fit[s].noise <= 1e-3 * fit[s].value_scale)
            d_scale = std::max(d_scale, fit[s].value_scale);
    if (d_scale == 0.0)
        for (std::size_t s = 0; s < nseg; ++s)
            if (fit[s].fitted) d_scale = std::max(d_scale, fit[s].value_scale);

    std::vector<bool> trusted(nseg, false);
    double slope_scale = d_scale / span;
    for (std::size_t s = 0; s < nseg; ++s) {
        trusted[s] = fit[s].fitted && fit[s].noise <= 1e-7 * d_scale;
        if (trusted[s]) slope_scale = std::max(slope_scale, std::abs(model[s].slope));
    }

    // Left-to-right jet pass rebuilds the untrusted segments.
    std::vector<qfloat> jet(static_cast<std::size_t>(r) + 1, qfloat(0));
    jet[0] = static_cast<qfloat>(p.left_tail_value());
    const qfloat fact_r = fact_r1 * static_cast<qfloat>(static_cast<double>(r));
    for (std::size_t s = 0; s < nseg; ++s) {
        const double len = model[s].right - model[s].left;
        if (trusted[s]) {
            jet = jet_from_samples(fit[s].xs, fit[s].ys, model[s].left, r);
            jet_shift(jet, static_cast<qfloat>(len));
            continue;
        }
        qfloat delta = 0;
        if (len >= degenerate) {
            // Jump of the degree-r coefficient across the left knot, from
            // the quadrature of p against the continued polynomial.
            qfloat p_int = 0;
            for (int n = 0; n < 8; ++n) {
                double t = model[s].left + 0.5 * len * (kGlNode[n] + 1.0);
                if (t > 0.0) t = 0.0;
                p_int = p_int + static_cast<qfloat>(kGlWeight[n]) * eval_q(p, t);
            }
            p_int = p_int * static_cast<qfloat>(0.5 * len);
            qfloat q_int = 0;
            qfloat upow = static_cast<qfloat>(len);
            for (std::size_t j = 0; j < jet.size(); ++j) {
                q_int = q_int + jet[j] * upow / static_cast<qfloat>(static_cast<double>(j + 1));
                upow = upow * static_cast<qfloat>(len);
            }
            qfloat lpow = 1;   // len^(r+1)
            for (int i = 0; i <= r; ++i) lpow = lpow * static_cast<qfloat>(len);
            const qfloat fact_rp1 = fact_r * static_cast<qfloat>(static_cast<double>(r + 1));
            double y_scale = 0.0;
            for (int n = 0; n <= 4; ++n)
                y_scale = std::max(y_scale, static_cast<double>(qabs(eval_q(
                                                p, std::min(0.0, model[s].left + 0.25 * n * len)))));
            const double delta_noise =
                y_scale > 0.0 ? std::exp(std::log(kQEps * y_scale) +
                                         std::log(static_cast<double>(fact_rp1)) -
                                         r * std::log(len))
                              : 0.0;
            if (delta_noise <= 0.5 * std::max(slope_scale, 1e-300))
                delta = (p_int - q_int) * fact_rp1 / lpow;
        }
        model[s].value0 = static_cast<double>(fact_r1 * jet[r - 1]);
        model[s].slope = static_cast<double>(fact_r * jet[r] + delta);
        jet[static_cast<std::size_t>(r)] = jet[static_cast<std::size_t>(r)] + delta / fact_r;
        jet_shift(jet, static_cast<qfloat>(len));
    }
    return model;
}

} // namespace

double quad_norm(const PiecewisePolynomial& p, int k, int r) {
    if (r < 1 || k < 0 || k > r)
        throw std::invalid_argument("quad_norm: need 0 <= k <= r and r >= 1");
    if (p.segment_count() == 0)
        return k == 0 ? std::abs(p.left_tail_value()) : 0.0;

    const auto model = high_deriv_model(p, r);

    if (k == r) {
        double best = 0.0;
        for (const auto& line : model) best = std::max(best, std::abs(line.slope));
        return best;
    }

    if (k == r - 1) {
        double best = 0.0;
        for (const auto& line : model) {
            const double len = line.right - line.left;
            for (int i = 0; i <= kSupGrid; ++i)
                best = std::max(best, std::abs(line.at(line.left + len * i / kSupGrid)));
        }
        return best;
    }

    // Rebuild p^(k) by marching iterated integrals of the reconstructed
    // (r-1)-st derivative from the left support edge, where every
    // derivative vanishes.  Step update: Taylor part in the carried values
    // plus a Gauss-Legendre integral of d(s) (T+h-s)^(j-1)/(j-1)! over the
    // step, which is exact for the affine models.
    const int m = r - 1 - k;
    const double tail = p.left_tail_value();
    double best = (k == 0) ? std::abs(tail) : 0.0;

    std::vector<double> v(m + 1, 0.0), vnext(m + 1, 0.0), kernel(m + 1, 0.0);
    std::vector<double> inv_fact(m + 1, 1.0);   // inv_fact[j] = 1/(j-1)!
    for (int j = 1; j <= m; ++j) inv_fact[j] = 1.0 / factorial(j - 1);

    for (const auto& line : model) {
        const double len = line.right - line.left;
        const double h = len / kSupGrid;
        std::vector<double> hpow(m + 1, 1.0);
        for (int i = 1; i <= m; ++i) hpow[i] = hpow[i - 1] * h / i;
        for (int step = 0; step < kSupGrid; ++step) {
            const double T = line.left + step * h;
            std::fill(kernel.begin(), kernel.end(), 0.0);
            for (int n = 0; n < 8; ++n) {
                const double s = T + 0.5 * h * (kGlNode[n] + 1.0);
                const double base = (T + h) - s;
                double pw = kGlWeight[n] * line.at(s);
                for (int j = 1; j <= m; ++j) {
                    kernel[j] += pw;
                    pw *= base;
                }
            }
            for (int j = m; j >= 1; --j) {
                double acc = 0.5 * h * kernel[j] * inv_fact[j];
                for (int i = 0; i < j; ++i) acc += v[j - i] * hpow[i];
                vnext[j] = acc;
            }
            std::swap(v, vnext);
            const double value = v[m] + (k == 0 ? tail : 0.0);
            best = std::max(best, std::abs(value));
        }
    }
    return best;
}

double min_derivative_slack(const PiecewisePolynomial& p, int max_order, int grid_points) {
    PiecewisePolynomial d = p;
    double worst = std::numeric_limits<double>::infinity();
    const double t0 = p.breakpoints().front();
    for (int k = 0; k <= max_order; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int i = 0; i <= grid_points; ++i) {
            const double t = t0 * (1.0 - static_cast<double>(i) / grid_points);
            const double val = evaluate(d, t);
            lo = std::min(lo, val);
            hi = std::max(hi, std::abs(val));
        }
        lo = std::min(lo, d.left_tail_value());
        worst = std::min(worst, lo / std::max(1.0, hi));
        if (k < max_order) d = derivative(d);
    }
    return worst;
}

ClassMember make_member(int r, std::vector<Atom> atoms, double offset) {
    if (r < 2) throw std::invalid_argument("class member: r must be >= 2");
    if (offset < 0.0) throw std::invalid_argument("class member: offset must be >= 0");
    ClassMember member;
    member.r = r;
    member.atoms = std::move(atoms);
    member.offset = offset;
    PiecewisePolynomial sum = PiecewisePolynomial::constant(offset);
    for (const Atom& atom : member.atoms) {
        if (atom.params.r != r)
            throw std::invalid_argument("class member: atom order mismatch");
        sum = add(sum, build_extremal(atom.params));
    }
    member.realized = std::move(sum);
    if (member.realized.segment_count() > 0 &&
        min_derivative_slack(member.realized, r - 1, kMemberGrid) < -kMemberSlackTol)
        throw internal_error("class member: membership grid check failed");
    return member;
}

ClassMember random_member(int r, int max_atoms, std::uint64_t seed) {
    if (max_atoms < 1) throw std::invalid_argument("random_member: max_atoms must be >= 1");
    Rng rng(seed);
    const int count = rng.uniform_int(1, max_atoms);
    std::vector<Atom> atoms;
    atoms.reserve(count);
    for (int i = 0; i < count; ++i) {
        Atom atom;
        if (rng.unit() < 0.5) {
            atom.kind = Atom::Kind::extremal;
            const double a = rng.log_uniform(0.1, 10.0);
            atom.params = {r, a, rng.uniform(0.0, 0.9 * a), rng.log_uniform(0.1, 10.0)};
        } else {
            atom.kind = Atom::Kind::truncated_power;
            atom.params = {r, rng.log_uniform(0.1, 10.0), 0.0, rng.log_uniform(0.1, 10.0)};
        }
        atoms.push_back(atom);
    }
    return make_member(r, std::move(atoms), rng.uniform(0.0, 10.0));
}

NormProfile measure_member_profile(const PiecewisePolynomial& p, int r, bool* monotone_ok) {
    NormProfile profile;
    if (monotone_ok) *monotone_ok = true;
    PiecewisePolynomial d = p;
    const double t0 = p.breakpoints().front();
    for (int k = 0; k <= r - 2; ++k) {
        profile.set(k, evaluate(d, 0.0));
        double prev = -std::numeric_limits<double>::infinity();
        double scale = 1.0;
        bool ok = true;
        for (int i = 0; i <= kMemberGrid; ++i) {
            const double t = t0 * (1.0 - static_cast<double>(i) / kMemberGrid);
            const double val = evaluate(d, t);
            scale = std::max(scale, std::abs(val));
            if (val < prev - 1e-12 * scale) ok = false;
            prev = val;
        }
        if (!ok && monotone_ok) *monotone_ok = false;
        d = derivative(d);
    }
    profile.set(r - 1, sup_norm_halfline(d));
    double top = 0.0;
    for (const auto& seg : p.segments())
        if (seg.size() > static_cast<std::size_t>(r))
            top = std::max(top, std::abs(seg[r]) * factorial(r));
    profile.set(r, top);
    return profile;
}

NormProfile measure_norms(const PiecewisePolynomial& p, int r) {
    NormProfile profile;
    PiecewisePolynomial d = p;
    for (int k = 0; k < r; ++k) {
        profile.set(k, sup_norm_halfline(d));
        d = derivative(d);
    }
    double top = 0.0;
    for (const auto& seg : p.segments())
        if (seg.size() > static_cast<std::size_t>(r))
            top = std::max(top, std::abs(seg[r]) * factorial(r));
    profile.set(r, top);
    return profile;
}

SweepEntry sweep_member(const ClassMember& member) {
    SweepEntry entry;
    entry.r = member.r;
    const NormProfile profile =
        measure_member_profile(member.realized, member.r, &entry.monotone_ok);

    entry.min_slack = std::numeric_limits<double>::infinity();
    entry.skipped = true;
    const double M_r = profile.at(member.r);
    for (int k2 = 1; k2 < member.r; ++k2) {
        const double M2 = profile.at(k2);
        if (!(M2 > 0.0) || !(M_r > 0.0)) continue;   // vacuous pair
        for (int k1 = 0; k1 < k2; ++k1) {
            const double M1 = profile.at(k1);
            if (!(M1 > 0.0)) continue;
            const double rel =
                olovyanishnikov_slack(member.r, k1, k2, M1, M2, M_r) / M1;
            if (rel < entry.min_slack) {
                entry.min_slack = rel;
                entry.worst_pair = {k1, k2};
            }
            entry.skipped = false;
        }
    }
    if (entry.skipped) entry.min_slack = 0.0;
    return entry;
}

SweepReport property_sweep(int r_min, int r_max, int trials, std::uint64_t seed,
                           int threads, int max_atoms) {
    if (trials < 1) throw std::invalid_argument("property_sweep: trials must be >= 1");
    if (r_min < 2 || r_max < r_min)
        throw std::invalid_argument("property_sweep: bad r range");

    SweepReport report;
    report.r_min = r_min;
    report.r_max = r_max;
    report.trials = trials;
    report.seed = seed;
    report.max_atoms = max_atoms;
    report.grid_points = kMemberGrid;
    report.sup_grid_points = kSupGrid;
    report.slack_tol = 1e-9;

    const int r_count = r_max - r_min + 1;
    report.entries.resize(static_cast<std::size_t>(r_count) * trials);

    auto run_one = [&](std::size_t job) {
        const int r = r_min + static_cast<int>(job) / trials;
        const int trial = static_cast<int>(job) % trials;
        const std::uint64_t trial_seed = mix_seed(seed, r, trial);
        SweepEntry entry = sweep_member(random_member(r, max_atoms, trial_seed));
        entry.seed = trial_seed;
        entry.trial = trial;
        report.entries[job] = entry;
    };

    const std::size_t jobs = report.entries.size();
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t j = 0; j < jobs; ++j) run_one(j);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1))
                    run_one(j);
            });
        for (auto& th : pool) th.join();
    }

    report.min_slack = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& entry : report.entries) {
        if (!entry.monotone_ok || (!entry.skipped && entry.min_slack < -report.slack_tol))
            report.failing_seeds.push_back(entry.seed);
        if (!entry.skipped) {
            report.min_slack = std::min(report.min_slack, entry.min_slack);
            any = true;
        }
    }
    if (!any) report.min_slack = 0.0;
    return report;
}

} // namespace kolmo
