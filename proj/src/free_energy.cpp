#include "ssk/free_energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssk/stats.hpp"

namespace ssk {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// Integrand of the vertical-line integral, anchored at a real point a with
// x_i = a - lambda_i > 0:
//   exp[(n/2)(G(a+it) - G(a))] = exp(env(t)) * exp(i theta(t)),
//   env(t)   = -(1/4) sum log1p(t^2/x_i^2)        (exactly <= 0, decreasing)
//   theta(t) = (n/2) beta t - (1/2) sum atan(t/x_i).
struct LineIntegrand {
    std::vector<double> x;
    double beta = 0.0;
    int n = 0;
    mutable long evals = 0;

    double envelope_log(double t) const {
        CompensatedSum acc;
        for (double xi : x) {
            const double r = t / xi;
            acc.add(std::log1p(r * r));
        }
        return -0.25 * acc.value();
    }

    struct Point {
        double h;     // Re exp(...) = exp(env) cos(theta)
        double env;
        double theta;
    };

    Point eval(double t) const {
        ++evals;
        CompensatedSum le, th;
        for (double xi : x) {
            const double r = t / xi;
            le.add(std::log1p(r * r));
            th.add(std::atan(r));
        }
        const double env = -0.25 * le.value();
        const double theta = 0.5 * (beta * n * t - th.value());
        return {std::exp(env) * std::cos(theta), env, theta};
    }

    double x_max() const { return x.back(); } // builder sorts x ascending
};

LineIntegrand make_integrand(const Spectrum& s, double beta, double anchor_gap_above_top) {
    // x_i = (a - lambda_1) + (lambda_1 - lambda_i); the first term is carried
    // exactly by the saddle solver, so no cancellation enters the small gaps.
    LineIntegrand f;
    f.n = s.n;
    f.beta = beta;
    f.x.resize(s.n);
    const double lambda1 = s.eigenvalues.front();
    for (int i = 0; i < s.n; ++i)
        f.x[i] = anchor_gap_above_top + (lambda1 - s.eigenvalues[i]);
    std::sort(f.x.begin(), f.x.end());
    if (f.x.front() <= 0.0)
        throw std::invalid_argument("contour integral: line must sit right of the spectrum");
    return f;
}

struct QuadAccumulator {
    double integral = 0.0;
    double error = 0.0;
};

struct QuadShared {
    const LineIntegrand* f;
    long max_evals;
    int max_depth;
};

// Certified bound on |int_T^inf exp(env) e^{i theta} dt|: one integration by
// parts against the e^{i n beta t / 2} factor gives <= 2 |f(T)| / beta once
// T >= x_max and n >= 4; the constant keeps slack.
double oscillatory_tail_bound(double env_at_t, double beta) {
    return 5.0 * std::exp(env_at_t) / beta;
}

void refine(const QuadShared& q, double a, double b, const LineIntegrand::Point& fa,
            const LineIntegrand::Point& fm, const LineIntegrand::Point& fb, double simpson,
            double tol, int depth, QuadAccumulator& acc) {
    // Oscillation-certified rejection: past the spectrum the whole remaining
    // axis from a is bounded by parts, so a panel whose bound is below its
    // error share contributes nothing but the bound.
    if (a >= q.f->x_max()) {
        const double bound = 2.0 * oscillatory_tail_bound(fa.env, q.f->beta);
        if (bound <= tol) {
            acc.error += bound;
            return;
        }
    }
    if (q.f->evals > q.max_evals)
        throw std::runtime_error("contour integral: evaluation cap exceeded");

    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const LineIntegrand::Point fl = q.f->eval(lm);
    const LineIntegrand::Point fr = q.f->eval(rm);
    const double sl = (m - a) / 6.0 * (fa.h + 4.0 * fl.h + fm.h);
    const double sr = (b - m) / 6.0 * (fm.h + 4.0 * fr.h + fb.h);
    const double err = std::fabs(sl + sr - simpson) / 15.0;

    // Simpson's error estimate is only honest when the panel resolves the
    // phase and the envelope; gate on both half-panels.
    const bool resolved = std::fabs(fm.theta - fa.theta) <= 1.2 &&
                          std::fabs(fb.theta - fm.theta) <= 1.2 &&
                          std::fabs(fm.env - fa.env) <= 1.0 &&
                          std::fabs(fb.env - fm.env) <= 1.0;
    if ((resolved && err <= tol) || depth >= q.max_depth) {
        acc.integral += sl + sr + (sl + sr - simpson) / 15.0;
        acc.error += err;
        return;
    }
    refine(q, a, m, fa, fl, fm, sl, 0.5 * tol, depth + 1, acc);
    refine(q, m, b, fm, fr, fb, sr, 0.5 * tol, depth + 1, acc);
}

// Tail of the vertical-line integral from t = t0, taken along the rotated ray
// t = t0 + i s.  There the phase factor exp(i n beta t / 2) turns into pure
// exponential decay exp(-n beta s / 2) and nothing oscillates, so a smooth
// adaptive Simpson in s converges in a handful of points.  Valid whenever the
// ray stays off the spectrum, i.e. t0 > 0 (the rotated points are
// z = a - s + i t0).  For t0 >= x_max the product factor has modulus <= 1,
// giving the exp(-omega s)/omega remainder bound.
struct RotatedTail {
    const LineIntegrand* f;
    double t0;
    double omega; // n beta / 2

    double integrand(double s) const {
        ++f->evals;
        CompensatedSum re, im;
        for (double xi : f->x) {
            const double u = xi - s;
            re.add(std::log((u * u + t0 * t0) / (xi * xi)));
            im.add(std::atan2(t0, u));
        }
        const double ex = -omega * s - 0.25 * re.value();
        const double ph = omega * t0 - 0.5 * im.value();
        // Re[i exp(ex + i ph)]
        return -std::exp(ex) * std::sin(ph);
    }

    void simpson(double a, double b, double fa, double fm, double fb, double whole, double tol,
                 int depth, QuadAccumulator& acc) const {
        const double m = 0.5 * (a + b);
        const double fl = integrand(0.5 * (a + m));
        const double fr = integrand(0.5 * (m + b));
        const double sl = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
        const double sr = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
        const double err = std::fabs(sl + sr - whole) / 15.0;
        if (err <= tol || depth >= 48) {
            acc.integral += sl + sr + (sl + sr - whole) / 15.0;
            acc.error += err;
            return;
        }
        simpson(a, m, fa, fl, fm, sl, 0.5 * tol, depth + 1, acc);
        simpson(m, b, fm, fr, fb, sr, 0.5 * tol, depth + 1, acc);
    }

    struct Result {
        double value;
        double quad_error;
        double remainder; // certified bound on the part beyond s_end
    };

    // integral of Re[i F(t0 + i s)] over s in [0, s_end].
    Result integrate(double s_end, double tol) const {
        QuadAccumulator acc;
        const double fa = integrand(0.0);
        const double fm = integrand(0.5 * s_end);
        const double fb = integrand(s_end);
        const double whole = s_end / 6.0 * (fa + 4.0 * fm + fb);
        simpson(0.0, s_end, fa, fm, fb, whole, tol, 0, acc);
        return {acc.integral, acc.error, std::exp(-omega * s_end) / omega};
    }
};

struct LineQuadResult {
    double integral = 0.0; // int_0^infinity Re exp[(n/2)(G(a+it)-G(a))] dt
    QuadratureDiagnostics diag;
};

LineQuadResult integrate_line(const LineIntegrand& f, double budget) {
    const int n = f.n;
    if (n < 4)
        throw std::invalid_argument("contour integral: need n >= 4");

    QuadShared q{&f, 8L * 1000L * 1000L, 60};
    const double omega = 0.5 * f.beta * n;

    // Natural width of the saddle bump.
    double g2 = 0.0;
    for (double xi : f.x) g2 += 1.0 / (xi * xi);
    g2 /= n;
    const double h0 = std::min(0.1, 1.0 / std::sqrt(n * g2));

    double estimate = 1.7724538509055160273 * h0; // sqrt(pi) h0: Gaussian seed

    LineQuadResult out;
    for (int attempt = 0; attempt < 4; ++attempt) {
        f.evals = 0;

        // Point where the plain envelope bound alone certifies the tail.
        double t_dead = std::max(h0, f.x_max());
        int doublings = 0;
        while (oscillatory_tail_bound(f.envelope_log(t_dead), f.beta) >
               0.02 * budget * estimate) {
            t_dead *= 2.0;
            if (++doublings > 600)
                throw std::runtime_error("contour integral: truncation search failed");
        }

        // When the envelope dies long after the spectrum scale (small n), cut
        // the real-axis part early and take the rest along the rotated ray.
        const double t_core_limit = std::max(2.0 * f.x_max(), 4.0 * h0);
        const double t_end = std::min(t_dead, t_core_limit);
        const bool rotate = t_end < t_dead;

        const double tol_abs = 0.45 * budget * estimate;
        QuadAccumulator acc;

        std::vector<double> knots{0.0};
        for (double t = h0; t < t_end; t *= 2.0) knots.push_back(t);
        knots.push_back(t_end);
        std::vector<LineIntegrand::Point> kp(knots.size());
        for (std::size_t i = 0; i < knots.size(); ++i) kp[i] = f.eval(knots[i]);

        const double tol_panel = 0.5 * tol_abs / static_cast<double>(knots.size() - 1);
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            const double a = knots[i], b = knots[i + 1];
            const LineIntegrand::Point fm = f.eval(0.5 * (a + b));
            const double s = (b - a) / 6.0 * (kp[i].h + 4.0 * fm.h + kp[i + 1].h);
            refine(q, a, b, kp[i], fm, kp[i + 1], s, tol_panel, 0, acc);
        }

        double tail = 0.0;
        if (rotate) {
            RotatedTail rt{&f, t_end, omega};
            // exp(-omega s_end)/omega <= a small share of the budget.
            const double target = std::max(1e-300, 0.02 * budget * estimate * omega);
            const double s_end = std::max(1.0, std::log(1.0 / target)) / omega;
            const RotatedTail::Result r = rt.integrate(s_end, 0.25 * tol_abs);
            acc.integral += r.value;
            acc.error += r.quad_error;
            tail = r.remainder;
        } else {
            tail = oscillatory_tail_bound(f.envelope_log(t_end), f.beta);
        }

        out.integral = acc.integral;
        out.diag.truncation_t = t_end;
        out.diag.points_used = f.evals;
        const double scale = std::max(std::fabs(out.integral), 1e-300);
        out.diag.tail_bound = tail / scale;
        out.diag.refinement_error = acc.error / scale;

        // The tolerance was relative to `estimate`; if the integral came out
        // much smaller (an off-saddle line with strong cancellation), redo
        // with the measured size.
        if (std::fabs(out.integral) >= 0.2 * estimate &&
            out.diag.refinement_error <= budget && out.diag.tail_bound <= budget) {
            return out;
        }
        estimate = std::max(std::fabs(out.integral), 1e-280);
    }
    if (out.diag.refinement_error > budget || out.diag.tail_bound > budget)
        throw std::runtime_error("contour integral: error budget unreachable");
    return out;
}

} // namespace

double limiting_free_energy(double beta) {
    if (beta <= 0.0) throw std::invalid_argument("limiting_free_energy: beta must be positive");
    if (beta <= 1.0) return 0.25 * beta * beta;
    return beta - 0.5 * std::log(beta) - 0.75;
}

double log_gamma_half(int n) {
    if (n < 2) throw std::invalid_argument("log_gamma_half: need n >= 2");
    // Lanczos, g = 7, 9 terms; relative error ~1e-14 on z >= 1/2.
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    const double z = 0.5 * n;
    double a = c[0];
    for (int i = 1; i < 9; ++i) a += c[i] / (z - 1.0 + i);
    const double t = z + 6.5;
    return 0.91893853320467274178 /* log sqrt(2 pi) */ +
           (z - 0.5) * std::log(t) - t + std::log(a);
}

ContourLogResult contour_integral_log(const Spectrum& s, double beta, const SaddleInfo& saddle,
                                      double budget) {
    if (budget <= 0.0) throw std::invalid_argument("contour_integral_log: budget must be positive");
    LineIntegrand f = make_integrand(s, beta, saddle.gap_above_top);
    LineQuadResult r = integrate_line(f, budget);
    if (!(r.integral > 0.0))
        throw std::runtime_error("contour_integral_log: integral not positive");
    ContourLogResult out;
    out.value = std::log(r.integral / kPi);
    out.diag = r.diag;
    return out;
}

ContourLogResult contour_integral_log_on_line(const Spectrum& s, double beta,
                                              const SaddleInfo& saddle, double line_re,
                                              double budget) {
    if (budget <= 0.0) throw std::invalid_argument("contour_integral_log_on_line: bad budget");
    const double lambda1 = s.eigenvalues.front();
    if (!(line_re > lambda1))
        throw std::invalid_argument("contour_integral_log_on_line: line must exceed lambda_1");
    LineIntegrand f = make_integrand(s, beta, line_re - lambda1);
    LineQuadResult r = integrate_line(f, budget);
    // The integrand was normalized by G(a); restore the G(gamma) reference.
    const double shift = 0.5 * s.n * (g_value_real(s, beta, line_re) - saddle.g_at_gamma);
    if (!(r.integral > 0.0))
        throw std::runtime_error("contour_integral_log_on_line: integral not positive");
    ContourLogResult out;
    out.value = shift + std::log(r.integral / kPi);
    out.diag = r.diag;
    return out;
}

FreeEnergyBreakdown free_energy(const Spectrum& s, double beta, double budget) {
    if (s.n < 4) throw std::invalid_argument("free_energy: need n >= 4");
    if (beta <= 0.0) throw std::invalid_argument("free_energy: beta must be positive");
    FreeEnergyBreakdown fe;
    fe.n = s.n;
    fe.beta = beta;
    fe.saddle = find_saddle(s, beta);
    fe.prefactor_log = log_gamma_half(s.n) -
                       0.5 * (s.n - 2) * std::log(beta * s.n) +
                       (0.5 * s.n - 1.0) * std::log(2.0);
    fe.g_saddle_half_n = 0.5 * s.n * fe.saddle.g_at_gamma;
    ContourLogResult c = contour_integral_log(s, beta, fe.saddle, budget);
    fe.contour_log = c.value;
    fe.quad = c.diag;
    fe.f_n = (fe.prefactor_log + fe.g_saddle_half_n + fe.contour_log) / s.n;
    return fe;
}

McEstimate sphere_mc_free_energy(const DenseSymmetric& m, double beta, long m_samples,
                                 const SeedSpec& seed) {
    if (m.n > 12) throw std::invalid_argument("sphere_mc_free_energy: oracle is for n <= 12");
    if (m.n < 2) throw std::invalid_argument("sphere_mc_free_energy: need n >= 2");
    if (m_samples < 10000)
        throw std::invalid_argument("sphere_mc_free_energy: need at least 1e4 draws");
    const int n = m.n;
    RandomStream rs(seed);
    std::vector<double> g(n);
    CompensatedSum w_sum, w2_sum;
    for (long k = 0; k < m_samples; ++k) {
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            g[i] = rs.normal();
            norm2 += g[i] * g[i];
        }
        // sigma = sqrt(n) g / |g|; quad = sigma^T M sigma = n (g^T M g) / |g|^2.
        double quad = 0.0;
        for (int i = 0; i < n; ++i) {
            const double* row = &m.entries[static_cast<std::size_t>(i) * n];
            double dot = 0.0;
            for (int j = 0; j < n; ++j) dot += row[j] * g[j];
            quad += g[i] * dot;
        }
        quad *= n / norm2;
        const double w = std::exp(0.5 * beta * quad);
        w_sum.add(w);
        w2_sum.add(w * w);
    }
    const double mean = w_sum.value() / m_samples;
    const double var = std::max(0.0, w2_sum.value() / m_samples - mean * mean);
    McEstimate out;
    out.estimate = std::log(mean) / n;
    out.standard_error = std::sqrt(var / m_samples) / (mean * n);
    return out;
}

std::vector<ContourNode> trace_descent_contour(const Spectrum& s, double beta,
                                               const SaddleInfo& saddle, int n_points,
                                               double max_eta) {
    if (n_points < 1) throw std::invalid_argument("trace_descent_contour: need n_points >= 1");
    if (!(max_eta > 0.0)) throw std::invalid_argument("trace_descent_contour: max_eta must be positive");

    std::vector<ContourNode> nodes;
    nodes.reserve(n_points + 1);
    nodes.push_back({saddle.gamma, 0.0, saddle.g_at_gamma, 0.0});

    auto im_g = [&](double e, double eta) {
        return g_value(s, beta, {e, eta}).imag();
    };

    double e_prev = saddle.gamma;
    for (int k = 1; k <= n_points; ++k) {
        const double eta = max_eta * k / n_points;
        // Im G is increasing in E at fixed eta > 0; the contour drifts left,
        // so the previous abscissa plus a margin brackets from the right.
        double hi = e_prev + 1.0;
        double lo = e_prev - std::max(1.0, eta);
        int expand = 0;
        while (im_g(hi, eta) < 0.0) {
            hi += std::max(1.0, eta);
            if (++expand > 80) throw std::runtime_error("trace_descent_contour: contour escaped right");
        }
        double step = std::max(1.0, eta);
        while (im_g(lo, eta) > 0.0) {
            lo -= step;
            step *= 2.0;
            if (++expand > 80)
                throw std::runtime_error("trace_descent_contour: contour escaped (Im G = 0 unreachable; "
                                         "eta approaching pi/beta)");
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::fabs(lo)); ++it) {
            const double mid = 0.5 * (lo + hi);
            (im_g(mid, eta) < 0.0 ? lo : hi) = mid;
        }
        const double e = 0.5 * (lo + hi);
        const std::complex<double> g = g_value(s, beta, {e, eta});
        nodes.push_back({e, eta, g.real(), g.imag()});
        e_prev = e;
    }
    return nodes;
}

double ht_expansion_residual(const FreeEnergyBreakdown& fe, const Spectrum& s, double q) {
    if (fe.beta > 1.0 + 1e-9)
        throw std::domain_error("ht_expansion_residual: requires beta <= 1 + 1e-9");
    const double n = fe.n;
    return n * (fe.f_n - 0.25 * fe.beta * fe.beta) + std::log(n) / 12.0 +
           0.5 * x_q_statistic(s, q);
}

double ht_expansion_residual(const Spectrum& s, double beta, double q, double budget) {
    return ht_expansion_residual(free_energy(s, beta, budget), s, q);
}

double lt_expansion_residual(const FreeEnergyBreakdown& fe, const Spectrum& s, double q) {
    if (fe.beta - 1.0 < 1e-9)
        throw std::domain_error("lt_expansion_residual: requires beta - 1 >= 1e-9");
    const double n = fe.n;
    const double beta = fe.beta;
    const double n13 = std::cbrt(n);
    const double lambda1 = s.eigenvalues.front();
    const double predicted = -0.5 * x_q_statistic(s, q) +
                             n * (beta - 1.0) * (lambda1 - 2.0) -
                             std::log(n) / 12.0 -
                             0.5 * std::log(n13 * (beta - 1.0) + 1.0);
    return n * (fe.f_n - (beta - 0.75 - 0.5 * std::log(beta))) - predicted;
}

double lt_expansion_residual(const Spectrum& s, double beta, double q, double budget) {
    return lt_expansion_residual(free_energy(s, beta, budget), s, q);
}

} // namespace ssk
