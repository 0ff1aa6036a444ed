#include "ssk/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ssk {

namespace {

// Neumaier compensated summation; the saddle residual target is below what a
// plain left-to-right sum guarantees at n ~ 10^4.
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

void check_spectrum(const Spectrum& s) {
    if (s.n < 1 || s.eigenvalues.size() != static_cast<std::size_t>(s.n))
        throw std::invalid_argument("spectrum: inconsistent size");
}

} // namespace

std::complex<double> g_value(const Spectrum& s, double beta, std::complex<double> z) {
    check_spectrum(s);
    CompensatedSum re, im;
    for (double lambda : s.eigenvalues) {
        const std::complex<double> l = std::log(z - lambda);
        re.add(l.real());
        im.add(l.imag());
    }
    const std::complex<double> mean(re.value() / s.n, im.value() / s.n);
    const std::complex<double> g = beta * z - mean;
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()))
        throw std::domain_error("g_value: z coincides with an eigenvalue");
    return g;
}

double g_value_real(const Spectrum& s, double beta, double x) {
    check_spectrum(s);
    CompensatedSum acc;
    for (double lambda : s.eigenvalues) acc.add(std::log(x - lambda));
    const double g = beta * x - acc.value() / s.n;
    if (!std::isfinite(g)) throw std::domain_error("g_value_real: x must exceed lambda_1");
    return g;
}

std::complex<double> g_derivative(const Spectrum& s, double beta, std::complex<double> z, int order) {
    check_spectrum(s);
    if (order < 1 || order > 4) throw std::invalid_argument("g_derivative: order must be 1..4");
    CompensatedSum re, im;
    for (double lambda : s.eigenvalues) {
        const std::complex<double> d = z - lambda;
        if (d == std::complex<double>(0.0, 0.0))
            throw std::domain_error("g_derivative: z coincides with an eigenvalue");
        std::complex<double> p = 1.0 / d;
        for (int k = 1; k < order; ++k) p /= d;
        re.add(p.real());
        im.add(p.imag());
    }
    const std::complex<double> mean(re.value() / s.n, im.value() / s.n);
    switch (order) {
        case 1: return beta - mean;
        case 2: return mean;
        case 3: return -2.0 * mean;
        default: return 6.0 * mean;
    }
}

SaddleInfo find_saddle(const Spectrum& s, double beta, double tol) {
    check_spectrum(s);
    if (beta <= 0.0) throw std::invalid_argument("find_saddle: beta must be positive");
    if (tol <= 0.0) tol = 1e-12 * std::max(1.0, beta);
    const int n = s.n;
    const double lambda1 = s.eigenvalues.front();

    // Gaps g_i = lambda_1 - lambda_i >= 0, so the solver works in
    // d = gamma - lambda_1 and the leading term 1/(n d) carries no
    // cancellation from subtracting nearly equal eigenvalues.
    std::vector<double> gaps(n);
    for (int i = 0; i < n; ++i) gaps[i] = lambda1 - s.eigenvalues[i];

    // phi(d) = (1/n) sum 1/(d + g_i) - beta, strictly decreasing on d > 0.
    auto phi = [&](double d) {
        CompensatedSum acc;
        for (double g : gaps) acc.add(1.0 / (d + g));
        return acc.value() / n - beta;
    };
    auto phi_prime = [&](double d) {
        CompensatedSum acc;
        for (double g : gaps) {
            const double r = 1.0 / (d + g);
            acc.add(r * r);
        }
        return -acc.value() / n;
    };

    int iterations = 0;

    // The first term alone gives phi(1/(2 n beta)) >= beta > 0; keep the
    // shrink loop as a guard against degenerate scales.
    double lo = 1.0 / (2.0 * n * beta);
    while (phi(lo) <= 0.0) {
        lo *= 0.5;
        if (++iterations > 200) throw std::runtime_error("find_saddle: bracket search failed");
    }
    // phi(1/beta + 2) <= 1/(d) / 1 ... < beta since every term is at most 1/d.
    double hi = 1.0 / beta + 2.0;
    while (phi(hi) >= 0.0) {
        hi *= 2.0;
        if (++iterations > 200) throw std::runtime_error("find_saddle: bracket search failed");
    }

    const double initial_width = hi - lo;
    double d = 0.5 * (lo + hi);
    double f = phi(d);

    // Bisect to 1e-3 of the initial bracket, then Newton with bisection
    // fallback; Newton alone can step below lambda_1 when the gap is tiny.
    while (hi - lo > 1e-3 * initial_width) {
        if (++iterations > 200) throw std::runtime_error("find_saddle: iteration cap exceeded");
        if (f > 0.0) lo = d;
        else hi = d;
        d = 0.5 * (lo + hi);
        f = phi(d);
    }
    while (std::fabs(f) > tol) {
        if (++iterations > 200) throw std::runtime_error("find_saddle: iteration cap exceeded");
        if (f > 0.0) lo = d;
        else hi = d;
        const double fp = phi_prime(d);
        double next = fp < 0.0 ? d - f / fp : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == d) break; // floating-point floor of the bracket
        d = next;
        f = phi(d);
    }

    SaddleInfo info;
    info.gap_above_top = d;
    info.gamma = lambda1 + d;
    info.delta = std::pow(static_cast<double>(n), 2.0 / 3.0) * d;
    info.bracket_lo = lambda1 + lo;
    info.bracket_hi = lambda1 + hi;
    info.iterations = iterations;
    info.residual = std::fabs(f);
    if (info.residual > tol)
        throw std::runtime_error("find_saddle: residual above tolerance at convergence floor");

    CompensatedSum logsum, s2, s3;
    for (double g : gaps) {
        const double x = d + g;
        logsum.add(std::log(x));
        const double r = 1.0 / x;
        s2.add(r * r);
        s3.add(r * r * r);
    }
    info.g_at_gamma = beta * info.gamma - logsum.value() / n;
    info.g2 = s2.value() / n;
    info.g3 = -2.0 * s3.value() / n;
    return info;
}

double surrogate_saddle_ht(double beta) {
    if (beta <= 0.0 || beta > 1.0)
        throw std::domain_error("surrogate_saddle_ht: requires 0 < beta <= 1");
    return (beta * beta + 1.0) / beta;
}

double surrogate_saddle_ht_clamped(double beta, double s_cut, int n) {
    if (s_cut <= 0.0) throw std::invalid_argument("surrogate_saddle_ht_clamped: s_cut must be positive");
    if (n < 1) throw std::invalid_argument("surrogate_saddle_ht_clamped: n must be positive");
    const double clamp = 2.0 + s_cut * std::pow(static_cast<double>(n), -2.0 / 3.0);
    return std::max(surrogate_saddle_ht(beta), clamp);
}

double surrogate_saddle_lt(const Spectrum& s, double beta) {
    check_spectrum(s);
    if (beta - 1.0 < 1e-8)
        throw std::domain_error("surrogate_saddle_lt: requires beta - 1 >= 1e-8");
    return s.eigenvalues.front() + 1.0 / (s.n * (beta - 1.0));
}

} // namespace ssk
