#include "ssk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssk {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
} // namespace

double semicircle_density(double E) {
    if (std::fabs(E) >= 2.0) return 0.0;
    return std::sqrt(4.0 - E * E) / (2.0 * kPi);
}

double semicircle_cdf_from_right(double E) {
    if (E >= 2.0) return 0.0;
    if (E <= -2.0) return 1.0;
    return 0.5 - (E * std::sqrt(4.0 - E * E) / 4.0 + std::asin(0.5 * E)) / kPi;
}

std::complex<double> semicircle_stieltjes(std::complex<double> z) {
    if (z.imag() == 0.0 && std::fabs(z.real()) < 2.0)
        throw std::domain_error("semicircle_stieltjes: undefined for real z inside (-2, 2)");
    // sqrt(z-2) sqrt(z+2) with principal square roots picks the branch of
    // sqrt(z^2-4) with m(z) -> 0 at infinity on both sheets of the cut plane.
    const std::complex<double> root = std::sqrt(z - 2.0) * std::sqrt(z + 2.0);
    return 0.5 * (root - z);
}

double semicircle_stieltjes_real(double E) {
    if (std::fabs(E) < 2.0)
        throw std::domain_error("semicircle_stieltjes_real: |E| must be >= 2");
    const double root = std::sqrt(E * E - 4.0);
    return E > 0.0 ? 0.5 * (root - E) : 0.5 * (-root - E);
}

double classical_location(int i, int n) {
    if (n < 1 || i < 1 || i > n) throw std::invalid_argument("classical_location: index out of range");
    const double target = static_cast<double>(i) / n;
    if (target >= 1.0) return -2.0;

    // f(x) = cdf_from_right(x) - target is strictly decreasing on [-2, 2];
    // Newton (f' = -density) safeguarded by the shrinking bracket.
    double lo = -2.0, hi = 2.0;
    double x = 2.0 * (1.0 - 2.0 * target); // crude linear start
    x = std::clamp(x, -2.0 + 1e-12, 2.0 - 1e-12);
    for (int iter = 0; iter < 128; ++iter) {
        const double f = semicircle_cdf_from_right(x) - target;
        if (f > 0.0) lo = x;
        else hi = x;
        if (std::fabs(f) <= 1e-15) break;
        const double rho = semicircle_density(x);
        double step_x = rho > 0.0 ? x + f / rho : 0.5 * (lo + hi);
        if (!(step_x > lo && step_x < hi)) step_x = 0.5 * (lo + hi);
        if (step_x == x) break;
        x = step_x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon()) break;
    }
    return x;
}

std::vector<double> classical_locations(int n) {
    std::vector<double> g(n);
    for (int i = 1; i <= n; ++i) g[i - 1] = classical_location(i, n);
    return g;
}

std::complex<double> empirical_stieltjes(const Spectrum& s, std::complex<double> z) {
    std::complex<double> sum = 0.0;
    for (double lambda : s.eigenvalues) {
        const std::complex<double> d = lambda - z;
        if (d == std::complex<double>(0.0, 0.0))
            throw std::domain_error("empirical_stieltjes: z coincides with an eigenvalue");
        sum += 1.0 / d;
    }
    return sum / static_cast<double>(s.n);
}

RigidityReport rigidity_report(const Spectrum& s, const RigidityParams& p,
                               const std::vector<double>* locations) {
    if (p.xi <= 0.0 || p.bulk_start < 1 || p.edge_cap <= 0.0 || p.gap_threshold <= 0.0 ||
        p.stieltjes_bound <= 0.0)
        throw std::invalid_argument("rigidity_report: parameters must be positive");
    const int n = s.n;
    if (n < 2) throw std::invalid_argument("rigidity_report: need n >= 2");
    std::vector<double> own;
    if (locations == nullptr) {
        own = classical_locations(n);
        locations = &own;
    }
    const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
    const double n13 = std::cbrt(static_cast<double>(n));

    RigidityReport r;

    // Location event: |lambda_i - gamma_i| <= n^xi / (n^{2/3} min(i, n+1-i)^{1/3}).
    const double n_xi = std::pow(static_cast<double>(n), p.xi);
    r.worst_f_xi_ratio = 0.0;
    r.worst_f_xi_index = 1;
    for (int i = 1; i <= n; ++i) {
        const double dev = std::fabs(s.eigenvalues[i - 1] - (*locations)[i - 1]);
        const double m = static_cast<double>(std::min(i, n + 1 - i));
        const double ratio = dev * n23 * std::cbrt(m) / n_xi;
        if (ratio > r.worst_f_xi_ratio) {
            r.worst_f_xi_ratio = ratio;
            r.worst_f_xi_index = i;
        }
    }
    r.f_xi_ok = r.worst_f_xi_ratio <= 1.0;

    // Edge window: n^{2/3}(lambda_1 - 2) <= A, and the scaled deviations of
    // lambda_j for bulk_start <= j <= n^{2/5} (vacuous when the range is empty).
    r.edge_value = n23 * (s.eigenvalues[0] - 2.0);
    bool edge_ok = r.edge_value <= p.edge_cap;
    const int j_hi = static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.4)));
    for (int j = p.bulk_start; j <= j_hi; ++j) {
        const double scaled = n23 * (s.eigenvalues[j - 1] - 2.0) +
                              std::pow(1.5 * kPi * j, 2.0 / 3.0);
        if (std::fabs(scaled) > std::pow(static_cast<double>(j), 2.0 / 3.0) / 10.0) {
            edge_ok = false;
            break;
        }
    }
    r.g_ka_ok = edge_ok;

    // Top gap event.
    r.gap_value = n23 * (s.eigenvalues[0] - s.eigenvalues[1]);
    r.s_b_ok = r.gap_value > p.gap_threshold;

    // Stieltjes event at the top eigenvalue.
    double xi_sum = 0.0;
    for (int j = 2; j <= n; ++j) xi_sum += 1.0 / (s.eigenvalues[j - 1] - s.eigenvalues[0]);
    r.j_d_value = n13 * std::fabs(1.0 + xi_sum / n);
    r.j_d_ok = r.j_d_value <= p.stieltjes_bound;

    return r;
}

} // namespace ssk
