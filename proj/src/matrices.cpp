#include "ssk/matrices.hpp"

#include <cmath>
#include <stdexcept>

namespace ssk {

DenseSymmetric zero_dense(int n) {
    if (n < 2) throw std::invalid_argument("zero_dense: dimension must be >= 2");
    DenseSymmetric m;
    m.n = n;
    m.entries.assign(static_cast<std::size_t>(n) * n, 0.0);
    return m;
}

DenseSymmetric constant_spectrum_dense(int n, double c) {
    DenseSymmetric m = zero_dense(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = c;
    return m;
}

DenseSymmetric sample_goe_dense(int n, const SeedSpec& seed) {
    if (n < 2) throw std::invalid_argument("sample_goe_dense: dimension must be >= 2");
    DenseSymmetric m = zero_dense(n);
    RandomStream rs(seed);
    const double off_sd = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag_sd = std::sqrt(2.0 / static_cast<double>(n));
    // Upper triangle row by row; the mirror write keeps symmetry exact.
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = diag_sd * rs.normal();
        for (int j = i + 1; j < n; ++j) {
            const double v = off_sd * rs.normal();
            m.at(i, j) = v;
            m.at(j, i) = v;
        }
    }
    return m;
}

TridiagonalSymmetric sample_tridiagonal(int n, const SeedSpec& seed) {
    if (n < 2) throw std::invalid_argument("sample_tridiagonal: dimension must be >= 2");
    TridiagonalSymmetric m;
    m.n = n;
    m.diag.resize(n);
    m.offdiag.resize(n - 1);
    RandomStream rs(seed);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double diag_sd = std::sqrt(2.0 / static_cast<double>(n));
    for (int k = 0; k < n; ++k) m.diag[k] = diag_sd * rs.normal();
    for (int k = 0; k + 1 < n; ++k) m.offdiag[k] = inv_sqrt_n * rs.chi(n - 1 - k);
    return m;
}

double trace(const DenseSymmetric& m) {
    double t = 0.0;
    for (int i = 0; i < m.n; ++i) t += m.at(i, i);
    return t;
}

double trace(const TridiagonalSymmetric& m) {
    double t = 0.0;
    for (double d : m.diag) t += d;
    return t;
}

double frobenius_norm_squared(const DenseSymmetric& m) {
    double s = 0.0;
    for (double v : m.entries) s += v * v;
    return s;
}

double frobenius_norm_squared(const TridiagonalSymmetric& m) {
    double s = 0.0;
    for (double v : m.diag) s += v * v;
    for (double v : m.offdiag) s += 2.0 * v * v;
    return s;
}

} // namespace ssk
