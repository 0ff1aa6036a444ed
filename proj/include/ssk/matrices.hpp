#pragma once

#include <optional>
#include <vector>

#include "ssk/rng.hpp"

namespace ssk {

// Real symmetric matrix, full storage, entries[i][j] == entries[j][i] exactly
// because both triangles are written from the same draw.
struct DenseSymmetric {
    int n = 0;
    std::vector<double> entries; // row-major n*n

    double& at(int i, int j) { return entries[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return entries[static_cast<std::size_t>(i) * n + j]; }
};

// Symmetric tridiagonal matrix; offdiag[k] couples rows k and k+1 and is kept
// nonnegative (a sign flip is an orthogonal similarity).
struct TridiagonalSymmetric {
    int n = 0;
    std::vector<double> diag;
    std::vector<double> offdiag; // length n-1
};

DenseSymmetric zero_dense(int n);
DenseSymmetric constant_spectrum_dense(int n, double c); // c * identity

// GOE sample in the normalization with spectral support [-2, 2]:
// off-diagonal entries N(0, 1/n), diagonal entries N(0, 2/n).
DenseSymmetric sample_goe_dense(int n, const SeedSpec& seed);

// Tridiagonal ensemble with the same eigenvalue law as sample_goe_dense:
// diag[k] ~ N(0, 2/n), offdiag[k] ~ chi_{n-1-k} / sqrt(n).
TridiagonalSymmetric sample_tridiagonal(int n, const SeedSpec& seed);

double trace(const DenseSymmetric& m);
double trace(const TridiagonalSymmetric& m);
double frobenius_norm_squared(const DenseSymmetric& m);
double frobenius_norm_squared(const TridiagonalSymmetric& m);

} // namespace ssk
