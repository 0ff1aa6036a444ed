#pragma once

#include <optional>
#include <vector>

#include "ssk/matrices.hpp"
#include "ssk/rng.hpp"

namespace ssk {

enum class EnsembleTag { dense_goe, tridiagonal, synthetic };

// Full set of eigenvalues of one matrix, sorted descending, plus provenance.
struct Spectrum {
    int n = 0;
    std::vector<double> eigenvalues; // lambda_1 >= lambda_2 >= ... >= lambda_n
    EnsembleTag ensemble = EnsembleTag::synthetic;
    std::optional<SeedSpec> seed;

    double top() const { return eigenvalues.front(); }
};

Spectrum synthetic_spectrum(std::vector<double> values_descending);

// max|diag| + 2*max(offdiag); the scale entering the default tolerance.
double spectral_scale(const TridiagonalSymmetric& m);
double default_eigen_tol(const TridiagonalSymmetric& m); // 1e-12 * max(1, scale)

// Number of eigenvalues <= x by the Sturm sequence of the shifted LDL^T
// factorization.  Exact integer count; the basis of the bisection solver.
int sturm_count_at_most(const TridiagonalSymmetric& m, double x);

// All eigenvalues by Sturm bisection.  Zero offdiag entries split the matrix
// into independent blocks first.  Each returned value is within tol of a true
// eigenvalue and the counts guarantee none is missed or duplicated.
// tol <= 0 selects the default tolerance.
Spectrum eigenvalues_tridiagonal(const TridiagonalSymmetric& m, double tol = 0.0);

// The k largest eigenvalues (descending), same guarantees, without paying for
// the rest of the spectrum.
std::vector<double> top_k_eigenvalues(const TridiagonalSymmetric& m, int k, double tol = 0.0);

// Householder reduction to tridiagonal form (orthogonal similarity).
TridiagonalSymmetric householder_tridiagonalize(const DenseSymmetric& m);

// Householder reduction followed by the tridiagonal solver.
Spectrum eigenvalues_dense(const DenseSymmetric& m, double tol = 0.0);

} // namespace ssk
