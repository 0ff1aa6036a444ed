#pragma once

#include <complex>

#include "ssk/eigen.hpp"

namespace ssk {

// G(z) = beta z - (1/n) sum log(z - lambda_i), principal branch.
std::complex<double> g_value(const Spectrum& s, double beta, std::complex<double> z);
double g_value_real(const Spectrum& s, double beta, double x); // x > lambda_1

// G^{(k)}, 1 <= k <= 4:
//   G'(z)  = beta - (1/n) sum (z - lambda_i)^{-1}
//   G^{(k)}(z) = -(-1)^{k-1} (k-1)! (1/n) sum (z - lambda_i)^{-k},  k >= 2.
std::complex<double> g_derivative(const Spectrum& s, double beta, std::complex<double> z, int order);

struct SaddleInfo {
    double gamma = 0.0;        // the root of G' above lambda_1
    double gap_above_top = 0.0; // gamma - lambda_1, held exactly by the solver
    double g_at_gamma = 0.0;
    double g2 = 0.0;           // G''(gamma)
    double g3 = 0.0;           // G'''(gamma)
    double delta = 0.0;        // n^{2/3} (gamma - lambda_1)
    double bracket_lo = 0.0;   // final bracket, both ends above lambda_1
    double bracket_hi = 0.0;
    int iterations = 0;
    double residual = 0.0;     // |G'(gamma)| at exit
};

// Unique gamma > lambda_1 with G'(gamma) = 0, i.e. (1/n) sum (gamma-lambda_i)^{-1} = beta.
// Bisection on the monotone sum, finished by safeguarded Newton.  The solver
// works in the shifted variable gamma - lambda_1 so the residual is not
// limited by cancellation against lambda_1.  tol <= 0 selects
// 1e-12 * max(1, beta).
SaddleInfo find_saddle(const Spectrum& s, double beta, double tol = 0.0);

// High-temperature surrogate: the root of beta + m_sc = 0, equal to (beta^2+1)/beta.
double surrogate_saddle_ht(double beta); // 0 < beta <= 1

// max of the surrogate and 2 + s_cut n^{-2/3}.
double surrogate_saddle_ht_clamped(double beta, double s_cut, int n);

// Low-temperature surrogate lambda_1 + 1/(n (beta-1)); beta must exceed 1 by
// at least 1e-8.
double surrogate_saddle_lt(const Spectrum& s, double beta);

} // namespace ssk
