#pragma once

#include <vector>

#include "ssk/matrices.hpp"
#include "ssk/saddle.hpp"

namespace ssk {

// Large-n limit of the free energy: beta^2/4 below 1, beta - log(beta)/2 - 3/4
// above; continuous with matching first derivative at beta = 1.
double limiting_free_energy(double beta);

// log Gamma(n/2) via the Lanczos approximation, relative error ~1e-14.
double log_gamma_half(int n);

struct QuadratureDiagnostics {
    double truncation_t = 0.0;     // half-length of the integration window
    long points_used = 0;          // integrand evaluations
    double tail_bound = 0.0;       // dropped tail, relative to the integral
    double refinement_error = 0.0; // estimated quadrature error, relative
};

struct ContourLogResult {
    double value = 0.0; // log[(1/pi) int_0^inf Re exp(n(G(a+it)-G(gamma))/2) dt]
    QuadratureDiagnostics diag;
};

// Vertical-line integral through the saddle.  The integrand is evaluated as
// exp(env) cos(theta) with env <= 0, so nothing overflows; env is exactly
// nonincreasing in t, which drives both truncation and the tail bound.
// budget bounds the relative quadrature error of the integral (equivalently
// the absolute error of its log).
ContourLogResult contour_integral_log(const Spectrum& s, double beta,
                                      const SaddleInfo& saddle, double budget = 1e-9);

// Same integral moved to the vertical line through line_re > lambda_1; the
// value is invariant in exact arithmetic.
ContourLogResult contour_integral_log_on_line(const Spectrum& s, double beta,
                                              const SaddleInfo& saddle, double line_re,
                                              double budget = 1e-9);

struct FreeEnergyBreakdown {
    int n = 0;
    double beta = 0.0;
    double f_n = 0.0;            // free energy F_n
    double prefactor_log = 0.0;  // log Gamma(n/2) - (n-2)/2 log(beta n) + (n/2-1) log 2
    double g_saddle_half_n = 0.0; // n G(gamma) / 2
    double contour_log = 0.0;
    SaddleInfo saddle;
    QuadratureDiagnostics quad;
};

// n F_n = prefactor_log + n G(gamma)/2 + contour_log, exactly by construction.
// Requires n >= 4 (below that the line integral is only conditionally
// convergent and the truncation scheme does not apply).
FreeEnergyBreakdown free_energy(const Spectrum& s, double beta, double budget = 1e-9);

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
};

// Direct Monte Carlo of the partition function on the radius-sqrt(n) sphere;
// the independent desk-scale oracle for free_energy.  n <= 12 only.
McEstimate sphere_mc_free_energy(const DenseSymmetric& m, double beta, long m_samples,
                                 const SeedSpec& seed);

struct ContourNode {
    double e = 0.0;   // Re z
    double eta = 0.0; // Im z
    double re_g = 0.0;
    double im_g = 0.0;
};

// Steepest-descent contour Im G = 0 through the saddle, upper half-plane,
// parameterized by eta on a uniform grid in (0, max_eta].  Im G is monotone
// in E at fixed eta, so each node is a bisection root.
std::vector<ContourNode> trace_descent_contour(const Spectrum& s, double beta,
                                               const SaddleInfo& saddle, int n_points,
                                               double max_eta);

// Expansion residuals of the free energy in the two temperature regimes.
// High temperature (beta <= 1 + 1e-9):
//   r = n (F_n - beta^2/4) + log(n)/12 + X_Q/2.
double ht_expansion_residual(const FreeEnergyBreakdown& fe, const Spectrum& s, double q);
double ht_expansion_residual(const Spectrum& s, double beta, double q, double budget = 1e-9);

// Low temperature (beta - 1 >= 1e-9):
//   r = n (F_n - [beta - 3/4 - log(beta)/2])
//       - [ -X_Q/2 + n (beta-1)(lambda_1 - 2) - log(n)/12 - log(n^{1/3}(beta-1) + 1)/2 ].
double lt_expansion_residual(const FreeEnergyBreakdown& fe, const Spectrum& s, double q);
double lt_expansion_residual(const Spectrum& s, double beta, double q, double budget = 1e-9);

} // namespace ssk
