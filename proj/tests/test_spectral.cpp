#include "doctest.h"

#include <cmath>
#include <complex>

#include "ssk/spectral.hpp"
#include "oracles.hpp"

using namespace ssk;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("semicircle density values") {
    CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(semicircle_density(2.0) == 0.0);
    CHECK(semicircle_density(-2.0) == 0.0);
    CHECK(semicircle_density(5.0) == 0.0);
    const double mass = oracles::semicircle_integral([](double) { return 1.0; }, 4000);
    CHECK(std::fabs(mass - 1.0) < 1e-10);
}

TEST_CASE("right-tail cdf closed form") {
    CHECK(semicircle_cdf_from_right(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(semicircle_cdf_from_right(2.0) == 0.0);
    CHECK(semicircle_cdf_from_right(-2.0) == 1.0);
    // int_1^2 rho with x = 2 - u^2, which removes the edge singularity:
    // the integrand becomes u^2 sqrt(4 - u^2) / pi on [0, 1].
    const double byquad = oracles::simpson(
        [](double u) { return u * u * std::sqrt(4.0 - u * u) / kPi; }, 0.0, 1.0, 2000);
    CHECK(std::fabs(semicircle_cdf_from_right(1.0) - byquad) < 1e-10);
}

TEST_CASE("stieltjes transform branch and values") {
    CHECK(semicircle_stieltjes_real(2.0) == doctest::Approx(-1.0));
    CHECK(semicircle_stieltjes_real(2.5) == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(semicircle_stieltjes_real(10.0) ==
          doctest::Approx(-(10.0 - std::sqrt(96.0)) / 2.0).epsilon(1e-14));
    CHECK(semicircle_stieltjes_real(-2.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS((void)semicircle_stieltjes_real(1.0), std::domain_error);
    CHECK_THROWS_AS((void)semicircle_stieltjes({0.5, 0.0}), std::domain_error);

    // Quadrature cross-check of m(10).
    const double byquad =
        oracles::semicircle_integral([](double x) { return 1.0 / (x - 10.0); }, 4000);
    CHECK(std::fabs(semicircle_stieltjes_real(10.0) - byquad) < 1e-10);
}

TEST_CASE("stieltjes transform satisfies its fixed-point equation") {
    const std::complex<double> pts[] = {{0.0, 1.0},  {1.5, 0.5},   {-3.0, 0.2},
                                        {2.7, 0.0},  {-2.2, 0.0},  {0.3, 4.0},
                                        {10.0, 0.1}, {-7.0, 3.0}};
    for (const auto z : pts) {
        const std::complex<double> m = semicircle_stieltjes(z);
        CHECK(std::abs(m * m + z * m + 1.0) < 1e-12);
    }
    // decay at infinity and half-plane mapping
    CHECK(std::abs(semicircle_stieltjes({1e8, 1.0})) < 1e-7);
    CHECK(semicircle_stieltjes({0.0, 1.0}).imag() > 0.0);
}

TEST_CASE("classical locations invert the right-tail cdf") {
    CHECK(classical_location(500, 1000) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(classical_location(1000, 1000) == doctest::Approx(-2.0));

    const double predicted = std::pow(3.0 * kPi / 2000.0, 2.0 / 3.0);
    CHECK(std::fabs(2.0 - classical_location(1, 1000) - predicted) < 0.15 * predicted);

    // Grid-inversion oracle for a bulk index.
    const int grid = 2000000;
    double cum = 0.0, target = 100.0 / 1000.0, g100 = 2.0;
    double prev = 0.0;
    for (int k = 1; k <= grid; ++k) {
        const double x = 2.0 - 4.0 * k / grid;
        const double rho = semicircle_density(x);
        cum += 0.5 * (rho + prev) * (4.0 / grid);
        prev = rho;
        if (cum >= target) {
            const double over = cum - target;
            g100 = x + over / std::max(rho, 1e-30); // linear back-off
            break;
        }
    }
    CHECK(std::fabs(classical_location(100, 1000) - g100) < 1e-7);

    // Round trip across the index range.
    for (int i : {1, 3, 17, 100, 400, 500, 777, 999}) {
        const double g = classical_location(i, 1000);
        CHECK(std::fabs(semicircle_cdf_from_right(g) - i / 1000.0) < 1e-10);
    }

    // Strictly decreasing in the index.
    double last = 3.0;
    for (int i = 1; i <= 1000; i += 13) {
        const double g = classical_location(i, 1000);
        CHECK(g < last);
        last = g;
    }
}

TEST_CASE("right-tail cdf is strictly decreasing inside the support") {
    double prev = 1.0 + 1e-15;
    for (double e = -2.0; e <= 2.0; e += 0.01) {
        const double c = semicircle_cdf_from_right(e);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("sampled spectrum approximates the semicircle transform off the edge") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(500, {127, 0}));
    const double m = empirical_stieltjes(s, {2.5, 0.0}).real();
    CHECK(std::fabs(m - semicircle_stieltjes_real(2.5)) < 0.05);
}

TEST_CASE("empirical stieltjes transform is the exact sum") {
    const Spectrum zeros = synthetic_spectrum(std::vector<double>(5, 0.0));
    CHECK(empirical_stieltjes(zeros, {1.0, 0.0}).real() == doctest::Approx(-1.0));
    const Spectrum pm = synthetic_spectrum({1.0, -1.0});
    CHECK(empirical_stieltjes(pm, {2.0, 0.0}).real() == doctest::Approx(-2.0 / 3.0));
    CHECK_THROWS_AS((void)empirical_stieltjes(pm, {1.0, 0.0}), std::domain_error);
}

TEST_CASE("classical-location spectrum approximates the semicircle transform at 1/n rate") {
    auto err_at = [](int n) {
        Spectrum s = synthetic_spectrum(classical_locations(n));
        return std::abs(empirical_stieltjes(s, {2.5, 0.0}) -
                        std::complex<double>(semicircle_stieltjes_real(2.5), 0.0));
    };
    const double e100 = err_at(100);
    const double e1000 = err_at(1000);
    CHECK(e1000 < 2.0 * e100 * (100.0 / 1000.0)); // O(1/n) with stable constant
}

TEST_CASE("rigidity report on synthetic spectra") {
    const int n = 400;
    const std::vector<double> gammas = classical_locations(n);
    const RigidityParams p;

    SUBCASE("classical locations pass with zero worst ratio") {
        const Spectrum s = synthetic_spectrum(gammas);
        const RigidityReport r = rigidity_report(s, p, &gammas);
        CHECK(r.f_xi_ok);
        CHECK(r.worst_f_xi_ratio == doctest::Approx(0.0));
        CHECK(r.j_d_ok);
    }

    SUBCASE("a degenerate top gap fails the gap event for any threshold") {
        std::vector<double> v = gammas;
        v[1] = v[0];
        const Spectrum s = synthetic_spectrum(v);
        const RigidityReport r = rigidity_report(s, p, &gammas);
        CHECK_FALSE(r.s_b_ok);
        CHECK(r.gap_value == doctest::Approx(0.0));
    }

    SUBCASE("a displaced top eigenvalue is flagged at index one") {
        std::vector<double> v = gammas;
        v[0] += 0.5; // sorting keeps it at the top; far beyond the edge window
        const Spectrum s = synthetic_spectrum(v);
        const RigidityReport r = rigidity_report(s, p, &gammas);
        CHECK_FALSE(r.f_xi_ok);
        CHECK(r.worst_f_xi_ratio > 1.0);
        CHECK(r.worst_f_xi_index == 1);
    }

    SUBCASE("parameters must be positive") {
        RigidityParams bad;
        bad.xi = 0.0;
        const Spectrum s = synthetic_spectrum(gammas);
        CHECK_THROWS_AS((void)rigidity_report(s, bad, &gammas), std::invalid_argument);
    }
}
