#include "doctest.h"

#include <cmath>
#include <complex>

#include "ssk/saddle.hpp"
#include "ssk/spectral.hpp"

using namespace ssk;

TEST_CASE("g on trivial spectra") {
    const Spectrum zeros = synthetic_spectrum(std::vector<double>(50, 0.0));
    CHECK(g_value_real(zeros, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double e = std::exp(1.0);
    CHECK(g_value_real(zeros, 1.0, e) == doctest::Approx(e - 1.0).epsilon(1e-14));
    CHECK_THROWS_AS((void)g_value(zeros, 1.0, {0.0, 0.0}), std::domain_error);
}

TEST_CASE("g respects conjugate symmetry") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(80, {3, 0}));
    RandomStream rs({3, 1});
    for (int i = 0; i < 20; ++i) {
        const std::complex<double> z{4.0 * (rs.uniform01() - 0.5), 2.0 * rs.uniform01() + 0.01};
        const std::complex<double> a = g_value(s, 1.2, z);
        const std::complex<double> b = g_value(s, 1.2, std::conj(z));
        CHECK(std::abs(std::conj(a) - b) < 1e-13 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("derivatives on closed-form cases") {
    const Spectrum zero1 = synthetic_spectrum({0.0});
    CHECK(g_derivative(zero1, 2.0, {1.0, 0.0}, 1).real() == doctest::Approx(1.0));

    const Spectrum pm = synthetic_spectrum({1.0, -1.0});
    CHECK(g_derivative(pm, 1.0, {2.0, 0.0}, 2).real() ==
          doctest::Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("derivatives agree with central finite differences through order four") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(150, {5, 0}));
    const double beta = 1.1;
    const double h = 1e-5;
    for (const std::complex<double> z : {std::complex<double>(s.top() + 0.7, 0.0),
                                         std::complex<double>(0.5, 1.0)}) {
        for (int k = 1; k <= 4; ++k) {
            auto lower = [&](std::complex<double> w) {
                return k == 1 ? g_value(s, beta, w) : g_derivative(s, beta, w, k - 1);
            };
            const std::complex<double> fd = (lower(z + h) - lower(z - h)) / (2.0 * h);
            const std::complex<double> an = g_derivative(s, beta, z, k);
            CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an));
        }
    }
    CHECK_THROWS_AS((void)g_derivative(s, 1.0, {0.0, 1.0}, 5), std::invalid_argument);
}

TEST_CASE("saddle closed forms") {
    SUBCASE("flat spectrum gives gamma = 1/beta above the common value") {
        for (double beta : {0.4, 1.0, 2.5}) {
            const Spectrum zeros = synthetic_spectrum(std::vector<double>(64, 0.0));
            const SaddleInfo sad = find_saddle(zeros, beta);
            CHECK(sad.gamma == doctest::Approx(1.0 / beta).epsilon(1e-12));
            CHECK(sad.residual <= 1e-12 * std::max(1.0, beta));
        }
    }
    SUBCASE("two-point spectrum at beta = 1 gives the golden ratio") {
        const Spectrum pm = synthetic_spectrum({1.0, -1.0});
        const SaddleInfo sad = find_saddle(pm, 1.0);
        CHECK(sad.gamma == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    }
}

TEST_CASE("saddle solver invariants on sampled spectra") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(400, {41, 0}));
    for (double beta : {0.5, 0.95, 1.0, 1.05, 1.6}) {
        const SaddleInfo sad = find_saddle(s, beta);
        CHECK(sad.gamma > s.top());
        CHECK(sad.bracket_lo > s.top());
        CHECK(sad.bracket_lo <= sad.gamma);
        CHECK(sad.gamma <= sad.bracket_hi);
        CHECK(sad.residual <= 1e-12 * std::max(1.0, beta));
        CHECK(sad.g2 > 0.0);
        CHECK(sad.g3 < 0.0);
        CHECK(std::abs(g_derivative(s, beta, {sad.gamma, 0.0}, 1)) <=
              2e-12 * std::max(1.0, beta));
    }
}

TEST_CASE("the stieltjes-type sum is strictly decreasing above the spectrum") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(100, {43, 0}));
    auto sum_at = [&](double x) {
        double acc = 0.0;
        for (double l : s.eigenvalues) acc += 1.0 / (x - l);
        return acc / s.n;
    };
    double prev = sum_at(s.top() + 1e-4);
    for (double step : {1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
        const double cur = sum_at(s.top() + 1e-4 + step);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("shifting the spectrum shifts the saddle identically") {
    const Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(200, {47, 0}));
    const double c = 0.37;
    std::vector<double> shifted = s.eigenvalues;
    for (double& v : shifted) v += c;
    const Spectrum sc = synthetic_spectrum(shifted);
    const SaddleInfo a = find_saddle(s, 1.2);
    const SaddleInfo b = find_saddle(sc, 1.2);
    CHECK(std::fabs(b.gamma - a.gamma - c) < 1e-10);
}

TEST_CASE("high-temperature surrogate saddle") {
    CHECK(surrogate_saddle_ht(1.0) == doctest::Approx(2.0));
    CHECK(surrogate_saddle_ht(0.5) == doctest::Approx(2.5));
    CHECK(semicircle_stieltjes_real(2.5) == doctest::Approx(-0.5).epsilon(1e-13));
    for (double beta : {0.3, 0.7, 0.9, 1.0}) {
        const double g = surrogate_saddle_ht(beta);
        CHECK(std::fabs(beta + semicircle_stieltjes_real(g)) < 1e-12);
    }
    CHECK_THROWS_AS((void)surrogate_saddle_ht(1.2), std::domain_error);
}

TEST_CASE("clamped surrogate takes the max") {
    const double clamp = 2.0 + 3.0 * std::pow(1000.0, -2.0 / 3.0);
    CHECK(surrogate_saddle_ht_clamped(1.0, 3.0, 1000) == doctest::Approx(clamp));
    CHECK(surrogate_saddle_ht_clamped(0.5, 3.0, 1000) == doctest::Approx(2.5));
    const double a = surrogate_saddle_ht_clamped(0.99, 3.0, 1000000);
    CHECK(a == doctest::Approx(std::max(surrogate_saddle_ht(0.99),
                                        2.0 + 3.0 * std::pow(1e6, -2.0 / 3.0))));
    CHECK_THROWS_AS((void)surrogate_saddle_ht_clamped(1.0, 0.0, 10), std::invalid_argument);
}

TEST_CASE("low-temperature surrogate saddle") {
    const Spectrum s = synthetic_spectrum({2.0, 1.0, 0.0});
    // formula with n = 3 here; the spec's headline case uses n = 100
    Spectrum s100 = synthetic_spectrum([] {
        std::vector<double> v(100, 0.0);
        v[0] = 2.0;
        return v;
    }());
    CHECK(surrogate_saddle_lt(s100, 1.5) == doctest::Approx(2.0 + 1.0 / 50.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)surrogate_saddle_lt(s, 1.0 + 1e-9), std::domain_error);
}
