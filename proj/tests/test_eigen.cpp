#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "ssk/eigen.hpp"
#include "ssk/matrices.hpp"
#include "oracles.hpp"

using namespace ssk;

TEST_CASE("two-by-two closed form") {
    const TridiagonalSymmetric t{2, {0.0, 0.0}, {1.0}};
    const Spectrum s = eigenvalues_tridiagonal(t, 1e-14);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("constant diagonal with zero couplings") {
    const TridiagonalSymmetric t{5, {3.0, 3.0, 3.0, 3.0, 3.0}, {0.0, 0.0, 0.0, 0.0}};
    const Spectrum s = eigenvalues_tridiagonal(t);
    for (double v : s.eigenvalues) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("random 8x8 matches the characteristic-polynomial oracle") {
    RandomStream rs({101, 0});
    std::vector<double> d(8), e(7);
    for (double& v : d) v = rs.normal();
    for (double& v : e) v = std::fabs(rs.normal()) + 0.1;
    const TridiagonalSymmetric t{8, d, e};
    const Spectrum s = eigenvalues_tridiagonal(t, 1e-12);
    const std::vector<double> ref = oracles::charpoly_eigenvalues(d, e, 1e-10);
    REQUIRE(ref.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(s.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-8));
}

TEST_CASE("sturm count agrees with the returned spectrum at arbitrary probes") {
    const TridiagonalSymmetric t = sample_tridiagonal(300, {7, 2});
    const Spectrum s = eigenvalues_tridiagonal(t);
    RandomStream rs({7, 3});
    for (int trial = 0; trial < 50; ++trial) {
        const double x = 4.5 * (rs.uniform01() - 0.5);
        const int above = static_cast<int>(
            std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(),
                          [&](double v) { return v > x; }));
        CHECK(above == t.n - sturm_count_at_most(t, x));
    }
}

TEST_CASE("trace identities") {
    const TridiagonalSymmetric t = sample_tridiagonal(500, {13, 0});
    const Spectrum s = eigenvalues_tridiagonal(t);
    double sum = 0.0, sum2 = 0.0;
    for (double v : s.eigenvalues) {
        sum += v;
        sum2 += v * v;
    }
    const double scale = spectral_scale(t);
    CHECK(std::fabs(sum - trace(t)) < 1e-8 * t.n * std::max(1.0, scale));
    CHECK(std::fabs(sum2 - frobenius_norm_squared(t)) < 1e-8 * t.n * scale * scale);
}

TEST_CASE("reversed matrix is isospectral") {
    TridiagonalSymmetric t = sample_tridiagonal(120, {19, 5});
    TridiagonalSymmetric r = t;
    std::reverse(r.diag.begin(), r.diag.end());
    std::reverse(r.offdiag.begin(), r.offdiag.end());
    const Spectrum a = eigenvalues_tridiagonal(t);
    const Spectrum b = eigenvalues_tridiagonal(r);
    for (int i = 0; i < t.n; ++i)
        CHECK(a.eigenvalues[i] == doctest::Approx(b.eigenvalues[i]).epsilon(1e-10));
}

TEST_CASE("zero offdiagonal entries deflate into independent blocks") {
    // diag(5) block + [[0,1],[1,0]] block, decoupled.
    const TridiagonalSymmetric t{3, {5.0, 0.0, 0.0}, {0.0, 1.0}};
    const Spectrum s = eigenvalues_tridiagonal(t, 1e-14);
    CHECK(s.eigenvalues[0] == doctest::Approx(5.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(1.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(-1.0));
}

TEST_CASE("non-finite input is rejected") {
    TridiagonalSymmetric t{3, {0.0, std::nan(""), 0.0}, {1.0, 1.0}};
    CHECK_THROWS_AS((void)eigenvalues_tridiagonal(t), std::invalid_argument);
}

TEST_CASE("top-k equals the head of the full solve") {
    const TridiagonalSymmetric t = sample_tridiagonal(50, {29, 1});
    const Spectrum full = eigenvalues_tridiagonal(t);
    SUBCASE("k = n") {
        const auto top = top_k_eigenvalues(t, t.n);
        for (int i = 0; i < t.n; ++i)
            CHECK(top[i] == doctest::Approx(full.eigenvalues[i]).epsilon(1e-12));
    }
    SUBCASE("k = 2") {
        const auto top = top_k_eigenvalues(t, 2);
        CHECK(top[0] == doctest::Approx(full.eigenvalues[0]).epsilon(1e-12));
        CHECK(top[1] == doctest::Approx(full.eigenvalues[1]).epsilon(1e-12));
    }
    SUBCASE("k = 1 on a diagonal matrix") {
        const TridiagonalSymmetric d{3, {5.0, 1.0, 1.0}, {0.0, 0.0}};
        CHECK(top_k_eigenvalues(d, 1)[0] == doctest::Approx(5.0));
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS((void)top_k_eigenvalues(t, 0), std::invalid_argument);
        CHECK_THROWS_AS((void)top_k_eigenvalues(t, t.n + 1), std::invalid_argument);
    }
}

TEST_CASE("dense two-by-two closed form") {
    DenseSymmetric m = zero_dense(2);
    m.at(0, 0) = 1.3;
    m.at(1, 1) = 1.3;
    m.at(0, 1) = m.at(1, 0) = 0.4;
    const Spectrum s = eigenvalues_dense(m, 1e-14);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("dense diagonal matrix") {
    DenseSymmetric m = zero_dense(3);
    m.at(0, 0) = 3.0;
    m.at(1, 1) = 2.0;
    m.at(2, 2) = 1.0;
    const Spectrum s = eigenvalues_dense(m);
    CHECK(s.eigenvalues[0] == doctest::Approx(3.0));
    CHECK(s.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(s.eigenvalues[2] == doctest::Approx(1.0));
}

TEST_CASE("dense solve agrees with the implicit-shift QL oracle") {
    for (int rep = 0; rep < 4; ++rep) {
        const DenseSymmetric m = sample_goe_dense(6, {211, static_cast<std::uint64_t>(rep)});
        const Spectrum s = eigenvalues_dense(m, 1e-13);
        const TridiagonalSymmetric t = householder_tridiagonalize(m);
        const std::vector<double> ref = oracles::ql_eigenvalues(t.diag, t.offdiag);
        for (int i = 0; i < 6; ++i)
            CHECK(s.eigenvalues[i] == doctest::Approx(ref[i]).epsilon(1e-9));
    }
}

TEST_CASE("householder preserves trace and frobenius norm") {
    const DenseSymmetric m = sample_goe_dense(40, {223, 0});
    const TridiagonalSymmetric t = householder_tridiagonalize(m);
    CHECK(trace(t) == doctest::Approx(trace(m)).epsilon(1e-12));
    CHECK(frobenius_norm_squared(t) ==
          doctest::Approx(frobenius_norm_squared(m)).epsilon(1e-11));
}

TEST_CASE("synthetic spectrum sorts and validates") {
    const Spectrum s = synthetic_spectrum({1.0, 3.0, 2.0});
    CHECK(s.eigenvalues == std::vector<double>{3.0, 2.0, 1.0});
    CHECK_THROWS_AS((void)synthetic_spectrum({1.0, std::nan("")}), std::invalid_argument);
}
