#include "doctest.h"

#include <cmath>

#include "ssk/eigen.hpp"
#include "ssk/matrices.hpp"

using namespace ssk;

TEST_CASE("goe sampling is deterministic and exactly symmetric") {
    const DenseSymmetric a = sample_goe_dense(60, {5, 9});
    const DenseSymmetric b = sample_goe_dense(60, {5, 9});
    CHECK(a.entries == b.entries);
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) CHECK(a.at(i, j) == a.at(j, i));
}

TEST_CASE("goe entry variances match the ensemble definition") {
    const int n = 2000;
    const DenseSymmetric m = sample_goe_dense(n, {3, 1});
    double off2 = 0.0, diag2 = 0.0;
    long offs = 0;
    for (int i = 0; i < n; ++i) {
        diag2 += m.at(i, i) * m.at(i, i);
        for (int j = i + 1; j < n; ++j) {
            off2 += m.at(i, j) * m.at(i, j);
            ++offs;
        }
    }
    CHECK(off2 / offs == doctest::Approx(1.0 / n).epsilon(0.05));
    CHECK(diag2 / n == doctest::Approx(2.0 / n).epsilon(0.20));
}

TEST_CASE("tridiagonal sampler is deterministic with the documented laws") {
    const int n = 2000;
    const TridiagonalSymmetric a = sample_tridiagonal(n, {17, 4});
    const TridiagonalSymmetric b = sample_tridiagonal(n, {17, 4});
    CHECK(a.diag == b.diag);
    CHECK(a.offdiag == b.offdiag);

    double d2 = 0.0;
    for (double v : a.diag) d2 += v * v;
    CHECK(d2 / n == doctest::Approx(2.0 / n).epsilon(0.2));

    for (double v : a.offdiag) CHECK(v >= 0.0);
    // offdiag[k]^2 ~ chi^2_{n-1-k}/n; compare the first entries to their means.
    CHECK(a.offdiag[0] * a.offdiag[0] * n ==
          doctest::Approx(n - 1).epsilon(0.2)); // single chi^2: loose
}

TEST_CASE("dimension below two is rejected") {
    CHECK_THROWS_AS((void)sample_goe_dense(1, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_tridiagonal(1, {1, 0}), std::invalid_argument);
}

TEST_CASE("trace identity against the eigensolver") {
    const TridiagonalSymmetric t = sample_tridiagonal(2000, {23, 0});
    const Spectrum s = eigenvalues_tridiagonal(t);
    double sum = 0.0;
    for (double v : s.eigenvalues) sum += v;
    CHECK(std::fabs(sum - trace(t)) < 1e-8 * t.n);
}

TEST_CASE("two-by-two tridiagonal sample matches its characteristic roots") {
    const TridiagonalSymmetric t = sample_tridiagonal(2, {31, 6});
    const Spectrum s = eigenvalues_tridiagonal(t, 1e-14);
    const double half_tr = 0.5 * (t.diag[0] + t.diag[1]);
    const double disc =
        std::sqrt(0.25 * (t.diag[0] - t.diag[1]) * (t.diag[0] - t.diag[1]) +
                  t.offdiag[0] * t.offdiag[0]);
    CHECK(s.eigenvalues[0] == doctest::Approx(half_tr + disc).epsilon(1e-12));
    CHECK(s.eigenvalues[1] == doctest::Approx(half_tr - disc).epsilon(1e-12));
}
