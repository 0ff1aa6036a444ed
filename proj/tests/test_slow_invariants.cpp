// Long-running distributional invariants, kept out of the fast unit binary.
#include "doctest.h"

#include <cmath>

#include "ssk/free_energy.hpp"
#include "ssk/parallel.hpp"
#include "ssk/spectral.hpp"
#include "ssk/stats.hpp"

using namespace ssk;

TEST_CASE("dense goe top eigenvalue concentrates near two at n = 200") {
    const int m_samples = 1000;
    std::vector<double> top(m_samples);
    parallel_for(m_samples, 0, [&](long i) {
        const auto t = householder_tridiagonalize(
            sample_goe_dense(200, {881, static_cast<std::uint64_t>(i)}));
        top[i] = top_k_eigenvalues(t, 1)[0];
    });
    double mean = 0.0;
    for (double v : top) mean += v;
    mean /= m_samples;
    CHECK(mean > 1.8);
    CHECK(mean < 2.1);
}

TEST_CASE("edge statistics at n = 1000: x_q variance, q-coupling, surrogate saddle") {
    const int n = 1000;
    const int m_samples = 300;
    const double beta_lt = beta_from_alpha(5.0, n);
    std::vector<double> x1(m_samples), x5(m_samples);
    std::vector<int> surrogate_close(m_samples, 0);
    parallel_for(m_samples, 0, [&](long i) {
        const Spectrum s = eigenvalues_tridiagonal(
            sample_tridiagonal(n, {883, static_cast<std::uint64_t>(i)}));
        x1[i] = x_q_statistic(s, 1.0);
        x5[i] = x_q_statistic(s, 5.0);
        const SaddleInfo sad = find_saddle(s, beta_lt);
        const double hat = surrogate_saddle_lt(s, beta_lt);
        surrogate_close[i] = std::fabs(sad.gamma - hat) <= 0.5 * (sad.gamma - s.top()) ? 1 : 0;
    });

    // variance of X_1 against the log-law prediction
    const MomentSummary m1 = moment_summary(x1);
    const double predicted = 2.0 / 3.0 * std::log(static_cast<double>(n));
    CHECK(m1.variance > 0.7 * predicted);
    CHECK(m1.variance < 1.3 * predicted);

    // the two edge log-determinants move together
    double ma = 0, mb = 0;
    for (int i = 0; i < m_samples; ++i) {
        ma += x1[i];
        mb += x5[i];
    }
    ma /= m_samples;
    mb /= m_samples;
    double sab = 0, saa = 0, sbb = 0;
    for (int i = 0; i < m_samples; ++i) {
        sab += (x1[i] - ma) * (x5[i] - mb);
        saa += (x1[i] - ma) * (x1[i] - ma);
        sbb += (x5[i] - mb) * (x5[i] - mb);
    }
    CHECK(sab / std::sqrt(saa * sbb) > 0.9);

    // the low-temperature surrogate tracks the saddle for most samples
    int close = 0;
    for (int v : surrogate_close) close += v;
    CHECK(static_cast<double>(close) / m_samples >= 0.9);
}

TEST_CASE("sample mean of the free energy approaches its limit at n = 2000") {
    const int n = 2000;
    const int m_samples = 50;
    for (double beta : {0.5, 1.0, 1.5}) {
        std::vector<double> f(m_samples);
        parallel_for(m_samples, 0, [&](long i) {
            const Spectrum s = eigenvalues_tridiagonal(
                sample_tridiagonal(n, {887, static_cast<std::uint64_t>(i)}));
            f[i] = free_energy(s, beta).f_n;
        });
        double mean = 0.0;
        for (double v : f) mean += v;
        mean /= m_samples;
        CHECK(std::fabs(mean - limiting_free_energy(beta)) < 0.01);
    }
}

TEST_CASE("critical variance prediction log(n)/(6 n^2) at n = 2000") {
    const int n = 2000;
    const int m_samples = 2000;
    std::vector<double> nf(m_samples);
    parallel_for(m_samples, 0, [&](long i) {
        const Spectrum s = eigenvalues_tridiagonal(
            sample_tridiagonal(n, {971, static_cast<std::uint64_t>(i)}));
        nf[i] = n * free_energy(s, 1.0).f_n;
    });
    const MomentSummary m = moment_summary(nf);
    const double predicted = std::log(static_cast<double>(n)) / 6.0;
    const double ratio = m.variance / predicted;
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.4);
}
