#include "ssk/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ssk {

namespace {

void check_finite(const TridiagonalSymmetric& m) {
    if (m.n < 1 || m.diag.size() != static_cast<std::size_t>(m.n) ||
        m.offdiag.size() + 1 != static_cast<std::size_t>(m.n)) {
        throw std::invalid_argument("tridiagonal matrix: inconsistent dimensions");
    }
    for (double v : m.diag)
        if (!std::isfinite(v)) throw std::invalid_argument("tridiagonal matrix: non-finite diagonal entry");
    for (double v : m.offdiag)
        if (!std::isfinite(v)) throw std::invalid_argument("tridiagonal matrix: non-finite offdiagonal entry");
}

struct Block {
    const double* d;
    const double* e2; // squared offdiagonals, length len-1
    int len;
    double pivmin;
};

int count_at_most_scalar(const Block& b, double x) {
    double t = b.d[0] - x;
    if (std::fabs(t) < b.pivmin) t = -b.pivmin;
    int cnt = t <= 0.0 ? 1 : 0;
    for (int j = 1; j < b.len; ++j) {
        t = b.d[j] - b.e2[j - 1] / t - x;
        if (std::fabs(t) < b.pivmin) t = -b.pivmin;
        if (t <= 0.0) ++cnt;
    }
    return cnt;
}

// Four interleaved recurrences; the serial division chain is latency-bound,
// so independent shifts in flight nearly triple throughput.
void count_at_most_4(const Block& b, const double* x, int* cnt) {
    double t0 = b.d[0] - x[0];
    double t1 = b.d[0] - x[1];
    double t2 = b.d[0] - x[2];
    double t3 = b.d[0] - x[3];
    const double p = b.pivmin;
    if (std::fabs(t0) < p) t0 = -p;
    if (std::fabs(t1) < p) t1 = -p;
    if (std::fabs(t2) < p) t2 = -p;
    if (std::fabs(t3) < p) t3 = -p;
    int c0 = t0 <= 0.0, c1 = t1 <= 0.0, c2 = t2 <= 0.0, c3 = t3 <= 0.0;
    for (int j = 1; j < b.len; ++j) {
        const double dj = b.d[j];
        const double ej = b.e2[j - 1];
        t0 = dj - ej / t0 - x[0];
        t1 = dj - ej / t1 - x[1];
        t2 = dj - ej / t2 - x[2];
        t3 = dj - ej / t3 - x[3];
        if (std::fabs(t0) < p) t0 = -p;
        if (std::fabs(t1) < p) t1 = -p;
        if (std::fabs(t2) < p) t2 = -p;
        if (std::fabs(t3) < p) t3 = -p;
        c0 += t0 <= 0.0;
        c1 += t1 <= 0.0;
        c2 += t2 <= 0.0;
        c3 += t3 <= 0.0;
    }
    cnt[0] = c0;
    cnt[1] = c1;
    cnt[2] = c2;
    cnt[3] = c3;
}

struct Interval {
    double lo, hi; // (lo, hi]
    int c_lo, c_hi; // eigenvalue counts at the endpoints
};

// Eigenvalues of one unreduced block with ascending indices in
// [want_lo, want_hi], each to within tol.  Breadth-first bisection: every
// round counts all pending midpoints in batches of four.
std::vector<double> bisect_block(const Block& b, int want_lo, int want_hi, double tol) {
    std::vector<double> out(static_cast<std::size_t>(want_hi - want_lo + 1), 0.0);
    if (b.len == 1) {
        out[0] = b.d[0];
        return out;
    }

    double glo = std::numeric_limits<double>::infinity();
    double ghi = -glo;
    for (int j = 0; j < b.len; ++j) {
        const double r = (j > 0 ? std::sqrt(b.e2[j - 1]) : 0.0) +
                         (j + 1 < b.len ? std::sqrt(b.e2[j]) : 0.0);
        glo = std::min(glo, b.d[j] - r);
        ghi = std::max(ghi, b.d[j] + r);
    }
    const double pad = (std::fabs(glo) + std::fabs(ghi) + 1.0) * 4.0 *
                           std::numeric_limits<double>::epsilon() +
                       2.0 * b.pivmin;
    glo -= pad;
    ghi += pad;

    auto emit = [&](const Interval& iv) {
        const double mid = 0.5 * (iv.lo + iv.hi);
        const int first = std::max(iv.c_lo, want_lo);
        const int last = std::min(iv.c_hi - 1, want_hi);
        for (int idx = first; idx <= last; ++idx) out[idx - want_lo] = mid;
    };

    std::vector<Interval> active{{glo, ghi, 0, b.len}};
    std::vector<Interval> next;
    std::vector<double> mids;
    std::vector<int> counts;
    while (!active.empty()) {
        mids.clear();
        counts.clear();
        mids.reserve(active.size());
        for (const Interval& iv : active) mids.push_back(0.5 * (iv.lo + iv.hi));
        counts.resize(mids.size());
        std::size_t i = 0;
        for (; i + 4 <= mids.size(); i += 4) count_at_most_4(b, &mids[i], &counts[i]);
        for (; i < mids.size(); ++i) counts[i] = count_at_most_scalar(b, mids[i]);

        next.clear();
        for (std::size_t k = 0; k < active.size(); ++k) {
            const Interval& iv = active[k];
            const double mid = mids[k];
            int c_mid = counts[k];
            c_mid = std::clamp(c_mid, iv.c_lo, iv.c_hi); // counts are monotone in exact arithmetic
            const Interval left{iv.lo, mid, iv.c_lo, c_mid};
            const Interval right{mid, iv.hi, c_mid, iv.c_hi};
            for (const Interval& half : {left, right}) {
                if (half.c_hi <= half.c_lo) continue;
                if (half.c_hi - 1 < want_lo || half.c_lo > want_hi) continue;
                const double half_mid = 0.5 * (half.lo + half.hi);
                const bool fp_floor = !(half.lo < half_mid && half_mid < half.hi);
                if (half.hi - half.lo <= 2.0 * tol || fp_floor) {
                    emit(half);
                } else {
                    next.push_back(half);
                }
            }
        }
        active.swap(next);
    }
    return out;
}

struct BlockRange {
    int begin; // inclusive, index into the full matrix
    int end;   // exclusive
};

// Zero offdiagonal entries decouple the matrix; solve each piece on its own.
std::vector<BlockRange> split_blocks(const TridiagonalSymmetric& m) {
    std::vector<BlockRange> blocks;
    int start = 0;
    for (int k = 0; k + 1 < m.n; ++k) {
        if (m.offdiag[k] == 0.0) {
            blocks.push_back({start, k + 1});
            start = k + 1;
        }
    }
    blocks.push_back({start, m.n});
    return blocks;
}

double block_pivmin(const double* e2, int len) {
    double m = 1.0;
    for (int j = 0; j + 1 < len; ++j) m = std::max(m, e2[j]);
    return std::numeric_limits<double>::min() * m;
}

} // namespace

Spectrum synthetic_spectrum(std::vector<double> values_descending) {
    for (double v : values_descending)
        if (!std::isfinite(v)) throw std::invalid_argument("synthetic_spectrum: non-finite value");
    std::sort(values_descending.begin(), values_descending.end(), std::greater<>());
    Spectrum s;
    s.n = static_cast<int>(values_descending.size());
    s.eigenvalues = std::move(values_descending);
    s.ensemble = EnsembleTag::synthetic;
    return s;
}

double spectral_scale(const TridiagonalSymmetric& m) {
    double md = 0.0, me = 0.0;
    for (double v : m.diag) md = std::max(md, std::fabs(v));
    for (double v : m.offdiag) me = std::max(me, std::fabs(v));
    return md + 2.0 * me;
}

double default_eigen_tol(const TridiagonalSymmetric& m) {
    return 1e-12 * std::max(1.0, spectral_scale(m));
}

int sturm_count_at_most(const TridiagonalSymmetric& m, double x) {
    check_finite(m);
    std::vector<double> e2(m.offdiag.size());
    for (std::size_t j = 0; j < e2.size(); ++j) e2[j] = m.offdiag[j] * m.offdiag[j];
    int total = 0;
    for (const BlockRange& r : split_blocks(m)) {
        const int len = r.end - r.begin;
        Block b{m.diag.data() + r.begin, e2.data() + r.begin, len,
                block_pivmin(e2.data() + r.begin, len)};
        total += count_at_most_scalar(b, x);
    }
    return total;
}

Spectrum eigenvalues_tridiagonal(const TridiagonalSymmetric& m, double tol) {
    check_finite(m);
    if (tol <= 0.0) tol = default_eigen_tol(m);
    std::vector<double> e2(m.offdiag.size());
    for (std::size_t j = 0; j < e2.size(); ++j) e2[j] = m.offdiag[j] * m.offdiag[j];

    std::vector<double> values;
    values.reserve(m.n);
    for (const BlockRange& r : split_blocks(m)) {
        const int len = r.end - r.begin;
        Block b{m.diag.data() + r.begin, e2.data() + r.begin, len,
                block_pivmin(e2.data() + r.begin, len)};
        std::vector<double> vals = bisect_block(b, 0, len - 1, tol);
        values.insert(values.end(), vals.begin(), vals.end());
    }
    std::sort(values.begin(), values.end(), std::greater<>());

    Spectrum s;
    s.n = m.n;
    s.eigenvalues = std::move(values);
    s.ensemble = EnsembleTag::tridiagonal;
    return s;
}

std::vector<double> top_k_eigenvalues(const TridiagonalSymmetric& m, int k, double tol) {
    check_finite(m);
    if (k < 1 || k > m.n) throw std::invalid_argument("top_k_eigenvalues: k out of range");
    if (tol <= 0.0) tol = default_eigen_tol(m);
    std::vector<double> e2(m.offdiag.size());
    for (std::size_t j = 0; j < e2.size(); ++j) e2[j] = m.offdiag[j] * m.offdiag[j];

    // Candidates: the top min(k, len) of every decoupled block.
    std::vector<double> candidates;
    for (const BlockRange& r : split_blocks(m)) {
        const int len = r.end - r.begin;
        Block b{m.diag.data() + r.begin, e2.data() + r.begin, len,
                block_pivmin(e2.data() + r.begin, len)};
        const int take = std::min(k, len);
        std::vector<double> vals = bisect_block(b, len - take, len - 1, tol);
        candidates.insert(candidates.end(), vals.begin(), vals.end());
    }
    std::sort(candidates.begin(), candidates.end(), std::greater<>());
    candidates.resize(k);
    return candidates;
}

TridiagonalSymmetric householder_tridiagonalize(const DenseSymmetric& m) {
    const int n = m.n;
    if (n < 2 || m.entries.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("householder_tridiagonalize: bad matrix");
    for (double v : m.entries)
        if (!std::isfinite(v)) throw std::invalid_argument("householder_tridiagonalize: non-finite entry");

    std::vector<double> a = m.entries;
    auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

    TridiagonalSymmetric t;
    t.n = n;
    t.diag.resize(n);
    t.offdiag.assign(n - 1, 0.0);

    std::vector<double> v(n), w(n);
    for (int k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) norm2 += at(i, k) * at(i, k);
        if (norm2 == 0.0) {
            t.offdiag[k] = 0.0;
            continue;
        }
        const double x0 = at(k + 1, k);
        const double alpha = x0 >= 0.0 ? -std::sqrt(norm2) : std::sqrt(norm2);

        v[k + 1] = x0 - alpha;
        for (int i = k + 2; i < n; ++i) v[i] = at(i, k);
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) {
            t.offdiag[k] = alpha;
            continue;
        }
        const double inv_vnorm = 1.0 / std::sqrt(vnorm2);
        for (int i = k + 1; i < n; ++i) v[i] *= inv_vnorm;

        // Reflect the trailing block: B <- B - 2 v u^T - 2 u v^T with
        // w = B v, u = w - (v.w) v.
        for (int i = k + 1; i < n; ++i) {
            double s = 0.0;
            const double* row = &a[static_cast<std::size_t>(i) * n];
            for (int j = k + 1; j < n; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        double kappa = 0.0;
        for (int i = k + 1; i < n; ++i) kappa += v[i] * w[i];
        for (int i = k + 1; i < n; ++i) w[i] -= kappa * v[i]; // now u
        for (int i = k + 1; i < n; ++i) {
            const double vi2 = 2.0 * v[i];
            const double ui2 = 2.0 * w[i];
            double* row = &a[static_cast<std::size_t>(i) * n];
            for (int j = k + 1; j < n; ++j) row[j] -= vi2 * w[j] + ui2 * v[j];
        }
        t.offdiag[k] = alpha;
    }
    t.offdiag[n - 2] = at(n - 1, n - 2);
    for (int i = 0; i < n; ++i) t.diag[i] = at(i, i);
    for (double& e : t.offdiag) e = std::fabs(e); // sign flips are orthogonal similarities
    return t;
}

Spectrum eigenvalues_dense(const DenseSymmetric& m, double tol) {
    Spectrum s = eigenvalues_tridiagonal(householder_tridiagonalize(m), tol);
    s.ensemble = EnsembleTag::dense_goe;
    return s;
}

} // namespace ssk
