#include "ssk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ssk {

namespace {

struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

} // namespace

double x_q_statistic(const Spectrum& s, double q) {
    if (q <= 0.0) throw std::invalid_argument("x_q_statistic: q must be positive");
    const double n = s.n;
    const double edge = 2.0 + q * std::pow(n, -2.0 / 3.0);
    CompensatedSum acc;
    for (double lambda : s.eigenvalues) {
        const double d = edge - lambda;
        if (d == 0.0) throw std::domain_error("x_q_statistic: evaluation point hits an eigenvalue");
        acc.add(std::log(std::fabs(d)));
    }
    return acc.value() - 0.5 * n - std::cbrt(n) * q + std::log(n) / 6.0;
}

double y_statistic(double f_n, double beta, int n) {
    if (n < 3) throw std::invalid_argument("y_statistic: need n >= 3");
    const double log_n = std::log(static_cast<double>(n));
    const double f_limit = beta <= 1.0 ? 0.25 * beta * beta
                                       : beta - 0.5 * std::log(beta) - 0.75;
    return (n * (f_n - f_limit) + log_n / 12.0) / std::sqrt(log_n / 6.0);
}

double tw_statistic(double f_n, double beta, int n) {
    if (beta <= 1.0) throw std::domain_error("tw_statistic: requires beta > 1");
    const double log_n = std::log(static_cast<double>(n));
    const double f_limit = beta - 0.5 * std::log(beta) - 0.75;
    return (n * (f_n - f_limit) + log_n / 12.0) / (std::cbrt(static_cast<double>(n)) * (beta - 1.0));
}

double alpha_from_beta(double beta, int n) {
    const double log_n = std::log(static_cast<double>(n));
    return (beta - 1.0) * std::cbrt(static_cast<double>(n)) / std::sqrt(log_n);
}

double beta_from_alpha(double alpha, int n) {
    const double log_n = std::log(static_cast<double>(n));
    return 1.0 + alpha * std::sqrt(log_n) / std::cbrt(static_cast<double>(n));
}

Regime regime_of_alpha(double alpha) {
    if (alpha <= -0.5) return Regime::high;
    if (alpha >= 0.5) return Regime::low;
    return Regime::critical;
}

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::high: return "high";
        case Regime::critical: return "critical";
        default: return "low";
    }
}

double standard_normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample");
    for (double v : samples)
        if (!std::isfinite(v)) throw std::invalid_argument("ks_statistic: non-finite sample");
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, (i + 1) / m - f);
        d = std::max(d, f - i / m);
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    return d;
}

MomentSummary moment_summary(const std::vector<double>& samples) {
    const std::size_t m = samples.size();
    if (m < 2) throw std::invalid_argument("moment_summary: need at least 2 samples");
    CompensatedSum s1;
    for (double v : samples) s1.add(v);
    const double mean = s1.value() / m;
    CompensatedSum s2, s3;
    for (double v : samples) {
        const double d = v - mean;
        s2.add(d * d);
        s3.add(d * d * d);
    }
    MomentSummary out;
    out.mean = mean;
    out.variance = s2.value() / (m - 1);
    const double m2 = s2.value() / m;
    const double m3 = s3.value() / m;
    if (m2 > 0.0 && m > 2) {
        const double g1 = m3 / std::pow(m2, 1.5);
        out.skewness = g1 * std::sqrt(static_cast<double>(m) * (m - 1)) / (m - 2);
    } else {
        out.skewness = 0.0;
    }
    return out;
}

ReferenceTable::ReferenceTable(std::string name, std::vector<double> levels,
                               std::vector<double> values)
    : name_(std::move(name)), levels_(std::move(levels)), values_(std::move(values)) {
    if (levels_.size() != values_.size() || levels_.size() < 2)
        throw std::invalid_argument("ReferenceTable: need at least two (level, value) rows");
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (!(levels_[i] > 0.0 && levels_[i] < 1.0))
            throw std::invalid_argument("ReferenceTable: levels must lie in (0, 1)");
        if (i > 0 && !(levels_[i] > levels_[i - 1] && values_[i] > values_[i - 1]))
            throw std::invalid_argument("ReferenceTable: levels and values must be strictly increasing");
    }
}

ReferenceTable ReferenceTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("ReferenceTable: cannot open " + path);
    std::string line;
    std::vector<double> levels, values;
    bool header_seen = false;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "level,value")
                throw std::runtime_error("ReferenceTable: " + path +
                                         ": expected header 'level,value'");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        double level, value;
        char comma;
        if (!(row >> level >> comma >> value) || comma != ',')
            throw std::runtime_error("ReferenceTable: " + path + ": malformed line " +
                                     std::to_string(line_no));
        levels.push_back(level);
        values.push_back(value);
    }
    return ReferenceTable(path, std::move(levels), std::move(values));
}

void ReferenceTable::save_csv(const std::string& path, const std::string& comment) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("ReferenceTable: cannot write " + path);
    if (!comment.empty()) out << "# " << comment << "\n";
    out << "level,value\n";
    char buf[80];
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", levels_[i], values_[i]);
        out << buf;
    }
    if (!out) throw std::runtime_error("ReferenceTable: write failed for " + path);
}

double ReferenceTable::cdf(double x, bool* extrapolated) const {
    if (extrapolated) *extrapolated = false;
    if (x <= values_.front()) {
        if (extrapolated) *extrapolated = true;
        // Exponential tail through the two lowest rows.
        const double s = (values_[1] - values_[0]) /
                         std::max(1e-300, std::log(levels_[1] / levels_[0]));
        return std::min(levels_.front(), levels_.front() * std::exp((x - values_.front()) / s));
    }
    if (x >= values_.back()) {
        if (extrapolated) *extrapolated = true;
        const std::size_t k = levels_.size();
        const double u0 = 1.0 - levels_[k - 1];
        const double u1 = 1.0 - levels_[k - 2];
        const double s = (values_[k - 1] - values_[k - 2]) /
                         std::max(1e-300, std::log(u1 / u0));
        return 1.0 - std::min(u0, u0 * std::exp(-(x - values_.back()) / s));
    }
    const auto it = std::upper_bound(values_.begin(), values_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - values_.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - values_[lo]) / (values_[hi] - values_[lo]);
    return levels_[lo] + w * (levels_[hi] - levels_[lo]);
}

double ReferenceTable::quantile(double level) const {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("ReferenceTable::quantile: level must be in (0, 1)");
    if (level <= levels_.front()) return values_.front();
    if (level >= levels_.back()) return values_.back();
    const auto it = std::upper_bound(levels_.begin(), levels_.end(), level);
    const std::size_t hi = static_cast<std::size_t>(it - levels_.begin());
    const std::size_t lo = hi - 1;
    const double w = (level - levels_[lo]) / (levels_[hi] - levels_[lo]);
    return values_[lo] + w * (values_[hi] - values_[lo]);
}

} // namespace ssk
