#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ssk/eigen.hpp"

namespace ssk {

// Edge log-characteristic-polynomial statistic at E = 2 + q n^{-2/3}:
//   X_q = sum log|E - lambda_i| - n/2 - n^{1/3} q + log(n)/6.
// After division by sqrt(2 log(n)/3) it is asymptotically standard normal.
double x_q_statistic(const Spectrum& s, double q);

// Normalized critical-temperature fluctuation
//   Y = (n (F_n - f(beta)) + log(n)/12) / sqrt(log(n)/6),  n >= 3.
double y_statistic(double f_n, double beta, int n);

// Low-temperature statistic
//   (n (F_n - f(beta)) + log(n)/12) / (n^{1/3} (beta - 1)),  beta > 1.
double tw_statistic(double f_n, double beta, int n);

// Critical-window coordinate: beta = 1 + alpha sqrt(log n) n^{-1/3}.
double alpha_from_beta(double beta, int n);
double beta_from_alpha(double alpha, int n);

// Reporting tag only; never gates computation.
enum class Regime { high, critical, low };
Regime regime_of_alpha(double alpha);
std::string regime_name(Regime r);

double standard_normal_cdf(double x);

// One-sample Kolmogorov-Smirnov distance against an arbitrary CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

struct MomentSummary {
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double skewness = 0.0; // bias-corrected
};

MomentSummary moment_summary(const std::vector<double>& samples); // >= 2 samples

// Quantile table (level, value), both strictly increasing, levels in (0,1).
// Used for external reference distributions such as Tracy-Widom.
class ReferenceTable {
public:
    ReferenceTable(std::string name, std::vector<double> levels, std::vector<double> values);

    // CSV with header "level,value"; '#' starts a comment line.
    static ReferenceTable load_csv(const std::string& path);
    void save_csv(const std::string& path, const std::string& comment = "") const;

    // Piecewise-linear CDF between tabulated quantiles, exponential tails
    // outside; *extrapolated is set when a tail is used.
    double cdf(double x, bool* extrapolated = nullptr) const;
    double quantile(double level) const;

    const std::string& name() const { return name_; }
    std::size_t size() const { return levels_.size(); }
    double level(std::size_t i) const { return levels_[i]; }
    double value(std::size_t i) const { return values_[i]; }

private:
    std::string name_;
    std::vector<double> levels_;
    std::vector<double> values_;
};

} // namespace ssk
