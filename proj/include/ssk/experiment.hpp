#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssk/eigen.hpp"
#include "ssk/stats.hpp"

namespace ssk {

enum class EnsembleChoice { tridiagonal, dense_goe };

std::string ensemble_name(EnsembleChoice e);
EnsembleChoice ensemble_from_name(const std::string& name);

// How temperatures are specified: directly, or through the critical-window
// coordinate alpha (converted per n).
enum class TemperatureKind { beta, alpha };

struct ExperimentManifest {
    std::uint64_t base_seed = 1;
    std::vector<int> n_grid;           // ascending
    TemperatureKind temperature_kind = TemperatureKind::beta;
    std::vector<double> temperatures;  // beta values or alpha values
    int m_samples = 1;                 // per (n, temperature) cell
    std::vector<double> q_list = {5.0};
    EnsembleChoice ensemble = EnsembleChoice::tridiagonal;
    std::string output_path;
    double budget = 1e-9;

    void validate() const; // throws std::invalid_argument
};

// Everything the distributional analysis needs from one (sample, beta, q).
struct FluctuationRecord {
    int n = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double q = 0.0;
    std::uint64_t base_seed = 0;
    std::uint64_t sample_index = 0;
    double f_n = 0.0;
    double y_n = 0.0;
    double x_q = 0.0;
    double lambda1_scaled = 0.0;   // n^{2/3} (lambda_1 - 2)
    double saddle_delta = 0.0;     // n^{2/3} (gamma - lambda_1)
    std::optional<double> tw_stat;      // beta > 1 only
    std::optional<double> ht_residual;  // beta <= 1 + 1e-9
    std::optional<double> lt_residual;  // beta >= 1 + 1e-9
    std::string regime;
    std::optional<std::string> error;   // set when the sample failed; other fields undefined

    // Unrecognized fields found when reading a record file: (key, raw JSON
    // value), carried along and written back verbatim.
    std::vector<std::pair<std::string, std::string>> extras;
};

// Runs the full pipeline for each (n, temperature, sample, q) cell of the
// manifest.  The stream of a sample is a function of (base_seed,
// sample_index) alone, so output is identical for any thread count; records
// are emitted grouped by (n, temperature) in sample order.  Per-sample
// failures become error-tagged records and never abort the batch.
std::vector<FluctuationRecord> run_experiment(const ExperimentManifest& manifest,
                                              int threads = 0);

// Same, streaming each record (in order) to sink as it is finalized.
void run_experiment(const ExperimentManifest& manifest, int threads,
                    const std::function<void(const FluctuationRecord&)>& sink);

} // namespace ssk
