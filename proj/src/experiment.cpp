#include "ssk/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ssk/free_energy.hpp"
#include "ssk/matrices.hpp"
#include "ssk/parallel.hpp"

namespace ssk {

std::string ensemble_name(EnsembleChoice e) {
    return e == EnsembleChoice::tridiagonal ? "tridiagonal" : "dense-goe";
}

EnsembleChoice ensemble_from_name(const std::string& name) {
    if (name == "tridiagonal") return EnsembleChoice::tridiagonal;
    if (name == "dense-goe" || name == "dense") return EnsembleChoice::dense_goe;
    throw std::invalid_argument("unknown ensemble: " + name);
}

void ExperimentManifest::validate() const {
    if (n_grid.empty()) throw std::invalid_argument("manifest: empty n grid");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 4) throw std::invalid_argument("manifest: n must be >= 4");
        if (i > 0 && n_grid[i] < n_grid[i - 1])
            throw std::invalid_argument("manifest: n grid must be ascending");
    }
    if (temperatures.empty()) throw std::invalid_argument("manifest: no temperatures");
    if (temperature_kind == TemperatureKind::beta)
        for (double b : temperatures)
            if (!(b > 0.0) || !std::isfinite(b))
                throw std::invalid_argument("manifest: beta values must be positive");
    if (m_samples < 1) throw std::invalid_argument("manifest: m_samples must be >= 1");
    if (q_list.empty()) throw std::invalid_argument("manifest: empty q list");
    for (double q : q_list)
        if (!(q > 0.0)) throw std::invalid_argument("manifest: q values must be positive");
    if (!(budget > 0.0)) throw std::invalid_argument("manifest: budget must be positive");
}

namespace {

// All records of one sample at one n (every temperature and q), so a worker
// solves the spectrum once and reuses it across the temperature list.
struct SampleSlot {
    std::vector<FluctuationRecord> records;
};

std::vector<FluctuationRecord> records_for_sample(const ExperimentManifest& m, int n,
                                                  std::uint64_t sample_index) {
    const SeedSpec seed{m.base_seed, sample_index};
    std::vector<FluctuationRecord> out;
    out.reserve(m.temperatures.size() * m.q_list.size());

    auto tag_error = [&](const std::string& what) {
        for (double temp : m.temperatures) {
            const double beta = m.temperature_kind == TemperatureKind::beta
                                    ? temp
                                    : beta_from_alpha(temp, n);
            for (double q : m.q_list) {
                FluctuationRecord r;
                r.n = n;
                r.beta = beta;
                r.alpha = alpha_from_beta(beta, n);
                r.q = q;
                r.base_seed = m.base_seed;
                r.sample_index = sample_index;
                r.regime = regime_name(regime_of_alpha(r.alpha));
                r.error = what;
                out.push_back(std::move(r));
            }
        }
        return out;
    };

    Spectrum spectrum;
    try {
        if (m.ensemble == EnsembleChoice::tridiagonal) {
            spectrum = eigenvalues_tridiagonal(sample_tridiagonal(n, seed));
        } else {
            spectrum = eigenvalues_dense(sample_goe_dense(n, seed));
        }
        spectrum.seed = seed;
    } catch (const std::exception& e) {
        return tag_error(std::string("spectrum: ") + e.what());
    }

    const double n23 = std::pow(static_cast<double>(n), 2.0 / 3.0);
    const double lambda1_scaled = n23 * (spectrum.top() - 2.0);

    for (double temp : m.temperatures) {
        const double beta = m.temperature_kind == TemperatureKind::beta
                                ? temp
                                : beta_from_alpha(temp, n);
        const double alpha = alpha_from_beta(beta, n);
        FreeEnergyBreakdown fe;
        bool fe_ok = true;
        std::string fe_error;
        try {
            fe = free_energy(spectrum, beta, m.budget);
        } catch (const std::exception& e) {
            fe_ok = false;
            fe_error = std::string("free_energy: ") + e.what();
        }
        for (double q : m.q_list) {
            FluctuationRecord r;
            r.n = n;
            r.beta = beta;
            r.alpha = alpha;
            r.q = q;
            r.base_seed = m.base_seed;
            r.sample_index = sample_index;
            r.regime = regime_name(regime_of_alpha(alpha));
            if (!fe_ok) {
                r.error = fe_error;
                out.push_back(std::move(r));
                continue;
            }
            try {
                r.f_n = fe.f_n;
                r.y_n = y_statistic(fe.f_n, beta, n);
                r.x_q = x_q_statistic(spectrum, q);
                r.lambda1_scaled = lambda1_scaled;
                r.saddle_delta = fe.saddle.delta;
                if (beta - 1.0 >= 1e-9) {
                    r.tw_stat = tw_statistic(fe.f_n, beta, n);
                    r.lt_residual = lt_expansion_residual(fe, spectrum, q);
                }
                if (beta <= 1.0 + 1e-9) {
                    r.ht_residual = ht_expansion_residual(fe, spectrum, q);
                }
            } catch (const std::exception& e) {
                r.error = std::string("statistics: ") + e.what();
            }
            out.push_back(std::move(r));
        }
    }
    return out;
}

} // namespace

void run_experiment(const ExperimentManifest& manifest, int threads,
                    const std::function<void(const FluctuationRecord&)>& sink) {
    manifest.validate();
    for (int n : manifest.n_grid) {
        std::vector<SampleSlot> slots(manifest.m_samples);
        parallel_for(manifest.m_samples, threads, [&](long i) {
            slots[i].records = records_for_sample(manifest, n, static_cast<std::uint64_t>(i));
        });
        // Emission regrouped per (temperature, q) cell, samples ascending.
        const std::size_t cells = manifest.temperatures.size() * manifest.q_list.size();
        for (std::size_t cell = 0; cell < cells; ++cell)
            for (int i = 0; i < manifest.m_samples; ++i)
                sink(slots[i].records.at(cell));
    }
}

std::vector<FluctuationRecord> run_experiment(const ExperimentManifest& manifest, int threads) {
    std::vector<FluctuationRecord> all;
    run_experiment(manifest, threads,
                   [&](const FluctuationRecord& r) { all.push_back(r); });
    return all;
}

} // namespace ssk
