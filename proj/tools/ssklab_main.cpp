// ssklab: command-line front end for the spherical SK free-energy laboratory.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error, 3 runtime or
// numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ssk/experiment.hpp"
#include "ssk/free_energy.hpp"
#include "ssk/parallel.hpp"
#include "ssk/persistence.hpp"
#include "ssk/spectral.hpp"
#include "ssk/verify.hpp"
#include "ssk/version.hpp"

namespace {

using namespace ssk;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Spectrum spectrum_for(const std::string& ensemble, int n, const SeedSpec& seed) {
    if (ensemble == "zero") return synthetic_spectrum(std::vector<double>(n, 0.0));
    if (ensemble == "dense" || ensemble == "dense-goe") {
        Spectrum s = eigenvalues_dense(sample_goe_dense(n, seed));
        s.seed = seed;
        return s;
    }
    Spectrum s = eigenvalues_tridiagonal(sample_tridiagonal(n, seed));
    s.seed = seed;
    return s;
}

int cmd_sample(int n, int samples, std::uint64_t seed, const std::string& ensemble,
               const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::vector<double> locations = classical_locations(n);
    const RigidityParams params;

    std::ofstream rig(out_dir + "/rigidity.csv");
    rig << "# rigidity report per sample, ensemble=" << ensemble << " n=" << n << " seed=" << seed
        << "\n";
    rig << "sample_index,f_xi_ok,g_ka_ok,s_b_ok,j_d_ok,worst_f_xi_index,worst_f_xi_ratio,"
           "j_d_value,gap_value,edge_value\n";

    for (int i = 0; i < samples; ++i) {
        const SeedSpec spec{seed, static_cast<std::uint64_t>(i)};
        const Spectrum s = spectrum_for(ensemble, n, spec);
        char name[64];
        std::snprintf(name, sizeof name, "/spectrum_%04d.csv", i);
        std::ofstream out(out_dir + name);
        out << "# eigenvalues descending; ensemble=" << ensemble << " n=" << n << " base_seed="
            << seed << " sample_index=" << i << "\n";
        for (double v : s.eigenvalues) out << fmt17(v) << "\n";
        if (!out) throw std::runtime_error("cannot write spectrum file in " + out_dir);

        const RigidityReport r = rigidity_report(s, params, &locations);
        rig << i << ',' << r.f_xi_ok << ',' << r.g_ka_ok << ',' << r.s_b_ok << ',' << r.j_d_ok
            << ',' << r.worst_f_xi_index << ',' << fmt17(r.worst_f_xi_ratio) << ','
            << fmt17(r.j_d_value) << ',' << fmt17(r.gap_value) << ',' << fmt17(r.edge_value)
            << '\n';
    }
    if (!rig) throw std::runtime_error("cannot write rigidity.csv in " + out_dir);
    std::printf("wrote %d spectra and rigidity.csv under %s\n", samples, out_dir.c_str());
    return 0;
}

int cmd_free_energy(int n, double beta, int samples, std::uint64_t seed,
                    const std::string& ensemble, double budget, bool oracle, long oracle_draws,
                    const std::string& out_path) {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open " + out_path);
        out = &file;
    }
    *out << "# " << kToolVersion << " free-energy; ensemble=" << ensemble << " n=" << n
         << " beta=" << fmt17(beta) << " seed=" << seed << "\n";
    *out << "sample_index,f_n,prefactor_log,g_saddle_half_n,contour_log,gamma,delta,"
            "saddle_residual,saddle_iterations,quad_points,quad_truncation,quad_tail,"
            "quad_refinement";
    if (oracle) *out << ",mc_estimate,mc_standard_error";
    *out << "\n";

    for (int i = 0; i < samples; ++i) {
        const SeedSpec spec{seed, static_cast<std::uint64_t>(i)};
        std::optional<DenseSymmetric> dense;
        Spectrum s;
        if (oracle) {
            if (ensemble == "zero") {
                dense = zero_dense(n);
                s = synthetic_spectrum(std::vector<double>(n, 0.0));
            } else {
                dense = sample_goe_dense(n, spec);
                s = eigenvalues_dense(*dense);
                s.seed = spec;
            }
        } else {
            s = spectrum_for(ensemble, n, spec);
        }
        const FreeEnergyBreakdown fe = free_energy(s, beta, budget);
        *out << i << ',' << fmt17(fe.f_n) << ',' << fmt17(fe.prefactor_log) << ','
             << fmt17(fe.g_saddle_half_n) << ',' << fmt17(fe.contour_log) << ','
             << fmt17(fe.saddle.gamma) << ',' << fmt17(fe.saddle.delta) << ','
             << fmt17(fe.saddle.residual) << ',' << fe.saddle.iterations << ','
             << fe.quad.points_used << ',' << fmt17(fe.quad.truncation_t) << ','
             << fmt17(fe.quad.tail_bound) << ',' << fmt17(fe.quad.refinement_error);
        if (oracle) {
            const McEstimate mc = sphere_mc_free_energy(
                *dense, beta, oracle_draws, {seed ^ 0x5ca1ab1eULL, spec.sample_index});
            *out << ',' << fmt17(mc.estimate) << ',' << fmt17(mc.standard_error);
        }
        *out << "\n";
    }
    if (!*out) throw std::runtime_error("write failed");
    return 0;
}

int cmd_fluctuations(const ExperimentManifest& manifest, int threads,
                     const std::string& tw_table_path) {
    RunArtifact artifact;
    artifact.manifest = manifest;
    artifact.tool_version = kToolVersion;
    artifact.records = run_experiment(manifest, threads);
    std::optional<ReferenceTable> table;
    if (!tw_table_path.empty()) table = ReferenceTable::load_csv(tw_table_path);
    write_artifact(manifest.output_path, artifact, table ? &*table : nullptr);
    long errors = 0;
    for (const auto& r : artifact.records)
        if (r.error) ++errors;
    std::printf("wrote %zu records (%ld error-tagged) to %s.{jsonl,manifest.json,summary.csv}\n",
                artifact.records.size(), errors, manifest.output_path.c_str());
    return 0;
}

int cmd_contour(int n, double beta, std::uint64_t seed, const std::string& ensemble, int points,
                double max_eta, const std::string& out_prefix) {
    const Spectrum s = spectrum_for(ensemble, n, {seed, 0});
    const SaddleInfo sad = find_saddle(s, beta);
    const double eta_top = max_eta > 0.0 ? max_eta : 0.9 * 3.141592653589793 / beta;
    const auto nodes = trace_descent_contour(s, beta, sad, points, eta_top);

    std::ofstream c(out_prefix + "contour.csv");
    if (!c) throw std::runtime_error("cannot open " + out_prefix + "contour.csv");
    c << "# descent contour Im G = 0; n=" << n << " beta=" << fmt17(beta) << " gamma="
      << fmt17(sad.gamma) << "\n";
    c << "E,eta,reG,imG\n";
    for (const auto& node : nodes)
        c << fmt17(node.e) << ',' << fmt17(node.eta) << ',' << fmt17(node.re_g) << ','
          << fmt17(node.im_g) << '\n';
    if (!c) throw std::runtime_error("write failed for contour.csv");

    // Integrand profile along the vertical line through the saddle.
    std::ofstream p(out_prefix + "integrand.csv");
    if (!p) throw std::runtime_error("cannot open " + out_prefix + "integrand.csv");
    p << "# vertical-line integrand exp(n(G(gamma+it)-G(gamma))/2)\n";
    p << "t,log_envelope,integrand\n";
    const double h0 = std::min(0.1, 1.0 / std::sqrt(s.n * sad.g2));
    for (int k = 0; k <= 400; ++k) {
        const double t = 8.0 * h0 * k / 400;
        const std::complex<double> g = g_value(s, beta, {sad.gamma, t});
        const double env = 0.5 * s.n * (g.real() - sad.g_at_gamma);
        const double theta = 0.5 * s.n * g.imag();
        p << fmt17(t) << ',' << fmt17(env) << ',' << fmt17(std::exp(env) * std::cos(theta))
          << '\n';
    }
    if (!p) throw std::runtime_error("write failed for integrand.csv");
    std::printf("wrote %scontour.csv (%zu nodes) and %sintegrand.csv\n", out_prefix.c_str(),
                nodes.size(), out_prefix.c_str());
    return 0;
}

int cmd_verify(const std::string& tier_name, int threads, const std::string& tw_table,
               const std::string& scratch, double budget, std::uint64_t seed) {
    verify::Options opt;
    opt.threads = threads;
    opt.tw_table_path = tw_table;
    opt.scratch_dir = scratch;
    opt.budget = budget;
    opt.base_seed = seed;
    std::filesystem::create_directories(scratch);
    const auto tier = tier_name == "full" ? verify::Tier::full : verify::Tier::quick;
    const auto results = verify::run(tier, opt);
    return verify::report(results) ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(kToolVersion) +
                 " - free energy of the 2-spin spherical SK model from sampled GOE spectra"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = auto, or SSKLAB_THREADS)");
    app.fallthrough();

    auto* sample = app.add_subcommand("sample", "sample spectra and rigidity reports");
    int s_n = 1000, s_count = 1;
    std::uint64_t s_seed = 1;
    std::string s_ensemble = "tridiagonal", s_out = "ssk_samples";
    sample->add_option("--n", s_n, "matrix dimension")->check(CLI::Range(2, 100000));
    sample->add_option("--samples", s_count)->check(CLI::PositiveNumber);
    sample->add_option("--seed", s_seed);
    sample->add_option("--ensemble", s_ensemble)
        ->check(CLI::IsMember({"tridiagonal", "dense", "zero"}));
    sample->add_option("--out", s_out, "output directory");

    auto* fe = app.add_subcommand("free-energy", "evaluate F_n with full breakdown");
    int f_n = 1000, f_count = 1;
    std::uint64_t f_seed = 1;
    std::optional<double> f_beta, f_alpha;
    std::string f_ensemble = "tridiagonal", f_out;
    double f_budget = 1e-9;
    bool f_oracle = false;
    long f_draws = 10L * 1000L * 1000L;
    fe->add_option("--n", f_n)->check(CLI::Range(4, 100000));
    fe->add_option("--beta", f_beta, "inverse temperature (> 0)");
    fe->add_option("--alpha", f_alpha, "critical-window coordinate");
    fe->add_option("--samples", f_count)->check(CLI::PositiveNumber);
    fe->add_option("--seed", f_seed);
    fe->add_option("--ensemble", f_ensemble)
        ->check(CLI::IsMember({"tridiagonal", "dense", "zero"}));
    fe->add_option("--budget", f_budget)->check(CLI::PositiveNumber);
    fe->add_flag("--oracle", f_oracle, "also run the sphere Monte Carlo oracle (n <= 12)");
    fe->add_option("--oracle-draws", f_draws)->check(CLI::PositiveNumber);
    fe->add_option("--out", f_out, "output CSV (default stdout)");

    auto* fl = app.add_subcommand("fluctuations", "run a fluctuation experiment manifest");
    std::vector<int> l_n{1000};
    std::vector<double> l_beta, l_alpha, l_q{5.0};
    int l_samples = 100;
    std::uint64_t l_seed = 1;
    std::string l_ensemble = "tridiagonal", l_out = "ssk_run", l_table;
    double l_budget = 1e-9;
    fl->add_option("--n", l_n, "dimension grid (ascending)");
    fl->add_option("--beta", l_beta, "inverse temperatures");
    fl->add_option("--alpha", l_alpha, "critical-window coordinates");
    fl->add_option("--q", l_q, "edge offsets for X_q");
    fl->add_option("--samples", l_samples)->check(CLI::PositiveNumber);
    fl->add_option("--seed", l_seed);
    fl->add_option("--ensemble", l_ensemble)->check(CLI::IsMember({"tridiagonal", "dense"}));
    fl->add_option("--budget", l_budget)->check(CLI::PositiveNumber);
    fl->add_option("--out", l_out, "output prefix");
    fl->add_option("--tw-table", l_table, "reference quantile table CSV for the edge law");

    auto* ct = app.add_subcommand("contour", "emit the descent contour and integrand profile");
    int c_n = 1000, c_points = 200;
    std::uint64_t c_seed = 1;
    std::optional<double> c_beta, c_alpha;
    double c_max_eta = 0.0;
    std::string c_ensemble = "tridiagonal", c_out = "ssk_";
    ct->add_option("--n", c_n)->check(CLI::Range(4, 100000));
    ct->add_option("--beta", c_beta);
    ct->add_option("--alpha", c_alpha);
    ct->add_option("--points", c_points)->check(CLI::PositiveNumber);
    ct->add_option("--max-eta", c_max_eta, "top of the eta grid (default 0.9 pi / beta)");
    ct->add_option("--seed", c_seed);
    ct->add_option("--ensemble", c_ensemble)
        ->check(CLI::IsMember({"tridiagonal", "dense", "zero"}));
    ct->add_option("--out", c_out, "output file prefix");

    auto* vf = app.add_subcommand("verify", "run the verification suite");
    std::string v_tier = "quick", v_table, v_scratch = "ssk_verify";
    double v_budget = 1e-9;
    std::uint64_t v_seed = 20240901;
    vf->add_option("--tier", v_tier)->check(CLI::IsMember({"quick", "full"}));
    vf->add_option("--tw-table", v_table, "reference quantile table CSV");
    vf->add_option("--scratch", v_scratch, "scratch directory for run files");
    vf->add_option("--budget", v_budget)->check(CLI::PositiveNumber);
    vf->add_option("--seed", v_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sample->parsed()) return cmd_sample(s_n, s_count, s_seed, s_ensemble, s_out);
        if (fe->parsed()) {
            if (f_beta.has_value() == f_alpha.has_value())
                throw CLI::ValidationError("free-energy", "give exactly one of --beta/--alpha");
            const double beta = f_beta ? *f_beta : beta_from_alpha(*f_alpha, f_n);
            if (!(beta > 0.0)) throw CLI::ValidationError("free-energy", "beta must be positive");
            if (f_oracle && f_n > 12)
                throw CLI::ValidationError("free-energy", "--oracle requires n <= 12");
            return cmd_free_energy(f_n, beta, f_count, f_seed, f_ensemble, f_budget, f_oracle,
                                   f_draws, f_out);
        }
        if (fl->parsed()) {
            if (l_beta.empty() == l_alpha.empty())
                throw CLI::ValidationError("fluctuations", "give exactly one of --beta/--alpha");
            ExperimentManifest m;
            m.base_seed = l_seed;
            m.n_grid = l_n;
            m.temperature_kind = l_beta.empty() ? TemperatureKind::alpha : TemperatureKind::beta;
            m.temperatures = l_beta.empty() ? l_alpha : l_beta;
            m.m_samples = l_samples;
            m.q_list = l_q;
            m.ensemble = ensemble_from_name(l_ensemble);
            m.output_path = l_out;
            m.budget = l_budget;
            m.validate();
            return cmd_fluctuations(m, threads, l_table);
        }
        if (ct->parsed()) {
            if (c_beta.has_value() == c_alpha.has_value())
                throw CLI::ValidationError("contour", "give exactly one of --beta/--alpha");
            const double beta = c_beta ? *c_beta : beta_from_alpha(*c_alpha, c_n);
            if (!(beta > 0.0)) throw CLI::ValidationError("contour", "beta must be positive");
            return cmd_contour(c_n, beta, c_seed, c_ensemble, c_points, c_max_eta, c_out);
        }
        if (vf->parsed()) return cmd_verify(v_tier, threads, v_table, v_scratch, v_budget, v_seed);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
