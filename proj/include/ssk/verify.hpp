#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ssk::verify {

enum class Tier { quick, full };

struct Options {
    int threads = 0;                       // 0 = auto
    std::string tw_table_path;             // optional external reference table
    std::string scratch_dir = ".";         // where determinism/artifact checks write
    double budget = 1e-9;                  // quadrature budget
    std::uint64_t base_seed = 20240901;    // seed for every stochastic check
};

struct CheckResult {
    std::string name;
    bool pass = false;
    // Marks checks that probe asymptotic standardizations known not to have
    // converged at desk scale (documented in the README); they print XFAIL
    // with their measured numbers and do not fail the suite.
    bool expected_fail = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the verification suite.  quick = the tight exactness and oracle
// checks; full adds the spectral, distributional and engineering checks.
std::vector<CheckResult> run(Tier tier, const Options& options);

// Prints one pass/fail line per check; returns true when every check either
// passed or was an expected desk-scale failure.
bool report(const std::vector<CheckResult>& results);

} // namespace ssk::verify
