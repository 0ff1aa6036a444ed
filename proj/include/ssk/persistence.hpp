#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssk/experiment.hpp"
#include "ssk/stats.hpp"

namespace ssk {

// Record files are JSON lines, one record per line, numeric fields printed
// with 17 significant digits so doubles round-trip exactly.  '#' lines are
// comments; a complete file ends with a '# ssk-records-complete' marker.

long write_records(const std::string& path, const std::vector<FluctuationRecord>& records);

std::vector<FluctuationRecord> read_records(const std::string& path);

// True when the file carries the trailing completion marker (detects
// interrupted writes).
bool records_file_complete(const std::string& path);

struct SummaryRow {
    int n = 0;
    double beta = 0.0;
    double alpha = 0.0;
    double q = 0.0;
    long samples = 0;
    long errors = 0;
    std::optional<MomentSummary> y;
    std::optional<MomentSummary> x_q_normalized; // X_q / sqrt(2 log(n) / 3)
    std::optional<MomentSummary> lambda1_scaled;
    std::optional<MomentSummary> tw;
    std::optional<double> ks_y_normal;
    std::optional<double> ks_xq_normal;
    std::optional<double> ks_lambda1_tw1; // when a reference table is given
};

// Per-(n, beta, q) summaries; permutation-invariant in record order.
std::vector<SummaryRow> summarize(const std::vector<FluctuationRecord>& records,
                                  const ReferenceTable* tw1 = nullptr);

std::string summary_to_csv(const std::vector<SummaryRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows,
                       const std::string& comment = "");

// A run artifact is the triple written next to `prefix`:
//   <prefix>.jsonl          records (with completion marker)
//   <prefix>.manifest.json  manifest + tool version, round-trips losslessly
//   <prefix>.summary.csv    summary rows
struct RunArtifact {
    ExperimentManifest manifest;
    std::string tool_version;
    std::vector<FluctuationRecord> records;
    std::vector<SummaryRow> summary;
};

void write_artifact(const std::string& prefix, const RunArtifact& artifact,
                    const ReferenceTable* tw1 = nullptr);
RunArtifact read_artifact(const std::string& prefix);

std::string manifest_to_json(const ExperimentManifest& m, const std::string& tool_version);
ExperimentManifest manifest_from_json(const std::string& text, std::string* tool_version = nullptr);

} // namespace ssk
