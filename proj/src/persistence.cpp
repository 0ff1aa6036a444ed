#include "ssk/persistence.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ssk {

namespace {

constexpr const char* kCompleteMarker = "# ssk-records-complete";

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void append_field(std::string& line, const char* key, const std::string& raw, bool& first) {
    if (!first) line += ',';
    first = false;
    line += '"';
    line += key;
    line += "\":";
    line += raw;
}

std::string record_to_json(const FluctuationRecord& r) {
    std::string line = "{";
    bool first = true;
    append_field(line, "n", std::to_string(r.n), first);
    append_field(line, "beta", fmt17(r.beta), first);
    append_field(line, "alpha", fmt17(r.alpha), first);
    append_field(line, "q", fmt17(r.q), first);
    append_field(line, "base_seed", std::to_string(r.base_seed), first);
    append_field(line, "sample_index", std::to_string(r.sample_index), first);
    if (r.error) {
        append_field(line, "error", nlohmann::json(*r.error).dump(), first);
        append_field(line, "regime", nlohmann::json(r.regime).dump(), first);
        line += '}';
        return line;
    }
    append_field(line, "f_n", fmt17(r.f_n), first);
    append_field(line, "y_n", fmt17(r.y_n), first);
    append_field(line, "x_q", fmt17(r.x_q), first);
    append_field(line, "lambda1_scaled", fmt17(r.lambda1_scaled), first);
    append_field(line, "saddle_delta", fmt17(r.saddle_delta), first);
    if (r.tw_stat) append_field(line, "tw_stat", fmt17(*r.tw_stat), first);
    if (r.ht_residual) append_field(line, "ht_residual", fmt17(*r.ht_residual), first);
    if (r.lt_residual) append_field(line, "lt_residual", fmt17(*r.lt_residual), first);
    append_field(line, "regime", nlohmann::json(r.regime).dump(), first);
    for (const auto& [key, raw] : r.extras) append_field(line, key.c_str(), raw, first);
    line += '}';
    return line;
}

bool known_record_key(const std::string& k) {
    static const char* keys[] = {"n",       "beta",        "alpha",          "q",
                                 "base_seed", "sample_index", "f_n",          "y_n",
                                 "x_q",     "lambda1_scaled", "saddle_delta", "tw_stat",
                                 "ht_residual", "lt_residual", "regime",      "error"};
    for (const char* key : keys)
        if (k == key) return true;
    return false;
}

FluctuationRecord record_from_json(const nlohmann::json& j, long line_no,
                                   const std::string& path) {
    try {
        FluctuationRecord r;
        r.n = j.at("n").get<int>();
        r.beta = j.at("beta").get<double>();
        r.alpha = j.at("alpha").get<double>();
        r.q = j.at("q").get<double>();
        r.base_seed = j.at("base_seed").get<std::uint64_t>();
        r.sample_index = j.at("sample_index").get<std::uint64_t>();
        if (j.contains("regime")) r.regime = j.at("regime").get<std::string>();
        if (j.contains("error")) {
            r.error = j.at("error").get<std::string>();
            return r;
        }
        r.f_n = j.at("f_n").get<double>();
        r.y_n = j.at("y_n").get<double>();
        r.x_q = j.at("x_q").get<double>();
        r.lambda1_scaled = j.at("lambda1_scaled").get<double>();
        if (j.contains("saddle_delta")) r.saddle_delta = j.at("saddle_delta").get<double>();
        if (j.contains("tw_stat")) r.tw_stat = j.at("tw_stat").get<double>();
        if (j.contains("ht_residual")) r.ht_residual = j.at("ht_residual").get<double>();
        if (j.contains("lt_residual")) r.lt_residual = j.at("lt_residual").get<double>();
        for (const auto& [key, value] : j.items())
            if (!known_record_key(key)) r.extras.emplace_back(key, value.dump());
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": bad record: " + e.what());
    }
}

} // namespace

long write_records(const std::string& path, const std::vector<FluctuationRecord>& records) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_records: cannot open " + path);
    for (const FluctuationRecord& r : records) out << record_to_json(r) << '\n';
    out << kCompleteMarker << " count=" << records.size() << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write_records: write failed for " + path);
    return static_cast<long>(records.size());
}

std::vector<FluctuationRecord> read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records: cannot open " + path);
    std::vector<FluctuationRecord> records;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": malformed JSON");
        records.push_back(record_from_json(j, line_no, path));
    }
    return records;
}

bool records_file_complete(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("records_file_complete: cannot open " + path);
    std::string line, last_nonempty;
    while (std::getline(in, line))
        if (!line.empty()) last_nonempty = line;
    return last_nonempty.rfind(kCompleteMarker, 0) == 0;
}

std::vector<SummaryRow> summarize(const std::vector<FluctuationRecord>& records,
                                  const ReferenceTable* tw1) {
    struct Key {
        int n;
        double beta;
        double q;
        bool operator<(const Key& o) const {
            if (n != o.n) return n < o.n;
            if (beta != o.beta) return beta < o.beta;
            return q < o.q;
        }
    };
    struct Cell {
        double alpha = 0.0;
        long errors = 0;
        std::vector<double> y, xq, l1, tw;
    };
    std::map<Key, Cell> cells;
    for (const FluctuationRecord& r : records) {
        Cell& c = cells[{r.n, r.beta, r.q}];
        c.alpha = r.alpha;
        if (r.error) {
            ++c.errors;
            continue;
        }
        c.y.push_back(r.y_n);
        const double log_n = std::log(static_cast<double>(r.n));
        c.xq.push_back(r.x_q / std::sqrt(2.0 * log_n / 3.0));
        c.l1.push_back(r.lambda1_scaled);
        if (r.tw_stat) c.tw.push_back(*r.tw_stat);
    }

    std::vector<SummaryRow> rows;
    rows.reserve(cells.size());
    for (const auto& [key, cell] : cells) {
        SummaryRow row;
        row.n = key.n;
        row.beta = key.beta;
        row.alpha = cell.alpha;
        row.q = key.q;
        row.samples = static_cast<long>(cell.y.size());
        row.errors = cell.errors;
        if (cell.y.size() >= 2) {
            row.y = moment_summary(cell.y);
            row.x_q_normalized = moment_summary(cell.xq);
            row.lambda1_scaled = moment_summary(cell.l1);
            row.ks_y_normal = ks_statistic(cell.y, standard_normal_cdf);
            row.ks_xq_normal = ks_statistic(cell.xq, standard_normal_cdf);
            if (tw1)
                row.ks_lambda1_tw1 =
                    ks_statistic(cell.l1, [&](double x) { return tw1->cdf(x); });
        }
        if (cell.tw.size() >= 2) row.tw = moment_summary(cell.tw);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

void csv_moments(std::ostringstream& out, const std::optional<MomentSummary>& m) {
    if (m) {
        out << ',' << fmt17(m->mean) << ',' << fmt17(m->variance) << ',' << fmt17(m->skewness);
    } else {
        out << ",,,";
    }
}

void csv_optional(std::ostringstream& out, const std::optional<double>& v) {
    if (v)
        out << ',' << fmt17(*v);
    else
        out << ',';
}

} // namespace

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream out;
    out << "n,beta,alpha,q,samples,errors,"
           "y_mean,y_var,y_skew,"
           "xq_norm_mean,xq_norm_var,xq_norm_skew,"
           "lambda1_mean,lambda1_var,lambda1_skew,"
           "tw_mean,tw_var,tw_skew,"
           "ks_y_normal,ks_xq_normal,ks_lambda1_tw1\n";
    for (const SummaryRow& r : rows) {
        out << r.n << ',' << fmt17(r.beta) << ',' << fmt17(r.alpha) << ',' << fmt17(r.q) << ','
            << r.samples << ',' << r.errors;
        csv_moments(out, r.y);
        csv_moments(out, r.x_q_normalized);
        csv_moments(out, r.lambda1_scaled);
        csv_moments(out, r.tw);
        csv_optional(out, r.ks_y_normal);
        csv_optional(out, r.ks_xq_normal);
        csv_optional(out, r.ks_lambda1_tw1);
        out << '\n';
    }
    return out.str();
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows,
                       const std::string& comment) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
    if (!comment.empty()) out << "# " << comment << '\n';
    out << summary_to_csv(rows);
    if (!out) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

std::string manifest_to_json(const ExperimentManifest& m, const std::string& tool_version) {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    nlohmann::json mj;
    mj["base_seed"] = m.base_seed;
    mj["n_grid"] = m.n_grid;
    mj["temperature_kind"] = m.temperature_kind == TemperatureKind::beta ? "beta" : "alpha";
    mj["temperatures"] = m.temperatures;
    mj["m_samples"] = m.m_samples;
    mj["q_list"] = m.q_list;
    mj["ensemble"] = ensemble_name(m.ensemble);
    mj["output_path"] = m.output_path;
    mj["budget"] = m.budget;
    j["manifest"] = std::move(mj);
    return j.dump(2);
}

ExperimentManifest manifest_from_json(const std::string& text, std::string* tool_version) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (tool_version) *tool_version = j.value("tool_version", "");
    const nlohmann::json& mj = j.at("manifest");
    ExperimentManifest m;
    m.base_seed = mj.at("base_seed").get<std::uint64_t>();
    m.n_grid = mj.at("n_grid").get<std::vector<int>>();
    m.temperature_kind = mj.at("temperature_kind").get<std::string>() == "alpha"
                             ? TemperatureKind::alpha
                             : TemperatureKind::beta;
    m.temperatures = mj.at("temperatures").get<std::vector<double>>();
    m.m_samples = mj.at("m_samples").get<int>();
    m.q_list = mj.at("q_list").get<std::vector<double>>();
    m.ensemble = ensemble_from_name(mj.at("ensemble").get<std::string>());
    m.output_path = mj.value("output_path", "");
    m.budget = mj.at("budget").get<double>();
    return m;
}

void write_artifact(const std::string& prefix, const RunArtifact& artifact,
                    const ReferenceTable* tw1) {
    write_records(prefix + ".jsonl", artifact.records);
    {
        std::ofstream out(prefix + ".manifest.json", std::ios::trunc);
        if (!out) throw std::runtime_error("write_artifact: cannot open " + prefix + ".manifest.json");
        out << manifest_to_json(artifact.manifest, artifact.tool_version) << '\n';
    }
    const std::vector<SummaryRow> rows =
        artifact.summary.empty() ? summarize(artifact.records, tw1) : artifact.summary;
    write_summary_csv(prefix + ".summary.csv", rows, artifact.tool_version);
}

RunArtifact read_artifact(const std::string& prefix) {
    RunArtifact a;
    {
        std::ifstream in(prefix + ".manifest.json");
        if (!in) throw std::runtime_error("read_artifact: cannot open " + prefix + ".manifest.json");
        std::ostringstream text;
        text << in.rdbuf();
        a.manifest = manifest_from_json(text.str(), &a.tool_version);
    }
    a.records = read_records(prefix + ".jsonl");
    a.summary = summarize(a.records);
    return a;
}

} // namespace ssk
