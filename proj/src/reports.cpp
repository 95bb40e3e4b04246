#include "cplab/reports.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cplab {

namespace {

// The writer pins the three canonical quantile columns.
constexpr std::array<double, 3> kCsvLevels = {0.5, 0.9, 0.95};

std::array<std::size_t, 3> csv_level_indices(const ExperimentSummary& summary) {
    std::array<std::size_t, 3> idx{};
    for (std::size_t c = 0; c < kCsvLevels.size(); ++c) {
        bool found = false;
        for (std::size_t i = 0; i < summary.quantile_levels.size(); ++i) {
            if (std::abs(summary.quantile_levels[i] - kCsvLevels[c]) < 1e-12) {
                idx[c] = i;
                found = true;
                break;
            }
        }
        if (!found)
            throw ConfigError("write_summary: quantile level " + format_double(kCsvLevels[c]) +
                              " missing from experiment.quantile_levels");
    }
    return idx;
}

} // namespace

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw ConfigError("unknown output format: " + name);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string summary_to_csv(const ExperimentSummary& summary) {
    const auto idx = csv_level_indices(summary);
    std::string out = "n,n1,n2,replications,bound,satisfaction_fraction,"
                      "err_q50,err_q90,err_q95,zs_q50,zs_q90,zs_q95\n";
    for (const auto& row : summary.rows) {
        out += std::to_string(row.n) + ',' + std::to_string(row.n1) + ',' +
               std::to_string(row.n2) + ',' + std::to_string(row.replications) + ',' +
               format_double(row.bound) + ',' + format_double(row.satisfaction_fraction);
        for (std::size_t c = 0; c < idx.size(); ++c)
            out += ',' + format_double(row.err_quantiles[idx[c]]);
        for (std::size_t c = 0; c < idx.size(); ++c)
            out += ',' + format_double(row.zs_quantiles[idx[c]]);
        out += '\n';
    }
    return out;
}

std::string summary_to_json_text(const ExperimentSummary& summary) {
    const auto idx = csv_level_indices(summary);
    nlohmann::ordered_json doc;
    doc["quantile_levels"] = summary.quantile_levels;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : summary.rows) {
        nlohmann::ordered_json r;
        r["n"] = row.n;
        r["n1"] = row.n1;
        r["n2"] = row.n2;
        r["replications"] = row.replications;
        r["bound"] = row.bound;
        r["satisfaction_fraction"] = row.satisfaction_fraction;
        r["err_q50"] = row.err_quantiles[idx[0]];
        r["err_q90"] = row.err_quantiles[idx[1]];
        r["err_q95"] = row.err_quantiles[idx[2]];
        r["zs_q50"] = row.zs_quantiles[idx[0]];
        r["zs_q90"] = row.zs_quantiles[idx[1]];
        r["zs_q95"] = row.zs_quantiles[idx[2]];
        r["err_quantiles"] = row.err_quantiles;
        r["zs_quantiles"] = row.zs_quantiles;
        doc["rows"].push_back(std::move(r));
    }
    return doc.dump(2) + "\n";
}

ExperimentSummary summary_from_json_text(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    ExperimentSummary summary;
    summary.quantile_levels = doc.at("quantile_levels").get<std::vector<double>>();
    for (const auto& r : doc.at("rows")) {
        SummaryRow row;
        row.n = r.at("n").get<long>();
        row.n1 = r.at("n1").get<long>();
        row.n2 = r.at("n2").get<long>();
        row.replications = r.at("replications").get<long>();
        row.bound = r.at("bound").get<double>();
        row.satisfaction_fraction = r.at("satisfaction_fraction").get<double>();
        row.err_quantiles = r.at("err_quantiles").get<std::vector<double>>();
        row.zs_quantiles = r.at("zs_quantiles").get<std::vector<double>>();
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

void write_summary(const ExperimentSummary& summary, OutputFormat format,
                   const std::string& path) {
    summary.validate();
    if (summary.rows.empty()) throw ConfigError("write_summary: no rows to write");
    write_text_file(path, format == OutputFormat::csv ? summary_to_csv(summary)
                                                      : summary_to_json_text(summary));
}

std::string dataset_to_csv(const Dataset& data) {
    data.validate();
    std::string out;
    for (long j = 0; j < data.p(); ++j) out += "x" + std::to_string(j + 1) + ",";
    out += "y\n";
    for (long i = 0; i < data.n(); ++i) {
        for (long j = 0; j < data.p(); ++j) out += format_double(data.x(i, j)) + ",";
        out += format_double(data.y[i]) + "\n";
    }
    return out;
}

Dataset dataset_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("dataset csv: empty input");
    long p = 0;
    for (char c : line)
        if (c == ',') ++p; // p regressor columns before y
    if (p < 1) throw ConfigError("dataset csv: need at least one x column and y");
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) row.push_back(std::stod(tok));
        if (static_cast<long>(row.size()) != p + 1)
            throw ConfigError("dataset csv: row " + std::to_string(rows.size() + 2) + " has " +
                              std::to_string(row.size()) + " fields, expected " +
                              std::to_string(p + 1));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ConfigError("dataset csv: no data rows");
    Dataset data;
    data.x.resize(static_cast<long>(rows.size()), p);
    data.y.resize(static_cast<long>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (long j = 0; j < p; ++j) data.x(static_cast<long>(i), j) = rows[i][static_cast<std::size_t>(j)];
        data.y[static_cast<long>(i)] = rows[i].back();
    }
    data.validate();
    return data;
}

Dataset read_dataset_csv(const std::string& path) {
    return dataset_from_csv_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
    nlohmann::ordered_json doc;
    doc["artifact_version"] = manifest.artifact_version;
    doc["command"] = manifest.command;
    doc["master_seed"] = manifest.master_seed;
    doc["format"] = manifest.format;
    doc["config"] = manifest.config;
    doc["started_at"] = manifest.started_at;
    doc["finished_at"] = manifest.finished_at;
    doc["outputs"] = manifest.outputs;
    write_text_file(path, doc.dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
    const auto doc = nlohmann::json::parse(read_text_file(path));
    RunManifest m;
    m.artifact_version = doc.at("artifact_version").get<std::string>();
    m.command = doc.at("command").get<std::string>();
    m.master_seed = doc.at("master_seed").get<std::uint64_t>();
    m.format = doc.at("format").get<std::string>();
    m.config = doc.at("config").get<std::map<std::string, std::string>>();
    m.started_at = doc.at("started_at").get<std::string>();
    m.finished_at = doc.at("finished_at").get<std::string>();
    m.outputs = doc.at("outputs").get<std::vector<std::string>>();
    return m;
}

} // namespace cplab
