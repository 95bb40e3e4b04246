#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cplab/lemma.hpp"

namespace cplab {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

// Shortest round-trip decimal rendering, locale independent.
std::string format_double(double v);

// Emitted next to every result file; carries everything needed to replay the
// run bit-for-bit (timestamps excepted, they describe the original run).
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config; // resolved flat snapshot
    std::uint64_t master_seed = 0;
    std::string artifact_version = kArtifactVersion;
    std::string format;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> outputs;
};

void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest read_manifest(const std::string& path);

// CSV columns, fixed: n,n1,n2,replications,bound,satisfaction_fraction,
// err_q50,err_q90,err_q95,zs_q50,zs_q90,zs_q95.  The summary must therefore
// carry quantile levels 0.5, 0.9 and 0.95.  JSON mirrors the same keys.
std::string summary_to_csv(const ExperimentSummary& summary);
std::string summary_to_json_text(const ExperimentSummary& summary);
ExperimentSummary summary_from_json_text(const std::string& text);

void write_summary(const ExperimentSummary& summary, OutputFormat format,
                   const std::string& path);

// Dataset exchange format: header x1,...,xp,y then one row per observation.
std::string dataset_to_csv(const Dataset& data);
Dataset dataset_from_csv_text(const std::string& text);
Dataset read_dataset_csv(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string utc_timestamp();

} // namespace cplab
