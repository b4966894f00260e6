#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "longnet/network.hpp"
#include "longnet/statistics.hpp"

namespace longnet::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// n rows of n comma-separated 0/1 values, no header. Errors name the offending
/// row (1-based) and are raised as InvalidNetwork.
DirectedNetwork read_adjacency_csv(const fs::path& path, std::vector<std::string> labels = {});
DirectedNetwork parse_adjacency_csv(const std::string& text, std::vector<std::string> labels = {});
void write_adjacency_csv(const DirectedNetwork& net, const fs::path& path);

/// One label per line.
std::vector<std::string> read_labels(const fs::path& path);

/// One numeric value per line (a single CSV column).
std::vector<double> read_vertex_covariate(const fs::path& path);
DyadMatrix read_dyad_matrix_csv(const fs::path& path);
void write_matrix_csv(const DyadMatrix& m, const fs::path& path);

/// Panel manifest:
///   { "waves": ["w1.csv", ...],               // temporal order
///     "labels": "labels.txt",                 // optional
///     "vertex_covariates": {"sex": "sex.csv"},  // optional
///     "dyad_covariates": {"primary": "primary.csv"} }  // optional
/// Relative paths resolve against the manifest's directory.
NetworkPanel read_panel_manifest(const fs::path& manifest);

/// Writes wave_<t>.csv files, covariates and manifest.json into `dir`.
/// Returns the manifest path.
fs::path write_panel(const NetworkPanel& panel, const fs::path& dir);

/// Model configuration: either a bare list of terms or {"terms": [...]}, each
/// term {"kind": ..., "covariate"?: ..., "lag"?: ...}.
std::vector<StatisticSpec> parse_terms(const json& config);
json terms_to_json(const std::vector<StatisticSpec>& specs);
json spec_to_json(const StatisticSpec& spec);

json read_json(const fs::path& path);
/// Pretty-printed with a trailing newline; output is deterministic for equal values.
void write_json(const json& value, const fs::path& path);
void write_text(const std::string& text, const fs::path& path);

}  // namespace longnet::io
