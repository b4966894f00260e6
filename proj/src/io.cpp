#include "longnet/io.hpp"

#include <fstream>
#include <sstream>

#include "longnet/error.hpp"

namespace longnet::io {

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ls(line);
  while (std::getline(ls, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::vector<std::string> nonempty_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": '" + s + "' is not a number");
  }
}

fs::path resolve(const fs::path& base, const std::string& rel) {
  fs::path p(rel);
  return p.is_absolute() ? p : base / p;
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

DirectedNetwork parse_adjacency_csv(const std::string& text, std::vector<std::string> labels) {
  const auto lines = nonempty_lines(text);
  const std::size_t n = lines.size();
  if (n == 0) throw InvalidNetwork("adjacency matrix is empty");
  std::vector<std::vector<int>> rows(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != n) {
      throw InvalidNetwork("row " + std::to_string(r + 1) + " has " +
                           std::to_string(fields.size()) + " entries, expected " +
                           std::to_string(n));
    }
    rows[r].reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (fields[c] == "0")
        rows[r].push_back(0);
      else if (fields[c] == "1")
        rows[r].push_back(1);
      else
        throw InvalidNetwork("row " + std::to_string(r + 1) + " column " + std::to_string(c + 1) +
                             ": expected 0 or 1, got '" + fields[c] + "'");
    }
  }
  return DirectedNetwork::from_rows(rows, std::move(labels));
}

DirectedNetwork read_adjacency_csv(const fs::path& path, std::vector<std::string> labels) {
  try {
    return parse_adjacency_csv(slurp(path), std::move(labels));
  } catch (const InvalidNetwork& e) {
    throw InvalidNetwork(path.string() + ": " + e.what());
  }
}

void write_adjacency_csv(const DirectedNetwork& net, const fs::path& path) {
  std::string out;
  const std::size_t n = net.size();
  out.reserve(n * n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out += net.tie(i, j) ? '1' : '0';
      out += (j + 1 < n) ? ',' : '\n';
    }
  }
  write_text(out, path);
}

std::vector<std::string> read_labels(const fs::path& path) { return nonempty_lines(slurp(path)); }

std::vector<double> read_vertex_covariate(const fs::path& path) {
  std::vector<double> values;
  std::size_t r = 0;
  for (const auto& line : nonempty_lines(slurp(path)))
    values.push_back(parse_number(line, path.string() + " row " + std::to_string(++r)));
  return values;
}

DyadMatrix read_dyad_matrix_csv(const fs::path& path) {
  const auto lines = nonempty_lines(slurp(path));
  const std::size_t n = lines.size();
  DyadMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto fields = split_fields(lines[r]);
    if (fields.size() != n) {
      throw ConfigError(path.string() + ": row " + std::to_string(r + 1) + " has " +
                        std::to_string(fields.size()) + " entries, expected " + std::to_string(n));
    }
    for (std::size_t c = 0; c < n; ++c)
      m(r, c) = parse_number(fields[c], path.string() + " row " + std::to_string(r + 1));
  }
  return m;
}

void write_matrix_csv(const DyadMatrix& m, const fs::path& path) {
  std::string out;
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = 0; j < m.n; ++j) {
      out += format_number(m(i, j));
      out += (j + 1 < m.n) ? ',' : '\n';
    }
  }
  write_text(out, path);
}

NetworkPanel read_panel_manifest(const fs::path& manifest) {
  const json doc = read_json(manifest);
  const fs::path base = manifest.parent_path();
  if (!doc.is_object() || !doc.contains("waves") || !doc["waves"].is_array())
    throw ConfigError(manifest.string() + ": missing key 'waves'");

  std::vector<std::string> labels;
  if (doc.contains("labels")) labels = read_labels(resolve(base, doc["labels"].get<std::string>()));

  std::vector<DirectedNetwork> waves;
  for (const auto& w : doc["waves"])
    waves.push_back(read_adjacency_csv(resolve(base, w.get<std::string>()), labels));

  Covariates covs;
  if (doc.contains("vertex_covariates")) {
    for (const auto& [name, path] : doc["vertex_covariates"].items())
      covs.vertex[name] = read_vertex_covariate(resolve(base, path.get<std::string>()));
  }
  if (doc.contains("dyad_covariates")) {
    for (const auto& [name, path] : doc["dyad_covariates"].items())
      covs.dyad[name] = read_dyad_matrix_csv(resolve(base, path.get<std::string>()));
  }
  return NetworkPanel(std::move(waves), std::move(covs));
}

fs::path write_panel(const NetworkPanel& panel, const fs::path& dir) {
  fs::create_directories(dir);
  json doc;
  doc["waves"] = json::array();
  for (std::size_t t = 0; t < panel.wave_count(); ++t) {
    const std::string name = "wave_" + std::to_string(t + 1) + ".csv";
    write_adjacency_csv(panel.wave(t), dir / name);
    doc["waves"].push_back(name);
  }
  std::string labels;
  for (const auto& l : panel.wave(0).labels()) labels += l + "\n";
  write_text(labels, dir / "labels.txt");
  doc["labels"] = "labels.txt";
  for (const auto& [name, values] : panel.covariates().vertex) {
    std::string text;
    for (double v : values) text += format_number(v) + "\n";
    const std::string file = "vcov_" + name + ".csv";
    write_text(text, dir / file);
    doc["vertex_covariates"][name] = file;
  }
  for (const auto& [name, matrix] : panel.covariates().dyad) {
    const std::string file = "dcov_" + name + ".csv";
    write_matrix_csv(matrix, dir / file);
    doc["dyad_covariates"][name] = file;
  }
  const fs::path manifest = dir / "manifest.json";
  write_json(doc, manifest);
  return manifest;
}

std::vector<StatisticSpec> parse_terms(const json& config) {
  const json* list = &config;
  if (config.is_object()) {
    if (!config.contains("terms")) throw ConfigError("model configuration: missing key 'terms'");
    list = &config["terms"];
  }
  if (!list->is_array() || list->empty())
    throw ConfigError("model configuration: 'terms' must be a nonempty list");
  std::vector<StatisticSpec> specs;
  for (const auto& entry : *list) {
    if (!entry.is_object() || !entry.contains("kind"))
      throw ConfigError("model configuration: every term needs a 'kind'");
    StatisticSpec spec = StatisticSpec::of(parse_kind(entry["kind"].get<std::string>()));
    if (entry.contains("covariate")) spec.covariate = entry["covariate"].get<std::string>();
    if (entry.contains("lag")) spec.lag = entry["lag"].get<int>();
    validate_spec(spec);
    specs.push_back(std::move(spec));
  }
  return specs;
}

json spec_to_json(const StatisticSpec& spec) {
  json j;
  j["kind"] = std::string(kind_name(spec.kind));
  if (!spec.covariate.empty()) j["covariate"] = spec.covariate;
  if (is_memory(spec.kind)) j["lag"] = spec.lag;
  return j;
}

json terms_to_json(const std::vector<StatisticSpec>& specs) {
  json list = json::array();
  for (const auto& s : specs) list.push_back(spec_to_json(s));
  return list;
}

json read_json(const fs::path& path) {
  try {
    return json::parse(slurp(path));
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": invalid JSON: " + e.what());
  }
}

void write_json(const json& value, const fs::path& path) { write_text(value.dump(2) + "\n", path); }

void write_text(const std::string& text, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace longnet::io
