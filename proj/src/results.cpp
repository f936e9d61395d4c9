#include "qflow/results.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace qflow {

namespace {

struct SchemaEntry {
  std::string file;
  std::vector<std::string> columns;
};

const std::map<CsvKind, SchemaEntry>& schemas() {
  static const std::map<CsvKind, SchemaEntry> table = [] {
    std::map<CsvKind, SchemaEntry> t{
        {CsvKind::SsoErrors, {"sso_errors.csv", {"n_nodes", "q", "trial", "error", "exact_error", "mixed_baseline_error"}}},
        {CsvKind::SsoSummary,
         {"sso_summary.csv", {"n_nodes", "q", "min_error", "mean_error", "max_error", "mixed_baseline_error"}}},
        {CsvKind::VlsTrace,
         {"vls_trace.csv", {"problem", "n_qubits", "restart", "iteration", "cost", "fidelity", "best"}}},
        {CsvKind::VlsSummary,
         {"vls_summary.csv",
          {"problem", "n_qubits", "rows", "cols", "layers", "cost_mode", "k_fracture", "k_right_branch", "kappa",
           "best_restart", "best_fidelity", "best_cost", "baseline_fidelity"}}},
        {CsvKind::Pressure,
         {"pressure.csv", {"problem", "row", "col", "fracture", "permeability", "pressure_reference", "pressure_trained"}}},
        {CsvKind::NoiseChecks,
         {"noise_checks.csv", {"check", "trial", "n_qubits", "layers", "p", "max_deviation", "passed"}}},
        {CsvKind::Encoding,
         {"encoding.csv",
          {"rows", "cols", "fracture_count", "padded", "p_fracture_exact", "p_mask_sum", "shots", "p_fracture_shots",
           "sigma", "z_score"}}},
        {CsvKind::Compile,
         {"compile.csv", {"family", "instance", "n_qubits", "cnots", "rotations", "fidelity", "restarts_used", "success"}}},
    };
    for (auto& [kind, entry] : t) entry.columns.insert(entry.columns.begin(), {"seed", "config_hash"});
    return t;
  }();
  return table;
}

}  // namespace

std::string csv_file_name(CsvKind kind) { return schemas().at(kind).file; }

const std::vector<std::string>& csv_schema(CsvKind kind) { return schemas().at(kind).columns; }

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw InternalError("SHA-1 digest failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(CsvKind kind, std::uint64_t seed, std::string config_hash)
    : kind_(kind), prefix_(std::to_string(seed) + "," + config_hash) {}

void CsvTable::add(std::vector<std::string> cells) {
  if (cells.size() + 2 != csv_schema(kind_).size()) {
    throw DimensionError(csv_file_name(kind_) + ": row has " + std::to_string(cells.size()) + " cells, schema needs " +
                         std::to_string(csv_schema(kind_).size() - 2));
  }
  for (const auto& c : cells) {
    if (c.find_first_of(",\n\"") != std::string::npos) throw ValidationError("CSV cell needs quoting: " + c);
  }
  rows_.push_back(std::move(cells));
}

void CsvTable::sort_rows() { std::stable_sort(rows_.begin(), rows_.end()); }

std::string CsvTable::render() const {
  std::string out;
  const auto& header = csv_schema(kind_);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    out += prefix_;
    for (const auto& cell : row) {
      out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& directory) const {
  std::filesystem::create_directories(directory);
  const auto path = std::filesystem::path(directory) / csv_file_name(kind_);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << render();
}

ParsedCsv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  ParsedCsv out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (first) {
      out.header = std::move(cells);
      first = false;
    } else {
      out.rows.push_back(std::move(cells));
    }
  }
  return out;
}

nlohmann::json to_json(const CircuitTemplate& circuit, const Params& params) {
  nlohmann::json j;
  j["template"] = {
      {"kind", "ry-cz-layered"},
      {"n_qubits", circuit.n_qubits},
      {"n_layers", circuit.n_layers},
      {"parameter_count", circuit.parameter_count()},
      {"layout", "ry column; per layer: cz (0,1),(2,3),..; ry column; cz (1,2),(3,4),..; ry column"},
  };
  j["params"] = std::vector<double>(params.data(), params.data() + params.size());
  return j;
}

nlohmann::json to_json(const TrainResult& result) {
  nlohmann::json restarts = nlohmann::json::array();
  for (const auto& t : result.traces) {
    restarts.push_back({
        {"restart", t.restart},
        {"seed", t.seed},
        {"iterations", t.points.empty() ? 0 : t.points.back().iteration},
        {"diverged", t.diverged},
        {"final_cost", t.final_cost},
        {"final_fidelity", t.final_fidelity},
    });
  }
  return {
      {"best_restart", result.best_restart},
      {"best_fidelity", result.best_fidelity},
      {"best_cost", result.best_cost},
      {"restarts", restarts},
  };
}

nlohmann::json to_json(const std::vector<CompiledGate>& gates) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : gates) {
    nlohmann::json item{{"gate", g.name}, {"qubits", g.targets}};
    if (g.name != "cx") item["angle"] = g.angle;
    out.push_back(std::move(item));
  }
  return out;
}

nlohmann::json to_json(const SmartPermutation& perm) {
  return {
      {"n_qubits", perm.n_qubits},
      {"readout_qubit", perm.readout_qubit},
      {"fracture_count", perm.fracture_count},
      {"padded", perm.padded},
      {"mapping", perm.mapping},
  };
}

void write_json(const std::string& path, const nlohmann::json& value) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << value.dump(2) << '\n';
}

nlohmann::json to_json(const Manifest& m) {
  return {
      {"experiment", m.experiment},
      {"config", m.config_text},
      {"config_hash", m.config_hash},
      {"seed", m.seed},
      {"seeds", m.seeds},
      {"wall_seconds", m.wall_seconds},
      {"status", m.status},
      {"files", m.files},
      {"failures", m.failures},
      {"summary", m.summary},
  };
}

}  // namespace qflow
