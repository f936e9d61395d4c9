#pragma once

// Result files. Every CSV starts with the `seed` and `config_hash` columns;
// the remaining columns per file are fixed by `csv_schema` and documented in
// docs/results.md. Numbers are written in shortest round-trip form so reruns
// are byte-identical.

#include "qflow/ansatz.hpp"
#include "qflow/compile.hpp"
#include "qflow/encode.hpp"
#include "qflow/vls.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qflow {

enum class CsvKind {
  SsoErrors,
  SsoSummary,
  VlsTrace,
  VlsSummary,
  Pressure,
  NoiseChecks,
  Encoding,
  Compile,
};

/// File name, e.g. "sso_errors.csv".
std::string csv_file_name(CsvKind kind);
/// Full header, including the leading seed and config_hash columns.
const std::vector<std::string>& csv_schema(CsvKind kind);

/// Git blob hash: SHA-1 over "blob <size>\0" followed by the content.
std::string git_blob_sha1(std::string_view content);

std::string format_number(double v);

class CsvTable {
 public:
  CsvTable(CsvKind kind, std::uint64_t seed, std::string config_hash);

  CsvKind kind() const { return kind_; }
  std::size_t row_count() const { return rows_.size(); }

  /// Appends a row; `cells` covers the columns after seed and config_hash.
  void add(std::vector<std::string> cells);

  /// Orders rows by their cell text so output does not depend on the order
  /// concurrent work finished in. Callers that already add rows in a fixed
  /// order need not call it.
  void sort_rows();

  std::string render() const;
  void write(const std::string& directory) const;

 private:
  CsvKind kind_;
  std::string prefix_;
  std::vector<std::vector<std::string>> rows_;
};

/// Header and rows of a CSV written by CsvTable (no quoting is ever needed).
struct ParsedCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
ParsedCsv read_csv(const std::string& path);

nlohmann::json to_json(const CircuitTemplate& circuit, const Params& params);
nlohmann::json to_json(const TrainResult& result);
nlohmann::json to_json(const std::vector<CompiledGate>& gates);
nlohmann::json to_json(const SmartPermutation& perm);

void write_json(const std::string& path, const nlohmann::json& value);

struct Manifest {
  std::string experiment;
  std::string config_text;
  std::string config_hash;
  std::uint64_t seed = 0;
  nlohmann::json seeds = nlohmann::json::object();  ///< named sub-streams used
  double wall_seconds = 0.0;
  std::string status;  ///< "ok", "checks-failed" or "error"
  std::vector<std::string> files;
  std::vector<std::string> failures;
  nlohmann::json summary = nlohmann::json::object();
};

nlohmann::json to_json(const Manifest& manifest);

}  // namespace qflow
