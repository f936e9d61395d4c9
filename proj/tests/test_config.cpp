#include "qflow/config.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace qflow;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("qflow_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

bool names(const std::vector<Diagnostic>& d, const std::string& field) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.field == field; });
}

}  // namespace

TEST_CASE("a valid file parses with sections and arrays") {
  const std::string path = write_temp("ok.toml",
                                      "experiment = \"sso-sweep\"\nseed = 9\n[problem]\nn = 8\n"
                                      "[sso]\nq = [10, 100]\nexact = true\n");
  CHECK(validate_file(path).empty());
  std::vector<Diagnostic> d;
  const ExperimentConfig c = apply_config({}, read_config_file(path), d);
  CHECK(d.empty());
  CHECK(c.seed == 9);
  CHECK(c.problem.n_nodes == 8);
  CHECK(c.sso.q_grid == std::vector<int>{10, 100});
  CHECK(c.sso.exact_state);
}

TEST_CASE("diagnostics name the offending field") {
  std::vector<Diagnostic> d;
  apply_config({}, {{"vls.restarts", "0"}}, d);
  REQUIRE(d.size() == 1);
  CHECK(d[0].field == "vls.restarts");

  d.clear();
  apply_config({}, {{"sso.q", "10,0"}, {"vls.colour", "red"}, {"seed", "x"}, {"experiment", "nope"}}, d);
  CHECK(names(d, "sso.q"));
  CHECK(names(d, "vls.colour"));
  CHECK(names(d, "seed"));
  CHECK(names(d, "experiment"));

  ExperimentConfig c;
  c.problem.rows = 3;
  c.experiment = ExperimentKind::VlsPitchfork5q;
  CHECK(names(validate(c), "problem.rows"));

  CHECK(names(validate_file("/nonexistent/qflow.toml"), "<file>"));
}

TEST_CASE("canonical text round-trips and ignores the output directory") {
  ExperimentConfig c;
  c.experiment = ExperimentKind::VlsScaling;
  c.seed = 123;
  c.vls.layers = 6;
  c.vls.qubits = {5, 7};
  c.problem.k_fracture = 0.1;
  c.noise.p_grid = {0.0, 0.3};
  const std::string text = canonical_text(c);

  ConfigValues values;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    REQUIRE(eq != std::string::npos);
    values[line.substr(0, eq)] = line.substr(eq + 3);
  }
  std::vector<Diagnostic> d;
  const ExperimentConfig back = apply_config({}, values, d);
  CHECK(d.empty());
  CHECK(canonical_text(back) == text);

  ExperimentConfig moved = c;
  moved.output_dir = "elsewhere";
  CHECK(canonical_text(moved) == text);

  for (const auto& key : known_keys()) {
    if (key != "output") CHECK(values.count(key) == 1);
  }
}

TEST_CASE("experiment names") {
  for (const auto& name : experiment_names()) CHECK(to_string(experiment_from_string(name)) == name);
  CHECK(experiment_names().size() == 7);
  CHECK_THROWS_AS(experiment_from_string("qaoa"), ValidationError);
}
