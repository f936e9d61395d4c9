// qflow: run fracture-flow solver experiments or validate config files.
//
//   qflow run --experiment sso-sweep --n 4 --q 10,100,1000,10000 --trials 75 --seed 7
//   qflow run --config study.toml --set vls.restarts=10
//   qflow validate study.toml

#include "qflow/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

void print(const std::vector<qflow::Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) std::cerr << "error: " << d.field << ": " << d.message << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum linear-solver experiments on fracture-flow problems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one experiment and write its result files");
  std::string config_file;
  std::string experiment;
  std::string out_dir;
  std::string n, q, trials, seed, restarts, iterations, shots;
  std::vector<std::string> overrides;
  run->add_option("--config", config_file, "config file (key = value, [section] headers)")->check(CLI::ExistingFile);
  run->add_option("--experiment", experiment, "experiment name")
      ->check(CLI::IsMember(qflow::experiment_names()));
  run->add_option("--n", n, "1D node count (problem.n)");
  run->add_option("--q", q, "comma-separated SSO step counts (sso.q)");
  run->add_option("--trials", trials, "SSO trials per step count (sso.trials)");
  run->add_option("--seed", seed, "root seed");
  run->add_option("--restarts", restarts, "VLS restarts (vls.restarts)");
  run->add_option("--iterations", iterations, "VLS iterations per restart (vls.iterations)");
  run->add_option("--shots", shots, "SSO readout shots (sso.shots)");
  run->add_option("--set", overrides, "override any config key: --set key=value");
  run->add_option("--out", out_dir, "output directory (default: $QFLOW_OUTPUT_DIR or ./results)");

  auto* validate = app.add_subcommand("validate", "check a config file without running it");
  std::string validate_file;
  validate->add_option("file", validate_file, "config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (*validate) {
    const auto diagnostics = qflow::validate_file(validate_file);
    print(diagnostics);
    if (diagnostics.empty()) std::cout << validate_file << ": ok\n";
    return diagnostics.empty() ? 0 : 2;
  }

  std::vector<qflow::Diagnostic> diagnostics;
  qflow::ExperimentConfig config;
  if (const char* env = std::getenv("QFLOW_OUTPUT_DIR"); env && *env) config.output_dir = env;

  qflow::ConfigValues values;
  if (!config_file.empty()) {
    try {
      values = qflow::read_config_file(config_file);
    } catch (const qflow::Error& e) {
      diagnostics.push_back({"--config", e.what()});
    }
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      diagnostics.push_back({item, "--set expects key=value"});
      continue;
    }
    values[item.substr(0, eq)] = item.substr(eq + 1);
  }
  const std::pair<const std::string*, const char*> flags[] = {
      {&experiment, "experiment"}, {&n, "problem.n"},         {&q, "sso.q"},
      {&trials, "sso.trials"},     {&seed, "seed"},           {&restarts, "vls.restarts"},
      {&iterations, "vls.iterations"}, {&shots, "sso.shots"}, {&out_dir, "output"},
  };
  for (const auto& [value, key] : flags) {
    if (!value->empty()) values[key] = *value;
  }

  config = qflow::apply_config(config, values, diagnostics);
  for (auto& d : qflow::validate(config)) diagnostics.push_back(std::move(d));
  if (!diagnostics.empty()) {
    print(diagnostics);
    return 2;
  }

  const qflow::ExperimentOutcome outcome = qflow::run_experiment(config);
  const auto& m = outcome.manifest;
  std::cout << m.experiment << ": " << m.status << " in " << m.wall_seconds << " s, " << m.files.size()
            << " files in " << config.output_dir << "\n";
  for (const auto& f : m.failures) std::cerr << "failed: " << f << "\n";
  return outcome.ok() ? 0 : 1;
}
