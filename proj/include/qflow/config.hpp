#pragma once

// Experiment configuration. Files are `key = value` (TOML/INI style, sections
// become dotted prefixes); command-line flags override individual keys. The
// full key list lives in docs/config.md.

#include "qflow/mesh.hpp"
#include "qflow/optimize.hpp"
#include "qflow/vls.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace qflow {

enum class ExperimentKind {
  SsoSweep,
  VlsPitchfork5q,
  VlsScaling,
  VlsVaryingPermeability,
  NoiseResilienceSuite,
  SmartEncodingDemo,
  CompileDemo,
};

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_from_string(const std::string& name);
const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::SsoSweep;
  std::uint64_t seed = 0;
  std::string output_dir = "results";

  struct Problem {
    int n_nodes = 4;  ///< 1D chains
    int rows = 4;
    int cols = 8;
    double k_background = 1.0;
    double k_fracture = 10.0;
    double right_branch_multiplier = 1.0;  ///< k_right_branch = multiplier * k_fracture
    BoundaryAxis boundary_axis = BoundaryAxis::LeftRight;
    double boundary_high = 1.0;
    double boundary_low = 0.0;
  } problem;

  struct Sso {
    std::vector<int> q_grid{10, 100, 1000, 10000};
    int trials = 75;
    std::uint64_t shots = 8192;
    bool exact_state = false;
  } sso;

  struct Vls {
    int restarts = 40;
    int iterations = 150;
    std::optional<int> layers;
    std::optional<CostMode> cost;
    OptimizerKind optimizer = OptimizerKind::ConjugateGradient;
    std::optional<std::uint64_t> shots;
    std::vector<int> qubits{7, 9};
    std::vector<double> multipliers{10.0, 100.0, 1000.0, 10000.0};
  } vls;

  struct Noise {
    int circuits = 200;
    int max_qubits = 5;
    int max_layers = 10;
    std::vector<double> p_grid{0.0, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0};
  } noise;

  struct Encode {
    int rows = 4;
    int cols = 4;
    std::uint64_t shots = 100000;
  } encode;

  struct Compile {
    int haar_instances = 100;
    int sso_instances = 20;
    int sso_nodes = 8;
    int sso_q = 100;
    int restarts = 20;
    int cnots_3q = 20;
  } compile;
};

struct Diagnostic {
  std::string field;
  std::string message;
};

/// Flat key -> raw value map, as read from a file or the command line.
using ConfigValues = std::map<std::string, std::string>;

/// Reads `key = value` lines (with optional [section] headers) through CLI11's
/// TOML reader. Array values are joined with commas.
ConfigValues read_config_file(const std::string& path);

/// Applies values on top of `base`, collecting one diagnostic per unknown key
/// or unparsable/out-of-range value.
ExperimentConfig apply_config(ExperimentConfig base, const ConfigValues& values, std::vector<Diagnostic>& diagnostics);

/// Whole-config checks (ranges that depend on several keys).
std::vector<Diagnostic> validate(const ExperimentConfig& config);

/// Schema check of a file without running anything.
std::vector<Diagnostic> validate_file(const std::string& path);

/// Deterministic `key = value` rendering of every setting except the output
/// directory, used for hashing and echoed into manifests.
std::string canonical_text(const ExperimentConfig& config);

std::vector<std::string> known_keys();

}  // namespace qflow
