#pragma once

// End-to-end experiment drivers behind `qflow run`.

#include "qflow/config.hpp"
#include "qflow/results.hpp"

namespace qflow {

struct ExperimentOutcome {
  Manifest manifest;
  bool ok() const { return manifest.status == "ok"; }
};

/// Runs one experiment, writing its CSV/JSON files and manifest.json into
/// `config.output_dir`. Never throws for runtime failures: they are recorded
/// in the manifest with status "error" and any files already written.
ExperimentOutcome run_experiment(const ExperimentConfig& config);

std::string config_hash(const ExperimentConfig& config);

}  // namespace qflow
