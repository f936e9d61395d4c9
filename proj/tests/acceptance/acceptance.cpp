// Acceptance run: one [PASS]/[FAIL] line per criterion, then a tally.
//
//   qflow_acceptance --work <dir> --cli <path to qflow> [--allow-fail name]...
//   qflow_acceptance --work <dir> --cli <path to qflow> --slow
//
// --slow runs only the 11/13-qubit training smoke test.
//
// Exit status is 0 when every criterion passes, or when the only failures are
// ones named with --allow-fail. Allowed failures still print as [FAIL].

#include "qflow/ansatz.hpp"
#include "qflow/compile.hpp"
#include "qflow/encode.hpp"
#include "qflow/experiments.hpp"
#include "qflow/results.hpp"
#include "qflow/sso.hpp"
#include "qflow/vls.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace qflow;

namespace {

struct Tally {
  std::set<std::string> allowed;
  std::vector<std::string> failed;
  std::vector<std::string> allowed_failed;
  int passed = 0;

  void report(const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << std::endl;
    if (ok) ++passed;
    else if (allowed.count(name)) allowed_failed.push_back(name);
    else failed.push_back(name);
  }
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

nlohmann::json run(const ExperimentConfig& cfg) {
  const ExperimentOutcome out = run_experiment(cfg);
  if (!out.ok()) {
    std::string why = out.manifest.status;
    for (const auto& f : out.manifest.failures) why += "; " + f;
    throw std::runtime_error(to_string(cfg.experiment) + " did not finish cleanly: " + why);
  }
  return out.manifest.summary;
}

// ||A x_raw - b_raw|| on the unscaled system.
double raw_residual(const FractureProblem& p) {
  const LinearSystem s = assemble_system(p);
  const RawSystem raw = assemble_unscaled(p);
  const RVector x = physical_pressures(solve_reference(s));
  return (raw.matrix * x - raw.rhs).norm();
}

void ground_truth(Tally& t) {
  Clock clock;
  std::vector<std::pair<std::string, FractureProblem>> problems{
      {"1d-4", build_1d_problem(4, 1.0)},
      {"1d-8", build_1d_problem(8, 1.0)},
  };
  for (int n : {5, 7, 9, 11, 13}) {
    const auto [rows, cols] = pitchfork_shape(n);
    problems.emplace_back(std::to_string(rows * cols) + "-node pitchfork",
                          build_pitchfork_problem(rows, cols, 1.0, 10.0, 10.0));
  }
  double worst = 0.0;
  std::string worst_name;
  for (const auto& [name, p] : problems) {
    const double r = raw_residual(p);
    if (r >= worst) {
      worst = r;
      worst_name = name;
    }
  }
  const double secs = clock.seconds();
  t.report("ground-truth", worst < 1e-10 && secs < 10.0,
           std::to_string(problems.size()) + " problems, worst residual " + fmt(worst, 3) + " (" + worst_name +
               "), " + fmt(secs, 3) + " s");
}

void vls_5q(Tally& t, const fs::path& work) {
  Clock clock;
  ExperimentConfig c;
  c.experiment = ExperimentKind::VlsPitchfork5q;
  c.seed = 1;
  c.vls.restarts = 40;
  c.vls.iterations = 150;
  c.vls.cost = CostMode::Hamiltonian;
  c.vls.layers = 5;
  c.output_dir = (work / "vls-5q").string();
  const nlohmann::json s = run(c);
  const double best = s["pitchfork-4x8"]["best_fidelity"];
  const double secs = clock.seconds();
  t.report("vls-5q", best >= 0.99 && secs < 600.0,
           "best fidelity " + fmt(best, 6) + " over 40 restarts x 150 iterations, " + fmt(secs, 3) + " s");
}

void vls_scaling(Tally& t, const fs::path& work) {
  ExperimentConfig c;
  c.experiment = ExperimentKind::VlsScaling;
  c.seed = 1;
  c.vls.qubits = {7, 9};
  c.output_dir = (work / "vls-scaling").string();
  const nlohmann::json s = run(c);

  bool trained = true;
  bool separated = true;
  std::string trained_detail;
  std::string separation_detail;
  for (int n : {7, 9}) {
    const auto& e = s["pitchfork-" + std::to_string(n) + "q"];
    const double best = e["best_fidelity"];
    const double base = e["baseline_fidelity"];
    trained = trained && best >= 0.93;
    separated = separated && base < 0.5 * best;
    trained_detail += (trained_detail.empty() ? "" : ", ") + std::to_string(n) + "q " + fmt(best, 6);
    separation_detail += (separation_detail.empty() ? "" : ", ") + std::to_string(n) + "q baseline " + fmt(base) +
                         " vs 0.5*achieved " + fmt(0.5 * best);
  }
  t.report("vls-scaling", trained, "best fidelity " + trained_detail + " (need >= 0.93)");
  t.report("vls-scaling-separation", separated, separation_detail);
}

// Larger pitchforks with a longer iteration budget than the default.
void vls_smoke(Tally& t, const fs::path& work) {
  Clock clock;
  ExperimentConfig c;
  c.experiment = ExperimentKind::VlsScaling;
  c.seed = 1;
  c.vls.qubits = {11, 13};
  c.vls.restarts = 4;
  c.vls.iterations = 300;
  c.output_dir = (work / "vls-smoke").string();
  const nlohmann::json s = run(c);
  bool ok = true;
  std::string detail;
  for (int n : {11, 13}) {
    const double best = s["pitchfork-" + std::to_string(n) + "q"]["best_fidelity"];
    ok = ok && best >= 0.85;
    detail += std::to_string(n) + "q " + fmt(best, 6) + ", ";
  }
  t.report("vls-smoke-11-13q", ok, "best fidelity " + detail + "4 restarts x 300 iterations, " + fmt(clock.seconds(), 3) + " s");
}

void sso_sweep(Tally& t) {
  Clock clock;
  const LinearSystem system = assemble_system(build_1d_problem(4, 1.0));
  SsoConfig cfg;
  cfg.trials = 75;
  cfg.exact_state = true;
  cfg.seed = 1;
  const std::vector<int> grid{10, 100, 1000, 10000};
  const auto stats = run_trials(system, cfg, grid);
  bool decreasing = true;
  std::string means;
  for (std::size_t i = 0; i < stats.size(); ++i) {
    if (i > 0) decreasing = decreasing && stats[i].mean_error < stats[i - 1].mean_error;
    means += (i ? ", " : "") + fmt(stats[i].mean_error);
  }
  const double last = stats.back().mean_error;
  const double secs = clock.seconds();
  t.report("sso-sweep", decreasing && last <= 0.05 && secs < 300.0,
           "mean errors " + means + " at q = 10..1e4, " + fmt(secs, 3) + " s");
}

void baseline_probe(Tally& t) {
  const LinearSystem s = assemble_system(build_1d_problem(8, 1.0));
  const BaselineMetrics m = mixed_state_baseline(s, solve_reference(s));
  const bool normalized_in = std::abs(m.error - 0.71) <= 0.05;
  const bool scaled_in = std::abs(m.error_true_scale - 0.71) <= 0.05;
  // Probe only: it reports, it does not gate.
  t.report("mixed-baseline-probe", true,
           "1D N=8 normalized-residual error " + fmt(m.error) + (normalized_in ? " (inside" : " (outside") +
               " 0.71 +/- 0.05); rescaled by ||x_true||: " + fmt(m.error_true_scale) +
               (scaled_in ? " (inside band)" : " (outside band)"));
}

void noise_suite(Tally& t, const fs::path& work) {
  Clock clock;
  ExperimentConfig c;
  c.experiment = ExperimentKind::NoiseResilienceSuite;
  c.seed = 1;
  c.noise.circuits = 200;
  c.output_dir = (work / "noise").string();
  const ExperimentOutcome out = run_experiment(c);
  const auto& s = out.manifest.summary;
  const ParsedCsv csv = read_csv((fs::path(c.output_dir) / csv_file_name(CsvKind::NoiseChecks)).string());
  std::map<std::string, std::pair<int, int>> per_check;  // passed, total
  for (const auto& row : csv.rows) {
    auto& [ok, total] = per_check[row[2]];
    ok += row.back() == "1";
    ++total;
  }
  const double secs = clock.seconds();
  const auto line = [&](const std::string& check) {
    const auto [ok, total] = per_check[check];
    return check + " " + std::to_string(ok) + "/" + std::to_string(total);
  };
  const bool a = per_check["dephasing-diagonal"].first == 200 && s["dephasing_failures"] == 0;
  const bool b = per_check["depolarizing-closed-form"].first == 200 && s["closed_form_failures"] == 0;
  const bool cc = per_check["depolarizing-argsort"].first == 200 && s["argsort_failures"] == 0;
  t.report("noise-suite", out.ok() && a && b && cc && secs < 120.0,
           line("dephasing-diagonal") + ", " + line("depolarizing-closed-form") + ", " +
               line("depolarizing-argsort") + ", " + fmt(secs, 3) + " s");
}

void gradients(Tally& t) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> qubits(2, 5), layers(1, 4), coin(0, 1);
  std::uniform_real_distribution<double> angle(-3.2, 3.2), perm(0.5, 20.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = qubits(rng);
    const CircuitTemplate circuit = build_template(n, layers(rng));
    Params theta(static_cast<Eigen::Index>(circuit.parameter_count()));
    for (auto& x : theta) x = angle(rng);

    // Random heterogeneous medium on a 1 x 2^n strip.
    std::vector<double> k(std::size_t{1} << n);
    for (auto& v : k) v = perm(rng);
    const LinearSystem system = assemble_system(make_problem(1, static_cast<int>(k.size()), k, 1.0));
    const Observable m = coin(rng) ? hamiltonian_observable(system) : overlap_observable(solve_reference(system));

    const RVector shift = gradient(m, circuit, theta);
    for (Eigen::Index i = 0; i < theta.size(); ++i) {
      Params plus = theta, minus = theta;
      plus(i) += h;
      minus(i) -= h;
      const double fd = (expectation_cost(m, circuit, plus) - expectation_cost(m, circuit, minus)) / (2 * h);
      worst = std::max(worst, std::abs(fd - shift(i)));
    }
  }
  t.report("gradient", worst <= 1e-6, "50 random (template, angles, cost) triples, worst |shift - FD| " + fmt(worst, 3));
}

void compilation(Tally& t, const fs::path& work) {
  Clock clock;
  ExperimentConfig c;
  c.experiment = ExperimentKind::CompileDemo;
  c.seed = 1;
  c.compile.haar_instances = 100;
  c.compile.sso_instances = 20;
  c.compile.sso_nodes = 8;
  c.output_dir = (work / "compile").string();
  const nlohmann::json s = run(c);
  const int haar = s["haar_success"];
  const int sso = s["sso_success"];

  // Re-score every row against the written fidelity rather than trusting the flag.
  const ParsedCsv csv = read_csv((fs::path(c.output_dir) / csv_file_name(CsvKind::Compile)).string());
  int haar_rescored = 0, sso_rescored = 0;
  for (const auto& row : csv.rows) {
    const double f = std::stod(row[7]);
    if (row[2] == "haar-2q") haar_rescored += f >= 0.999 && row[5] == "3" && row[6] == "7";
    else sso_rescored += f >= 0.9967;
  }
  t.report("compile-haar", haar == 100 && haar_rescored == 100,
           std::to_string(haar_rescored) + "/100 Haar 2-qubit targets at fidelity >= 0.999 with 3 CNOT + 7 rotations");
  t.report("compile-sso", sso == sso_rescored && sso_rescored >= 18,
           std::to_string(sso_rescored) + "/20 SSO N=8 unitaries at fidelity >= 0.9967 (" +
               s["sso_template"].get<std::string>() + "), " + fmt(clock.seconds(), 3) + " s");
}

void smart_encoding(Tally& t) {
  const FractureProblem p = build_pitchfork_problem(4, 4, 1.0, 10.0, 10.0);
  const SmartPermutation perm = build_smart_permutation(p);
  const SolutionVector x = solve_reference(assemble_system(p));
  const RVector probs = x.values.cwiseAbs2();
  double brute = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.fracture_mask[i]) brute += probs(static_cast<Eigen::Index>(i));
  const RVector permuted = permute(probs, perm);
  const double marginal = fracture_marginal(permuted, perm).p_fracture;
  const std::uint64_t shots = 100000;
  const double sampled = fracture_marginal(sample_shots(permuted, shots, 1), perm).p_fracture;
  const double sigma = std::sqrt(brute * (1 - brute) / static_cast<double>(shots));
  const double z = (sampled - brute) / sigma;
  t.report("smart-encoding", perm.exact_split() && marginal == brute && std::abs(z) <= 3.0,
           "readout marginal " + fmt(marginal, 17) + " vs mask sum " + fmt(brute, 17) + ", shots " + fmt(sampled, 6) +
               " (z = " + fmt(z, 3) + ")");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism(Tally& t, const fs::path& work, const std::string& cli) {
  const std::vector<std::string> runs{
      "--experiment sso-sweep --n 4 --q 10,100,1000 --trials 10 --seed 5",
      "--experiment vls-pitchfork-5q --restarts 3 --iterations 20 --seed 5",
      "--experiment vls-varying-permeability --restarts 2 --iterations 10 --seed 5 --set vls.multipliers=10,100",
      "--experiment noise-resilience-suite --seed 5 --set noise.circuits=20",
      "--experiment smart-encoding-demo --seed 5",
      "--experiment compile-demo --seed 5 --set compile.haar_instances=5 --set compile.sso_instances=2",
  };
  int compared = 0;
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    fs::path dirs[2];
    for (int k = 0; k < 2; ++k) {
      dirs[k] = work / "determinism" / (std::to_string(i) + (k ? "b" : "a"));
      fs::remove_all(dirs[k]);
      const std::string cmd = "\"" + cli + "\" run " + runs[i] + " --out \"" + dirs[k].string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) bad.push_back("run failed: " + runs[i]);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".csv") continue;
      ++compared;
      if (slurp(entry.path()) != slurp(dirs[1] / entry.path().filename()))
        bad.push_back(entry.path().filename().string() + " from: " + runs[i]);
    }
  }
  std::string detail = std::to_string(compared) + " CSVs from " + std::to_string(runs.size()) + " CLI experiments";
  for (const auto& b : bad) detail += "; differs: " + b;
  t.report("determinism", bad.empty() && compared > 0, detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qflow acceptance criteria"};
  std::string work = (fs::temp_directory_path() / "qflow-acceptance").string();
  std::string cli;
  std::vector<std::string> allowed;
  bool slow = false;
  app.add_option("--work", work, "scratch directory for experiment output");
  app.add_option("--cli", cli, "path to the qflow executable")->required();
  app.add_option("--allow-fail", allowed, "criterion whose failure does not set the exit status");
  app.add_flag("--slow", slow, "run only the 11/13-qubit smoke test");
  CLI11_PARSE(app, argc, argv);

  Tally t;
  t.allowed.insert(allowed.begin(), allowed.end());
  const fs::path dir(work);
  fs::create_directories(dir);

  std::vector<std::pair<std::string, std::function<void()>>> steps{
      {"ground-truth", [&] { ground_truth(t); }},
      {"vls-5q", [&] { vls_5q(t, dir); }},
      {"vls-scaling", [&] { vls_scaling(t, dir); }},
      {"sso-sweep", [&] { sso_sweep(t); }},
      {"mixed-baseline-probe", [&] { baseline_probe(t); }},
      {"noise-suite", [&] { noise_suite(t, dir); }},
      {"gradient", [&] { gradients(t); }},
      {"compile", [&] { compilation(t, dir); }},
      {"smart-encoding", [&] { smart_encoding(t); }},
      {"determinism", [&] { determinism(t, dir, cli); }},
  };
  if (slow) steps = {{"vls-smoke-11-13q", [&] { vls_smoke(t, dir); }}};
  for (const auto& [name, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      t.report(name, false, std::string("threw: ") + e.what());
    }
  }

  std::cout << "\n" << t.passed << " passed, " << t.failed.size() + t.allowed_failed.size() << " failed";
  if (!t.allowed_failed.empty()) {
    std::cout << " (allowed:";
    for (const auto& n : t.allowed_failed) std::cout << " " << n;
    std::cout << ")";
  }
  std::cout << std::endl;
  return t.failed.empty() ? 0 : 1;
}
