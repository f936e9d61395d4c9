#include "qflow/experiments.hpp"

#include "qflow/rng.hpp"
#include "qflow/sso.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

namespace qflow {

namespace {

std::string num(double v) { return format_number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

class Context {
 public:
  Context(const ExperimentConfig& cfg, Manifest& m) : cfg_(cfg), m_(m) {}

  const ExperimentConfig& cfg() const { return cfg_; }
  CsvTable table(CsvKind kind) const { return CsvTable(kind, cfg_.seed, m_.config_hash); }
  SeedStream root() const { return SeedStream(cfg_.seed); }

  void emit(const CsvTable& t) {
    t.write(cfg_.output_dir);
    m_.files.push_back(csv_file_name(t.kind()));
  }

  void emit(const std::string& name, const nlohmann::json& j) {
    write_json((std::filesystem::path(cfg_.output_dir) / name).string(), j);
    m_.files.push_back(name);
  }

  void check(bool ok, const std::string& what) {
    if (!ok) m_.failures.push_back(what);
  }

  void stream(const std::string& name, const std::string& meaning) { m_.seeds["streams"][name] = meaning; }
  nlohmann::json& summary() { return m_.summary; }

 private:
  const ExperimentConfig& cfg_;
  Manifest& m_;
};

// ||A_raw p - b_raw|| for the physical pressures, relative to ||b_raw||.
double raw_residual(const FractureProblem& problem, const SolutionVector& x_true) {
  const RawSystem raw = assemble_unscaled(problem);
  const RVector p = physical_pressures(x_true);
  return (raw.matrix * p - raw.rhs).norm() / std::max(1.0, raw.rhs.norm());
}

// ---------------------------------------------------------------- sso-sweep

void run_sso_sweep(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const int n = cfg.problem.n_nodes;
  const FractureProblem problem = build_1d_problem(n, cfg.problem.k_background);
  const LinearSystem system = assemble_system(problem);
  const SolutionVector x_true = solve_reference(system);
  ctx.check(raw_residual(problem, x_true) < 1e-10, "reference solve residual above 1e-10");
  const BaselineMetrics baseline = mixed_state_baseline(system, x_true);

  SsoConfig sso;
  sso.trials = cfg.sso.trials;
  sso.shots = cfg.sso.shots;
  sso.exact_state = cfg.sso.exact_state;
  sso.seed = cfg.seed;
  ctx.stream("sso/<q>/<trial>", "per-trial step times and shot sampling");

  const std::vector<SsoStats> stats = run_trials(system, sso, cfg.sso.q_grid);

  CsvTable errors = ctx.table(CsvKind::SsoErrors);
  CsvTable summary = ctx.table(CsvKind::SsoSummary);
  nlohmann::json means = nlohmann::json::array();
  for (const auto& row : stats) {
    for (std::size_t t = 0; t < row.errors.size(); ++t) {
      errors.add({num(n), num(row.q), num(t), num(row.errors[t]), num(row.exact_errors[t]), num(row.baseline_error)});
      ctx.check(std::isfinite(row.errors[t]) && row.errors[t] >= 0 && row.errors[t] <= 2.0 + 1e-12,
                "sso error outside [0, 2] at q=" + std::to_string(row.q));
    }
    summary.add({num(n), num(row.q), num(row.min_error), num(row.mean_error), num(row.max_error),
                 num(row.baseline_error)});
    means.push_back({{"q", row.q}, {"mean_error", row.mean_error}});
  }
  ctx.emit(errors);
  ctx.emit(summary);
  ctx.summary() = {{"n_nodes", n},
                   {"kappa", system.kappa},
                   {"mixed_baseline_error", baseline.error},
                   {"mixed_baseline_error_true_scale", baseline.error_true_scale},
                   {"mean_errors", means}};
}

// ---------------------------------------------------------------- vls

struct VlsCase {
  std::string label;
  FractureProblem problem;
  double k_right_branch;
};

void run_vls_cases(Context& ctx, const std::vector<VlsCase>& cases) {
  const auto& cfg = ctx.cfg();
  CsvTable trace = ctx.table(CsvKind::VlsTrace);
  CsvTable summary = ctx.table(CsvKind::VlsSummary);
  CsvTable pressure = ctx.table(CsvKind::Pressure);
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  ctx.stream("<problem>/restart/<r>", "initial angles of restart r (plus shots/<iteration> when sampling)");

  for (const auto& c : cases) {
    const LinearSystem system = assemble_system(c.problem);
    const SolutionVector x_true = solve_reference(system);
    ctx.check(raw_residual(c.problem, x_true) < 1e-10, c.label + ": reference solve residual above 1e-10");

    const int n = system.n_qubits();
    const int layers = cfg.vls.layers.value_or(default_layer_count(n));
    VlsConfig vc;
    vc.restarts = cfg.vls.restarts;
    vc.max_iterations = cfg.vls.iterations;
    vc.optimizer = cfg.vls.optimizer;
    vc.cost_mode = cfg.vls.cost.value_or(default_cost_mode(n));
    vc.shots_for_cost = cfg.vls.shots;
    vc.seed = ctx.root().child(c.label).value();

    const CircuitTemplate circuit = build_template(n, layers);
    const TrainResult result = train(system, x_true, circuit, vc);
    const double baseline = mixed_state_baseline(system, x_true).fidelity;

    for (const auto& t : result.traces) {
      for (const auto& p : t.points) {
        trace.add({c.label, num(n), num(t.restart), num(p.iteration), num(p.cost), num(p.fidelity),
                   num(t.restart == result.best_restart ? 1 : 0)});
      }
    }
    summary.add({c.label, num(n), num(c.problem.rows), num(c.problem.cols), num(layers), to_string(vc.cost_mode),
                 num(cfg.problem.k_fracture), num(c.k_right_branch), num(system.kappa), num(result.best_restart),
                 num(result.best_fidelity), num(result.best_cost), num(baseline)});

    RVector v = evaluate_real(circuit, result.best_params);
    const double recomputed = fidelity(StateVector::from_real(v), x_true);
    ctx.check(std::abs(recomputed - result.best_fidelity) < 1e-9, c.label + ": best fidelity does not reproduce");
    ctx.check(result.best_fidelity >= 0 && result.best_fidelity <= 1 + 1e-12, c.label + ": fidelity outside [0, 1]");
    if (v.dot(x_true.values) < 0) v = -v;
    const RVector p_ref = physical_pressures(x_true);
    const RVector p_trained = physical_pressures(SolutionVector{v, x_true.raw_scale, x_true.system_norm});
    for (int r = 0; r < c.problem.rows; ++r) {
      for (int col = 0; col < c.problem.cols; ++col) {
        const std::size_t i = c.problem.index(r, col);
        const auto e = static_cast<Eigen::Index>(i);
        pressure.add({c.label, num(r), num(col), num(int{c.problem.fracture_mask[i]}), num(c.problem.permeability[i]),
                      num(p_ref(e)), num(p_trained(e))});
      }
    }

    nlohmann::json entry = to_json(circuit, result.best_params);
    entry["cost_mode"] = to_string(vc.cost_mode);
    entry["seed"] = vc.seed;
    params[c.label] = std::move(entry);
    nlohmann::json r = to_json(result);
    r["baseline_fidelity"] = baseline;
    r["kappa"] = system.kappa;
    results[c.label] = r;
    ctx.summary()[c.label] = {{"best_fidelity", result.best_fidelity}, {"baseline_fidelity", baseline},
                              {"n_qubits", n}, {"layers", layers}};
  }
  ctx.emit(trace);
  ctx.emit(summary);
  ctx.emit(pressure);
  ctx.emit("vls_params.json", params);
  ctx.emit("vls_train.json", results);
}

std::string multiplier_label(double m) {
  std::string s = format_number(m);
  std::replace(s.begin(), s.end(), '.', 'p');
  return "right-branch-x" + s;
}

void run_vls(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& pb = cfg.problem;
  std::vector<VlsCase> cases;
  const auto pitchfork = [&](int rows, int cols, double multiplier) {
    const double kr = multiplier * pb.k_fracture;
    FractureProblem p = build_pitchfork_problem(rows, cols, pb.k_background, pb.k_fracture, kr);
    p.boundary_axis = pb.boundary_axis;
    p.boundary_high = pb.boundary_high;
    p.boundary_low = pb.boundary_low;
    return std::pair{p, kr};
  };

  switch (cfg.experiment) {
    case ExperimentKind::VlsPitchfork5q: {
      auto [p, kr] = pitchfork(pb.rows, pb.cols, pb.right_branch_multiplier);
      cases.push_back({"pitchfork-" + std::to_string(pb.rows) + "x" + std::to_string(pb.cols), std::move(p), kr});
      break;
    }
    case ExperimentKind::VlsScaling:
      for (int n : cfg.vls.qubits) {
        const auto [rows, cols] = pitchfork_shape(n);
        auto [p, kr] = pitchfork(rows, cols, pb.right_branch_multiplier);
        cases.push_back({"pitchfork-" + std::to_string(n) + "q", std::move(p), kr});
      }
      break;
    case ExperimentKind::VlsVaryingPermeability:
      for (double m : cfg.vls.multipliers) {
        auto [p, kr] = pitchfork(pb.rows, pb.cols, m);
        cases.push_back({multiplier_label(m), std::move(p), kr});
      }
      break;
    default:
      throw InternalError("not a VLS experiment");
  }
  run_vls_cases(ctx, cases);
}

// ---------------------------------------------------------------- noise

// One layer: Ry and Rz on every qubit, then CZ on neighbouring pairs.
CMatrix random_layer_unitary(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<std::pair<Gate, std::vector<int>>> gates;
  for (int q = 0; q < n; ++q) {
    gates.push_back({Gate::ry(angle(rng)), {q}});
    gates.push_back({Gate::rz(angle(rng)), {q}});
  }
  for (int q = 0; q + 1 < n; ++q) gates.push_back({Gate::cz(), {q, q + 1}});

  const std::size_t d = std::size_t{1} << n;
  CMatrix u(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    StateVector s = StateVector::basis(n, c);
    for (const auto& [g, t] : gates) s = apply_gate(std::move(s), g, t);
    u.col(static_cast<Eigen::Index>(c)) = s.amplitudes();
  }
  return u;
}

void run_noise_suite(Context& ctx) {
  const auto& cfg = ctx.cfg();
  CsvTable checks = ctx.table(CsvKind::NoiseChecks);
  ctx.stream("noise/<trial>", "random circuit, qubit count, layer count and noise levels of one trial");
  constexpr double tol = 1e-12;
  int failures[3] = {0, 0, 0};

  for (int trial = 0; trial < cfg.noise.circuits; ++trial) {
    std::mt19937_64 rng = ctx.root().child("noise", static_cast<std::uint64_t>(trial)).engine();
    const int n = std::uniform_int_distribution<int>(1, cfg.noise.max_qubits)(rng);
    const int layers = std::uniform_int_distribution<int>(1, cfg.noise.max_layers)(rng);
    const std::size_t d = std::size_t{1} << n;
    std::vector<CMatrix> layer_u;
    CMatrix total = CMatrix::Identity(d, d);
    for (int l = 0; l < layers; ++l) {
      layer_u.push_back(random_layer_unitary(n, rng));
      total = layer_u.back() * total;
    }
    const DensityOperator rho0 = state_to_density(StateVector(n));
    const DensityOperator clean = evolve(rho0, total);

    // Dephasing with an independent p per qubit leaves the diagonal alone.
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p_qubit(static_cast<std::size_t>(n));
    for (auto& p : p_qubit) p = unit(rng);
    const DensityOperator dephased = apply_dephasing(clean, p_qubit);
    const double dev_a = (dephased.diagonal() - clean.diagonal()).cwiseAbs().maxCoeff();
    checks.add({"dephasing-diagonal", num(trial), num(n), num(layers), num(p_qubit[0]), num(dev_a),
                num(dev_a <= tol ? 1 : 0)});
    failures[0] += dev_a > tol;

    // Depolarizing after each layer, applied explicitly, against the closed form.
    const double p = cfg.noise.p_grid[std::uniform_int_distribution<std::size_t>(0, cfg.noise.p_grid.size() - 1)(rng)];
    CMatrix rho = rho0.matrix();
    const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
    for (const auto& u : layer_u) {
      rho = u * rho * u.adjoint();
      rho = p * rho + (1.0 - p) * mixed;
    }
    const DensityOperator closed =
        apply_channel(clean, NoiseChannel(NoiseChannel::Kind::LayerDepolarizing, p), layers);
    const double dev_b = (closed.matrix() - rho).cwiseAbs().maxCoeff();
    checks.add({"depolarizing-closed-form", num(trial), num(n), num(layers), num(p), num(dev_b),
                num(dev_b <= tol ? 1 : 0)});
    failures[1] += dev_b > tol;

    // The noisy diagonal keeps the noiseless ranking.
    const RVector before = clean.diagonal();
    const RVector after = closed.diagonal();
    std::vector<Eigen::Index> order(d);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return before(a) > before(b); });
    double worst = 0.0;
    for (std::size_t k = 1; k < d; ++k) worst = std::max(worst, after(order[k]) - after(order[k - 1]));
    const bool ranked = worst <= 1e-15;
    checks.add({"depolarizing-argsort", num(trial), num(n), num(layers), num(p), num(worst), num(ranked ? 1 : 0)});
    failures[2] += !ranked;
  }
  ctx.check(failures[0] == 0, "dephasing changed a diagonal in " + std::to_string(failures[0]) + " trials");
  ctx.check(failures[1] == 0, "depolarizing closed form missed in " + std::to_string(failures[1]) + " trials");
  ctx.check(failures[2] == 0, "depolarizing reordered the diagonal in " + std::to_string(failures[2]) + " trials");
  ctx.emit(checks);
  ctx.summary() = {{"circuits", cfg.noise.circuits},
                   {"dephasing_failures", failures[0]},
                   {"closed_form_failures", failures[1]},
                   {"argsort_failures", failures[2]}};
}

// ---------------------------------------------------------------- encoding

void run_encoding(Context& ctx) {
  const auto& cfg = ctx.cfg();
  const auto& pb = cfg.problem;
  const int rows = cfg.encode.rows;
  const int cols = cfg.encode.cols;
  FractureProblem problem = build_pitchfork_problem(rows, cols, pb.k_background, pb.k_fracture,
                                                    pb.right_branch_multiplier * pb.k_fracture);
  problem.boundary_axis = pb.boundary_axis;
  const LinearSystem system = assemble_system(problem);
  const SolutionVector x_true = solve_reference(system);
  ctx.check(raw_residual(problem, x_true) < 1e-10, "reference solve residual above 1e-10");

  const SmartPermutation perm = build_smart_permutation(problem);
  const RVector probs = x_true.values.cwiseAbs2();
  const RVector permuted = permute(probs, perm);

  double brute = 0.0;
  for (std::size_t i = 0; i < problem.size(); ++i) {
    if (problem.fracture_mask[i]) brute += probs(static_cast<Eigen::Index>(i));
  }
  const double p_exact = fracture_marginal(permuted, perm).p_fracture;
  if (perm.exact_split()) {
    ctx.check(p_exact == brute, "readout marginal differs from the mask sum");
  } else {
    ctx.check(std::abs(mask_probability(permuted, perm, problem.fracture_mask) - brute) < 1e-14,
              "mask lookup through the permutation differs from the mask sum");
  }

  ctx.stream("encode-shots", "readout sampling");
  const std::uint64_t shots = cfg.encode.shots;
  const ShotCounts counts = sample_shots(permuted, shots, ctx.root().child("encode-shots").value());
  const double p_shots = fracture_marginal(counts, perm).p_fracture;
  const double sigma = std::sqrt(brute * (1.0 - brute) / static_cast<double>(shots));
  const double z = sigma > 0 ? (p_shots - brute) / sigma : 0.0;
  ctx.check(std::abs(z) <= 3.0, "shot marginal more than 3 sigma from the exact value");

  CsvTable table = ctx.table(CsvKind::Encoding);
  table.add({num(rows), num(cols), num(perm.fracture_count), num(perm.padded), num(p_exact), num(brute), num(shots),
             num(p_shots), num(sigma), num(z)});
  ctx.emit(table);
  ctx.emit("permutation.json", to_json(perm));
  ctx.summary() = {{"p_fracture", p_exact}, {"p_mask_sum", brute}, {"p_shots", p_shots}, {"z_score", z},
                   {"exact_split", perm.exact_split()}};
}

// ---------------------------------------------------------------- compile

void run_compile(Context& ctx) {
  const auto& cfg = ctx.cfg();
  CsvTable table = ctx.table(CsvKind::Compile);
  nlohmann::json gates = nlohmann::json::object();
  ctx.stream("haar/<i>", "Haar target i");
  ctx.stream("haar-compile/<i>", "starting angles for target i");
  ctx.stream("sso-instance/<i>", "step times of SSO instance i");
  ctx.stream("sso-compile/<i>", "starting angles for SSO instance i");

  int haar_ok = 0;
  const CompileTemplate two = two_qubit_template();
  for (int i = 0; i < cfg.compile.haar_instances; ++i) {
    std::mt19937_64 rng = ctx.root().child("haar", static_cast<std::uint64_t>(i)).engine();
    CompilationTask task;
    task.target = haar_unitary(4, rng);
    task.circuit = two;
    task.restarts = cfg.compile.restarts;
    const CompileResult res = compile_unitary(task, ctx.root().child("haar-compile", static_cast<std::uint64_t>(i)).value());
    haar_ok += res.success;
    ctx.check(res.achieved_fidelity <= 1.0 + 1e-12, "compile fidelity above 1");
    table.add({"haar-2q", num(i), num(2), num(two.cnot_count()), num(two.rotation_count()), num(res.achieved_fidelity),
               num(res.restarts_used), num(res.success ? 1 : 0)});
    if (i == 0) gates["haar-2q"] = to_json(gate_list(two, res.params));
  }

  int sso_ok = 0;
  const int nodes = cfg.compile.sso_nodes;
  const LinearSystem system = assemble_system(build_1d_problem(nodes, cfg.problem.k_background));
  const CompileTemplate circuit = nodes == 4 ? two : brickwork_template(3, cfg.compile.cnots_3q);
  const std::string family = "sso-" + std::to_string(nodes);
  for (int i = 0; i < cfg.compile.sso_instances; ++i) {
    SsoConfig sso;
    sso.q = cfg.compile.sso_q;
    sso.trials = 1;
    sso.exact_state = true;
    sso.seed = ctx.root().child("sso-instance", static_cast<std::uint64_t>(i)).value();
    const SsoRun run = run_evolution(system, sso);
    CompilationTask task;
    task.target = run.net_unitary;
    task.circuit = circuit;
    task.tolerance = 0.9967;
    task.restarts = cfg.compile.restarts;
    const CompileResult res = compile_unitary(task, ctx.root().child("sso-compile", static_cast<std::uint64_t>(i)).value());
    sso_ok += res.success;
    ctx.check(res.achieved_fidelity <= 1.0 + 1e-12, "compile fidelity above 1");
    table.add({family, num(i), num(circuit.n_qubits), num(circuit.cnot_count()), num(circuit.rotation_count()),
               num(res.achieved_fidelity), num(res.restarts_used), num(res.success ? 1 : 0)});
    if (i == 0) gates[family] = to_json(gate_list(circuit, res.params));
  }
  ctx.emit(table);
  ctx.emit("compiled_gates.json", gates);
  ctx.summary() = {{"haar_success", haar_ok},
                   {"haar_instances", cfg.compile.haar_instances},
                   {"sso_success", sso_ok},
                   {"sso_instances", cfg.compile.sso_instances},
                   {"sso_template", circuit.description}};
}

}  // namespace

std::string config_hash(const ExperimentConfig& config) { return git_blob_sha1(canonical_text(config)); }

ExperimentOutcome run_experiment(const ExperimentConfig& config) {
  ExperimentOutcome out;
  Manifest& m = out.manifest;
  m.experiment = to_string(config.experiment);
  m.config_text = canonical_text(config);
  m.config_hash = git_blob_sha1(m.config_text);
  m.seed = config.seed;
  m.seeds = {{"root", config.seed}, {"streams", nlohmann::json::object()}};

  const auto start = std::chrono::steady_clock::now();
  Context ctx(config, m);
  try {
    std::filesystem::create_directories(config.output_dir);
    switch (config.experiment) {
      case ExperimentKind::SsoSweep: run_sso_sweep(ctx); break;
      case ExperimentKind::VlsPitchfork5q:
      case ExperimentKind::VlsScaling:
      case ExperimentKind::VlsVaryingPermeability: run_vls(ctx); break;
      case ExperimentKind::NoiseResilienceSuite: run_noise_suite(ctx); break;
      case ExperimentKind::SmartEncodingDemo: run_encoding(ctx); break;
      case ExperimentKind::CompileDemo: run_compile(ctx); break;
    }
    m.status = m.failures.empty() ? "ok" : "checks-failed";
  } catch (const std::exception& e) {
    m.status = "error";
    m.failures.push_back(e.what());
  }
  m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  try {
    write_json((std::filesystem::path(config.output_dir) / "manifest.json").string(), to_json(m));
  } catch (const std::exception& e) {
    m.status = "error";
    m.failures.push_back(std::string("manifest: ") + e.what());
  }
  return out;
}

}  // namespace qflow
