#include "qflow/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace qflow {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& experiment_table() {
  static const std::vector<std::pair<ExperimentKind, std::string>> table{
      {ExperimentKind::SsoSweep, "sso-sweep"},
      {ExperimentKind::VlsPitchfork5q, "vls-pitchfork-5q"},
      {ExperimentKind::VlsScaling, "vls-scaling"},
      {ExperimentKind::VlsVaryingPermeability, "vls-varying-permeability"},
      {ExperimentKind::NoiseResilienceSuite, "noise-resilience-suite"},
      {ExperimentKind::SmartEncodingDemo, "smart-encoding-demo"},
      {ExperimentKind::CompileDemo, "compile-demo"},
  };
  return table;
}

std::string trim(std::string s) {
  const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_list(const std::string& raw) {
  std::string s = trim(raw);
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.empty()) out.emplace_back();
  return out;
}

// Setters throw this with a human-readable reason; apply_config turns it into
// a diagnostic tagged with the key.
struct BadValue {
  std::string reason;
};

long long to_integer(const std::string& raw) {
  const std::string s = trim(raw);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) throw BadValue{"'" + s + "' is not an integer"};
  return v;
}

int int_at_least(const std::string& raw, long long lo, long long hi = 1'000'000'000) {
  const long long v = to_integer(raw);
  if (v < lo || v > hi) {
    throw BadValue{"must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(v)};
  }
  return static_cast<int>(v);
}

std::uint64_t to_u64(const std::string& raw, std::uint64_t lo) {
  const std::string s = trim(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw BadValue{"'" + s + "' is not a non-negative integer"};
  }
  if (v < lo) throw BadValue{"must be at least " + std::to_string(lo)};
  return v;
}

double to_real(const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) {
    throw BadValue{"'" + s + "' is not a finite number"};
  }
  return v;
}

double positive_real(const std::string& raw) {
  const double v = to_real(raw);
  if (v <= 0) throw BadValue{"must be positive"};
  return v;
}

bool to_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw BadValue{"'" + s + "' is not a boolean"};
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T, class F>
std::string join(const std::vector<T>& items, F&& render) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ",";
    out += render(items[i]);
  }
  return out;
}

template <class F>
auto wrap_enum(F&& parse, const std::string& raw) {
  try {
    return parse(trim(raw));
  } catch (const Error& e) {
    throw BadValue{e.what()};
  }
}

struct KeySpec {
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

int pitchfork_qubits(const std::string& raw) {
  const int n = int_at_least(raw, 5, 13);
  if (n % 2 == 0) throw BadValue{"pitchfork problems use an odd qubit count, got " + std::to_string(n)};
  return n;
}

const std::vector<KeySpec>& key_table() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<KeySpec> table{
      {"experiment", [](C& c, S v) { c.experiment = wrap_enum(experiment_from_string, v); },
       [](const C& c) { return to_string(c.experiment); }},
      {"seed", [](C& c, S v) { c.seed = to_u64(v, 0); }, [](const C& c) { return std::to_string(c.seed); }},
      {"output", [](C& c, S v) {
         c.output_dir = trim(v);
         if (c.output_dir.empty()) throw BadValue{"must not be empty"};
       },
       [](const C& c) { return c.output_dir; }},

      {"problem.n", [](C& c, S v) {
         c.problem.n_nodes = int_at_least(v, 2, 1 << 20);
         if (!is_power_of_two(static_cast<std::size_t>(c.problem.n_nodes))) throw BadValue{"must be a power of two"};
       },
       [](const C& c) { return std::to_string(c.problem.n_nodes); }},
      {"problem.rows", [](C& c, S v) { c.problem.rows = int_at_least(v, 1, 1 << 20); },
       [](const C& c) { return std::to_string(c.problem.rows); }},
      {"problem.cols", [](C& c, S v) { c.problem.cols = int_at_least(v, 1, 1 << 20); },
       [](const C& c) { return std::to_string(c.problem.cols); }},
      {"problem.k_background", [](C& c, S v) { c.problem.k_background = positive_real(v); },
       [](const C& c) { return fmt(c.problem.k_background); }},
      {"problem.k_fracture", [](C& c, S v) { c.problem.k_fracture = positive_real(v); },
       [](const C& c) { return fmt(c.problem.k_fracture); }},
      {"problem.right_branch_multiplier", [](C& c, S v) { c.problem.right_branch_multiplier = positive_real(v); },
       [](const C& c) { return fmt(c.problem.right_branch_multiplier); }},
      {"problem.boundary_axis", [](C& c, S v) { c.problem.boundary_axis = wrap_enum(boundary_axis_from_string, v); },
       [](const C& c) { return to_string(c.problem.boundary_axis); }},
      {"problem.boundary_high", [](C& c, S v) { c.problem.boundary_high = to_real(v); },
       [](const C& c) { return fmt(c.problem.boundary_high); }},
      {"problem.boundary_low", [](C& c, S v) { c.problem.boundary_low = to_real(v); },
       [](const C& c) { return fmt(c.problem.boundary_low); }},

      {"sso.q", [](C& c, S v) {
         std::vector<int> q;
         for (const auto& item : split_list(v)) q.push_back(int_at_least(item, 1));
         c.sso.q_grid = std::move(q);
       },
       [](const C& c) { return join(c.sso.q_grid, [](int q) { return std::to_string(q); }); }},
      {"sso.trials", [](C& c, S v) { c.sso.trials = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.sso.trials); }},
      {"sso.shots", [](C& c, S v) { c.sso.shots = to_u64(v, 1); },
       [](const C& c) { return std::to_string(c.sso.shots); }},
      {"sso.exact", [](C& c, S v) { c.sso.exact_state = to_bool(v); },
       [](const C& c) { return std::string(c.sso.exact_state ? "true" : "false"); }},

      {"vls.restarts", [](C& c, S v) { c.vls.restarts = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.vls.restarts); }},
      {"vls.iterations", [](C& c, S v) { c.vls.iterations = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.vls.iterations); }},
      {"vls.layers", [](C& c, S v) {
         if (trim(v) == "auto") c.vls.layers.reset();
         else c.vls.layers = int_at_least(v, 1, 64);
       },
       [](const C& c) { return c.vls.layers ? std::to_string(*c.vls.layers) : std::string("auto"); }},
      {"vls.cost", [](C& c, S v) {
         if (trim(v) == "auto") c.vls.cost.reset();
         else c.vls.cost = wrap_enum(cost_mode_from_string, v);
       },
       [](const C& c) { return c.vls.cost ? to_string(*c.vls.cost) : std::string("auto"); }},
      {"vls.optimizer", [](C& c, S v) { c.vls.optimizer = wrap_enum(optimizer_from_string, v); },
       [](const C& c) { return to_string(c.vls.optimizer); }},
      {"vls.shots", [](C& c, S v) {
         if (trim(v) == "exact") c.vls.shots.reset();
         else c.vls.shots = to_u64(v, 1);
       },
       [](const C& c) { return c.vls.shots ? std::to_string(*c.vls.shots) : std::string("exact"); }},
      {"vls.qubits", [](C& c, S v) {
         std::vector<int> q;
         for (const auto& item : split_list(v)) q.push_back(pitchfork_qubits(item));
         c.vls.qubits = std::move(q);
       },
       [](const C& c) { return join(c.vls.qubits, [](int q) { return std::to_string(q); }); }},
      {"vls.multipliers", [](C& c, S v) {
         std::vector<double> m;
         for (const auto& item : split_list(v)) m.push_back(positive_real(item));
         c.vls.multipliers = std::move(m);
       },
       [](const C& c) { return join(c.vls.multipliers, fmt); }},

      {"noise.circuits", [](C& c, S v) { c.noise.circuits = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.noise.circuits); }},
      {"noise.max_qubits", [](C& c, S v) { c.noise.max_qubits = int_at_least(v, 1, 10); },
       [](const C& c) { return std::to_string(c.noise.max_qubits); }},
      {"noise.max_layers", [](C& c, S v) { c.noise.max_layers = int_at_least(v, 1, 64); },
       [](const C& c) { return std::to_string(c.noise.max_layers); }},
      {"noise.p", [](C& c, S v) {
         std::vector<double> p;
         for (const auto& item : split_list(v)) {
           const double x = to_real(item);
           if (x < 0 || x > 1) throw BadValue{"probabilities must lie in [0, 1]"};
           p.push_back(x);
         }
         c.noise.p_grid = std::move(p);
       },
       [](const C& c) { return join(c.noise.p_grid, fmt); }},

      {"encode.rows", [](C& c, S v) { c.encode.rows = int_at_least(v, 1, 1 << 12); },
       [](const C& c) { return std::to_string(c.encode.rows); }},
      {"encode.cols", [](C& c, S v) { c.encode.cols = int_at_least(v, 1, 1 << 12); },
       [](const C& c) { return std::to_string(c.encode.cols); }},
      {"encode.shots", [](C& c, S v) { c.encode.shots = to_u64(v, 1); },
       [](const C& c) { return std::to_string(c.encode.shots); }},

      {"compile.haar_instances", [](C& c, S v) { c.compile.haar_instances = int_at_least(v, 0); },
       [](const C& c) { return std::to_string(c.compile.haar_instances); }},
      {"compile.sso_instances", [](C& c, S v) { c.compile.sso_instances = int_at_least(v, 0); },
       [](const C& c) { return std::to_string(c.compile.sso_instances); }},
      {"compile.sso_nodes", [](C& c, S v) {
         c.compile.sso_nodes = int_at_least(v, 4, 8);
         if (c.compile.sso_nodes != 4 && c.compile.sso_nodes != 8) throw BadValue{"must be 4 or 8"};
       },
       [](const C& c) { return std::to_string(c.compile.sso_nodes); }},
      {"compile.sso_q", [](C& c, S v) { c.compile.sso_q = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.compile.sso_q); }},
      {"compile.restarts", [](C& c, S v) { c.compile.restarts = int_at_least(v, 1); },
       [](const C& c) { return std::to_string(c.compile.restarts); }},
      {"compile.cnots_3q", [](C& c, S v) { c.compile.cnots_3q = int_at_least(v, 1, 200); },
       [](const C& c) { return std::to_string(c.compile.cnots_3q); }},
  };
  return table;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [k, name] : experiment_table()) {
    if (k == kind) return name;
  }
  throw InternalError("unnamed experiment kind");
}

ExperimentKind experiment_from_string(const std::string& name) {
  for (const auto& [k, n] : experiment_table()) {
    if (n == name) return k;
  }
  throw ValidationError("unknown experiment '" + name + "'");
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& entry : experiment_table()) out.push_back(entry.second);
    return out;
  }();
  return names;
}

std::vector<std::string> known_keys() {
  std::vector<std::string> out;
  for (const auto& spec : key_table()) out.push_back(spec.key);
  return out;
}

ConfigValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ValidationError("cannot parse '" + path + "': " + e.what());
  }
  ConfigValues values;
  for (const auto& item : items) {
    // Section open/close markers.
    if (item.name == "++" || item.name == "--") continue;
    std::string joined;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) {
      if (i) joined += ",";
      joined += item.inputs[i];
    }
    values[item.fullname()] = joined;
  }
  return values;
}

ExperimentConfig apply_config(ExperimentConfig base, const ConfigValues& values, std::vector<Diagnostic>& diagnostics) {
  const auto& table = key_table();
  for (const auto& [key, raw] : values) {
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& s) { return s.key == key; });
    if (it == table.end()) {
      diagnostics.push_back({key, "unknown key"});
      continue;
    }
    try {
      it->set(base, raw);
    } catch (const BadValue& bad) {
      diagnostics.push_back({key, bad.reason});
    }
  }
  return base;
}

std::vector<Diagnostic> validate(const ExperimentConfig& config) {
  std::vector<Diagnostic> out;
  const auto grid_ok = [](int rows, int cols) {
    return is_power_of_two(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  };
  if (config.sso.q_grid.empty()) out.push_back({"sso.q", "needs at least one step count"});
  for (int q : config.sso.q_grid) {
    if (q < 1) out.push_back({"sso.q", "step counts must be at least 1, got " + std::to_string(q)});
  }
  if (config.vls.restarts < 1) out.push_back({"vls.restarts", "must be at least 1"});
  if (config.vls.iterations < 1) out.push_back({"vls.iterations", "must be at least 1"});
  if (config.sso.trials < 1) out.push_back({"sso.trials", "must be at least 1"});
  if (!grid_ok(config.problem.rows, config.problem.cols)) {
    out.push_back({"problem.rows", "rows * cols must be a power of two"});
  }
  if (config.problem.rows < 4 || config.problem.cols < 4) {
    if (config.experiment == ExperimentKind::VlsPitchfork5q ||
        config.experiment == ExperimentKind::VlsVaryingPermeability) {
      out.push_back({"problem.rows", "a pitchfork needs at least a 4x4 grid"});
    }
  }
  if (!grid_ok(config.encode.rows, config.encode.cols) || config.encode.rows < 4 || config.encode.cols < 4) {
    out.push_back({"encode.rows", "encoding grid must be at least 4x4 with a power-of-two node count"});
  }
  if (config.vls.qubits.empty()) out.push_back({"vls.qubits", "needs at least one size"});
  if (config.vls.multipliers.empty()) out.push_back({"vls.multipliers", "needs at least one multiplier"});
  if (config.noise.p_grid.empty()) out.push_back({"noise.p", "needs at least one probability"});
  return out;
}

std::vector<Diagnostic> validate_file(const std::string& path) {
  std::vector<Diagnostic> diagnostics;
  ConfigValues values;
  try {
    values = read_config_file(path);
  } catch (const Error& e) {
    return {{"<file>", e.what()}};
  }
  const ExperimentConfig config = apply_config(ExperimentConfig{}, values, diagnostics);
  for (auto& d : validate(config)) diagnostics.push_back(std::move(d));
  return diagnostics;
}

std::string canonical_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& spec : key_table()) {
    // Where results land does not change them.
    if (spec.key == "output") continue;
    out += spec.key + " = " + spec.get(config) + "\n";
  }
  return out;
}

}  // namespace qflow
