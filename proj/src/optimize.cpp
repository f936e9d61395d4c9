#include "qflow/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace qflow {

std::string to_string(OptimizerKind kind) {
  return kind == OptimizerKind::ConjugateGradient ? "nonlinear-conjugate-gradient" : "gradient-descent-with-backtracking";
}

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "nonlinear-conjugate-gradient" || name == "cg") return OptimizerKind::ConjugateGradient;
  if (name == "gradient-descent-with-backtracking" || name == "gd") return OptimizerKind::GradientDescent;
  throw ValidationError("unknown optimizer '" + name + "'");
}

namespace {

struct Point {
  double value;
  RVector grad;
};

}  // namespace

MinimizeResult minimize(const Objective& f, RVector x0, const MinimizeOptions& options,
                        const IterationCallback& on_iteration) {
  MinimizeResult res;
  res.x = std::move(x0);
  RVector g;
  double fx = f(res.x, g);
  res.evaluations = 1;

  auto eval = [&](const RVector& at) {
    Point p;
    p.value = f(at, p.grad);
    ++res.evaluations;
    return p;
  };

  RVector d = -g;
  double step_length = options.initial_step;
  const auto dim = res.x.size();

  for (int it = 0; it < options.max_iterations; ++it) {
    if (g.norm() <= options.gradient_tolerance || fx <= options.target_value) break;

    double slope = g.dot(d);
    if (!(slope < 0.0)) {
      d = -g;
      slope = g.dot(d);
    }
    const double d_norm = d.norm();
    double alpha = step_length / d_norm;

    Point trial = eval(res.x + alpha * d);
    if (trial.value <= fx + options.armijo * alpha * slope) {
      // extend while the longer step is both better and still sufficient
      for (int k = 0; k < 30; ++k) {
        Point longer = eval(res.x + 2.0 * alpha * d);
        if (longer.value < trial.value && longer.value <= fx + options.armijo * 2.0 * alpha * slope) {
          alpha *= 2.0;
          trial = std::move(longer);
        } else {
          break;
        }
      }
    } else {
      while (true) {
        alpha *= options.shrink;
        trial = eval(res.x + alpha * d);
        if (trial.value <= fx + options.armijo * alpha * slope || alpha * d_norm < 1e-14) break;
      }
      if (!(trial.value < fx)) break;  // no descent possible along d
    }

    // quadratic through (0, fx), slope and (alpha, trial.value)
    const double curvature = 2.0 * (trial.value - fx - slope * alpha);
    if (curvature > 0.0) {
      const double alpha_q = -slope * alpha * alpha / curvature;
      if (alpha_q > 0.0 && alpha_q < 4.0 * alpha) {
        Point refined = eval(res.x + alpha_q * d);
        if (refined.value < trial.value) {
          alpha = alpha_q;
          trial = std::move(refined);
        }
      }
    }

    res.x += alpha * d;
    step_length = std::max(alpha * d_norm, 1e-10);
    RVector g_new = std::move(trial.grad);
    fx = trial.value;
    res.iterations = it + 1;

    if (options.method == OptimizerKind::ConjugateGradient) {
      double beta = std::max(0.0, g_new.dot(g_new - g) / g.squaredNorm());
      if ((it + 1) % dim == 0 || !std::isfinite(beta)) beta = 0.0;
      d = -g_new + beta * d;
    } else {
      d = -g_new;
    }
    g = std::move(g_new);

    if (on_iteration && !on_iteration(res.iterations, res.x, fx)) break;
  }
  res.value = fx;
  return res;
}

}  // namespace qflow
