#pragma once

#include "qflow/common.hpp"

#include <functional>
#include <string>

namespace qflow {

enum class OptimizerKind { ConjugateGradient, GradientDescent };

std::string to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

/// Value and gradient at x.
using Objective = std::function<double(const RVector& x, RVector& grad)>;

struct MinimizeOptions {
  OptimizerKind method = OptimizerKind::ConjugateGradient;
  int max_iterations = 150;
  double initial_step = 0.1;  ///< first trial step length, in units of x
  double armijo = 1e-4;
  double shrink = 0.5;
  double gradient_tolerance = 1e-12;
  double target_value = -1e300;  ///< stop once the value is at or below this
};

struct MinimizeResult {
  RVector x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
};

/// Called after every accepted step with (iteration, x, value); returning
/// false stops the run.
using IterationCallback = std::function<bool(int, const RVector&, double)>;

/// Polak-Ribiere+ nonlinear conjugate gradient (restarted every dim(x)
/// iterations or on loss of descent), or steepest descent, with a backtracking
/// Armijo line search. The trial step length adapts to the last accepted step:
/// accepted trials are extended by doubling and refined with a quadratic model
/// of the line function.
MinimizeResult minimize(const Objective& f, RVector x0, const MinimizeOptions& options,
                        const IterationCallback& on_iteration = {});

}  // namespace qflow
