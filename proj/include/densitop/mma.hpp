#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "densitop/field.hpp"
#include "densitop/objective.hpp"
#include "densitop/problem.hpp"

namespace densitop {

/// Method of Moving Asymptotes settings. Defaults are the usual Svanberg values.
struct MmaConfig {
  double asym_init = 0.5;
  double asym_incr = 1.2;
  double asym_decr = 0.7;
  double move_limit = 0.5;
  double subproblem_tolerance = 1e-10;
  int max_evaluations = 0;  // 0: opt_steps + 1 when driven by optimize()

  // Asymptotes stay within [1e-5, 10] * range of x; variables within
  // albefa * (distance to asymptote) of it.
  double asym_min_gap = 1e-5;
  double asym_max_gap = 10.0;
  double albefa = 0.1;
  // Keeps the approximation strictly convex where a derivative is zero.
  double raa0 = 1e-5;

  void validate() const;
};

struct Box {
  double lower = 0.0;
  double upper = 1.0;
};

/// Optimizer state between steps. lower_asymptote < x < upper_asymptote
/// elementwise once a step has been taken.
struct OptState {
  std::vector<double> x;
  std::vector<double> x_prev;
  std::vector<double> x_prev2;
  std::vector<double> lower_asymptote;
  std::vector<double> upper_asymptote;
  int iteration = 0;

  static OptState start(std::vector<double> x0, Box box);
};

/// Value and gradient of a function at the state's current x.
struct Evaluation {
  double value = 0.0;
  std::span<const double> grad;
};

/// One MMA iteration for min f(x) s.t. g(x) <= 0, x in box. Builds the
/// separable convex approximations of f and g around x and solves that
/// subproblem exactly through its one-dimensional dual (bisection on the
/// single multiplier). The returned x satisfies the approximated constraint.
///
/// Throws NumericalError for non-finite gradients, or when no point in the
/// move-limited box satisfies the approximated constraint.
OptState mma_step(const OptState& state, const Evaluation& f, const Evaluation& g, Box box,
                  const MmaConfig& config = {});

struct Progress {
  int evaluation = 0;
  double loss = 0.0;
  double volume = 0.0;
  double elapsed_seconds = 0.0;
  const DensityField* x = nullptr;
};

struct OptimizeCallbacks {
  // Every print_every evaluations.
  std::function<void(const Progress&)> on_progress;
  // Every evaluation.
  std::function<void(const Progress&)> on_evaluation;
};

struct OptimizeOptions {
  MmaConfig mma;
  ObjectiveOptions objective;
  bool keep_frames = false;
};

struct OptimizeResult {
  std::vector<double> losses;   // one per objective evaluation
  std::vector<double> volumes;  // mean physical density at each evaluation
  std::vector<double> elapsed_seconds;
  DensityField x;               // design at the last evaluation
  std::vector<DensityField> frames;
  double final_constraint = 0.0;
};

/// Starts from uniform spec.density (or x0), evaluates at most
/// opt_steps + 1 times, taking an MMA step between evaluations.
OptimizeResult optimize(const ProblemSpec& spec, const std::optional<DensityField>& x0 = {},
                        const OptimizeCallbacks& callbacks = {},
                        const OptimizeOptions& options = {});

}  // namespace densitop
