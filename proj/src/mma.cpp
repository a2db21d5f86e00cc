#include "densitop/mma.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "densitop/errors.hpp"
#include "densitop/filter.hpp"

namespace densitop {
namespace {

void require_finite(const Evaluation& e, const char* what) {
  if (!std::isfinite(e.value)) throw NumericalError(std::string(what) + " value is not finite");
  for (double v : e.grad) {
    if (!std::isfinite(v)) throw NumericalError(std::string(what) + " gradient is not finite");
  }
}

// Coefficients of the MMA approximation p/(U - x) + q/(x - L) + r of one function.
struct Approximation {
  std::vector<double> p;
  std::vector<double> q;
  double r = 0.0;
};

Approximation approximate(const Evaluation& f, std::span<const double> x,
                          std::span<const double> low, std::span<const double> upp, double range,
                          double raa0) {
  const std::size_t n = x.size();
  Approximation a;
  a.p.resize(n);
  a.q.resize(n);
  a.r = f.value;
  for (std::size_t j = 0; j < n; ++j) {
    const double ux = upp[j] - x[j];
    const double xl = x[j] - low[j];
    const double plus = std::max(f.grad[j], 0.0);
    const double minus = std::max(-f.grad[j], 0.0);
    a.p[j] = ux * ux * (1.001 * plus + 0.001 * minus + raa0 / range);
    a.q[j] = xl * xl * (0.001 * plus + 1.001 * minus + raa0 / range);
    a.r -= a.p[j] / ux + a.q[j] / xl;
  }
  return a;
}

}  // namespace

void MmaConfig::validate() const {
  if (!(asym_decr > 0.0 && asym_decr < 1.0 && asym_incr > 1.0)) {
    throw ValidationError("MMA asymptote factors must satisfy 0 < decr < 1 < incr");
  }
  if (!(move_limit > 0.0 && move_limit <= 1.0)) {
    throw ValidationError("MMA move_limit must be in (0, 1]");
  }
  if (!(asym_init > 0.0)) throw ValidationError("MMA asym_init must be positive");
  if (!(subproblem_tolerance > 0.0)) throw ValidationError("MMA tolerance must be positive");
}

OptState OptState::start(std::vector<double> x0, Box box) {
  OptState s;
  s.x = std::move(x0);
  s.x_prev = s.x;
  s.x_prev2 = s.x;
  s.lower_asymptote.assign(s.x.size(), box.lower);
  s.upper_asymptote.assign(s.x.size(), box.upper);
  return s;
}

OptState mma_step(const OptState& state, const Evaluation& f, const Evaluation& g, Box box,
                  const MmaConfig& cfg) {
  const std::size_t n = state.x.size();
  if (f.grad.size() != n || g.grad.size() != n) {
    throw std::invalid_argument("mma_step: gradient length does not match x");
  }
  require_finite(f, "objective");
  require_finite(g, "constraint");
  const double range = box.upper - box.lower;
  const auto& x = state.x;

  std::vector<double> low(n), upp(n);
  if (state.iteration < 2) {
    for (std::size_t j = 0; j < n; ++j) {
      low[j] = x[j] - cfg.asym_init * range;
      upp[j] = x[j] + cfg.asym_init * range;
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double trend = (x[j] - state.x_prev[j]) * (state.x_prev[j] - state.x_prev2[j]);
      const double factor = trend > 0.0 ? cfg.asym_incr : trend < 0.0 ? cfg.asym_decr : 1.0;
      low[j] = x[j] - factor * (state.x_prev[j] - state.lower_asymptote[j]);
      upp[j] = x[j] + factor * (state.upper_asymptote[j] - state.x_prev[j]);
      low[j] = std::clamp(low[j], x[j] - cfg.asym_max_gap * range, x[j] - cfg.asym_min_gap * range);
      upp[j] = std::clamp(upp[j], x[j] + cfg.asym_min_gap * range, x[j] + cfg.asym_max_gap * range);
    }
  }

  std::vector<double> alpha(n), beta(n);
  for (std::size_t j = 0; j < n; ++j) {
    alpha[j] = std::max({box.lower, low[j] + cfg.albefa * (x[j] - low[j]),
                         x[j] - cfg.move_limit * range});
    beta[j] = std::min({box.upper, upp[j] - cfg.albefa * (upp[j] - x[j]),
                        x[j] + cfg.move_limit * range});
  }

  const Approximation obj = approximate(f, x, low, upp, range, cfg.raa0);
  const Approximation con = approximate(g, x, low, upp, range, cfg.raa0);

  // Primal minimizer of the Lagrangian for multiplier lambda.
  std::vector<double> trial(n);
  auto primal = [&](double lambda) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sp = std::sqrt(obj.p[j] + lambda * con.p[j]);
      const double sq = std::sqrt(obj.q[j] + lambda * con.q[j]);
      trial[j] = std::clamp((sp * low[j] + sq * upp[j]) / (sp + sq), alpha[j], beta[j]);
    }
  };
  // Approximated constraint at the current trial point; this is the dual slope.
  auto constraint_at_trial = [&] {
    double h = con.r;
    for (std::size_t j = 0; j < n; ++j) {
      h += con.p[j] / (upp[j] - trial[j]) + con.q[j] / (trial[j] - low[j]);
    }
    return h;
  };

  primal(0.0);
  if (constraint_at_trial() > 0.0) {
    double lo = 0.0;
    double hi = 1.0;
    primal(hi);
    while (constraint_at_trial() > 0.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e100) {
        throw NumericalError("MMA subproblem infeasible: the approximated constraint cannot be "
                             "satisfied inside the move-limited box (constraint value " +
                             std::to_string(g.value) + ")");
      }
      primal(hi);
    }
    while (hi - lo > cfg.subproblem_tolerance * hi) {
      const double mid = 0.5 * (lo + hi);
      primal(mid);
      if (constraint_at_trial() > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    primal(hi);
  }

  OptState next;
  next.x = trial;
  next.x_prev = x;
  next.x_prev2 = state.x_prev;
  next.lower_asymptote = std::move(low);
  next.upper_asymptote = std::move(upp);
  next.iteration = state.iteration + 1;
  return next;
}

OptimizeResult optimize(const ProblemSpec& spec, const std::optional<DensityField>& x0,
                        const OptimizeCallbacks& callbacks, const OptimizeOptions& options) {
  options.mma.validate();
  const ComplianceObjective objective(spec, options.objective);
  const Box box{0.0, 1.0};

  DensityField x = x0.value_or(DensityField(spec.nely, spec.nelx, spec.density));
  if (x.rows() != spec.nely || x.cols() != spec.nelx) {
    throw ValidationError("initial design shape does not match (nely, nelx)");
  }
  const int max_evals =
      options.mma.max_evaluations > 0 ? options.mma.max_evaluations : spec.opt_steps + 1;

  OptimizeResult result;
  OptState state = OptState::start(std::vector<double>(x.values().begin(), x.values().end()), box);
  const auto t0 = std::chrono::steady_clock::now();

  for (int eval = 1; eval <= max_evals; ++eval) {
    const ObjectiveReport report = objective.gradient(x);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.losses.push_back(report.compliance);
    result.volumes.push_back(report.volume);
    result.elapsed_seconds.push_back(elapsed);
    if (options.keep_frames) result.frames.push_back(x);

    const Progress progress{eval, report.compliance, report.volume, elapsed, &x};
    if (callbacks.on_evaluation) callbacks.on_evaluation(progress);
    if (callbacks.on_progress && eval % spec.print_every == 0) callbacks.on_progress(progress);
    if (eval == max_evals) break;

    const Evaluation f{report.compliance, report.grad.values()};
    const Evaluation g{report.volume - spec.density, report.volume_grad.values()};
    state = mma_step(state, f, g, box, options.mma);
    x = DensityField(spec.nely, spec.nelx, state.x);
  }

  result.final_constraint = volume_constraint(x, spec, options.objective.use_filter);
  result.x = std::move(x);
  return result;
}

}  // namespace densitop
