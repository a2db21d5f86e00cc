#include "densitop/objective.hpp"

#include <cmath>

#include "densitop/errors.hpp"
#include "densitop/filter.hpp"

namespace densitop {

ComplianceObjective::ComplianceObjective(ProblemSpec spec, ObjectiveOptions options)
    : spec_(std::move(spec)),
      options_(options),
      model_(MaterialModel::from(spec_)),
      k0_(element_stiffness(spec_.young, spec_.poisson)) {
  validate(spec_);
}

void ComplianceObjective::check(const DensityField& x) const {
  if (x.rows() != spec_.nely || x.cols() != spec_.nelx) {
    throw ValidationError("density field shape does not match (nely, nelx)");
  }
  for (double v : x.values()) {
    if (!std::isfinite(v)) throw NumericalError("density field contains a non-finite value");
  }
}

double ComplianceObjective::evaluate(const DensityField& x) const {
  check(x);
  const DensityField x_phys = physical_density(x, spec_, options_.use_filter);
  const auto u = displace(x_phys, k0_, spec_, model_, options_.fem);
  return compliance(x_phys, u, k0_, model_, options_.fem.threads);
}

ObjectiveReport ComplianceObjective::gradient(const DensityField& x) const {
  check(x);
  const int nelx = spec_.nelx;
  const int nely = spec_.nely;
  const DensityField x_phys = physical_density(x, spec_, options_.use_filter);
  const StaticSolution sol = solve_displacement(x_phys, k0_, spec_, model_, options_.fem);
  const DensityField energy = element_energies(sol.u, k0_, nelx, nely, options_.fem.threads);

  ObjectiveReport report;
  report.compliance = 0.0;
  for (int elx = 0; elx < nelx; ++elx) {
    for (int ely = 0; ely < nely; ++ely) {
      report.compliance += young_modulus(x_phys(ely, elx), model_) * energy(ely, elx);
    }
  }

  // dc/dx_phys
  DensityField g(nely, nelx);
  if (options_.adjoint == AdjointMode::kSelfAdjoint) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = -young_modulus_derivative(x_phys[i], model_) * energy[i];
    }
  } else {
    // Direct term of c = sum_e E_e u_e^T k0 u_e with u held fixed.
    DensityField dc_dstiffness = energy;
    // dc/du = 2 K u, gathered on free DOFs in reduced order.
    const CscMatrix& k = sol.factor->matrix();
    auto grad_u = k.multiply(sol.u_free);
    for (double& v : grad_u) v *= 2.0;
    const auto grad_entries = solve_coo_adjoint_entries(sol.stiffness.matrix, *sol.factor,
                                                        sol.u_free, grad_u, /*sym_pos=*/true);
    // Entry k carries E_e * k0[a][b]; pull back onto E_e.
    for (std::size_t t = 0; t < grad_entries.size(); ++t) {
      const std::int64_t origin = sol.stiffness.origin[t];
      const int e = static_cast<int>(origin / 64);
      const int ab = static_cast<int>(origin % 64);
      dc_dstiffness(e % nely, e / nely) += grad_entries[t] * k0_.k[ab];
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
      g[i] = young_modulus_derivative(x_phys[i], model_) * dc_dstiffness[i];
    }
  }

  if (options_.use_filter) g = gaussian_filter_adjoint(g, spec_.filter_width);
  if (spec_.mask) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= (*spec_.mask)[i];
  }
  for (double v : g.values()) {
    if (!std::isfinite(v)) throw NumericalError("objective gradient is not finite");
  }
  report.grad = std::move(g);
  report.volume = mean_density(x, spec_, options_.use_filter);
  report.volume_grad = volume_constraint_gradient(spec_, options_.use_filter);
  return report;
}

double volume_constraint(const DensityField& x, const ProblemSpec& spec, bool use_filter) {
  return mean_density(x, spec, use_filter) - spec.density;
}

DensityField volume_constraint_gradient(const ProblemSpec& spec, bool use_filter) {
  const DensityField mask = spec.mask_field();
  const double mask_mean = mean(mask);
  if (mask_mean == 0.0) throw ValidationError("mean of mask is zero");
  const double n = static_cast<double>(spec.element_count());
  DensityField g(spec.nely, spec.nelx, 1.0 / (n * mask_mean));
  if (use_filter) g = gaussian_filter_adjoint(g, spec.filter_width);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] *= mask[i];
  return g;
}

}  // namespace densitop
