#pragma once

#include "densitop/fem.hpp"
#include "densitop/field.hpp"
#include "densitop/material.hpp"
#include "densitop/problem.hpp"

namespace densitop {

enum class AdjointMode {
  // lambda = U; valid because c = F^T U and K is symmetric.
  kSelfAdjoint,
  // Full reverse pass through compliance, the sparse solve (second solve on the
  // reused factorization) and assembly. Kept for cross-checking the shortcut.
  kGenericSolve,
};

struct ObjectiveOptions {
  bool use_filter = true;
  AdjointMode adjoint = AdjointMode::kSelfAdjoint;
  FemOptions fem;
};

struct ObjectiveReport {
  double compliance = 0.0;
  DensityField grad;  // dc/dx, same shape as x
  double volume = 0.0;
  DensityField volume_grad;
};

/// Compliance objective c(x) = compliance(physical_density(x), displace(...)).
/// Holds the element stiffness and material model derived from the spec.
class ComplianceObjective {
 public:
  explicit ComplianceObjective(ProblemSpec spec, ObjectiveOptions options = {});

  const ProblemSpec& spec() const { return spec_; }
  const MaterialModel& model() const { return model_; }
  const ElementStiffness& k0() const { return k0_; }
  const ObjectiveOptions& options() const { return options_; }

  double evaluate(const DensityField& x) const;
  ObjectiveReport gradient(const DensityField& x) const;

 private:
  void check(const DensityField& x) const;

  ProblemSpec spec_;
  ObjectiveOptions options_;
  MaterialModel model_;
  ElementStiffness k0_;
};

/// mean_density(x) - spec.density; feasible iff <= 0.
double volume_constraint(const DensityField& x, const ProblemSpec& spec, bool use_filter = true);

/// d(mean_density)/dx: mask * filter_adjoint(1 / (N * mean(mask))).
DensityField volume_constraint_gradient(const ProblemSpec& spec, bool use_filter = true);

}  // namespace densitop
