#pragma once

#include "densitop/problem.hpp"

namespace densitop {

/// Modified SIMP: E(x) = e_min + x^penal (e_0 - e_min).
struct MaterialModel {
  double e_0 = 1.0;
  double e_min = 1e-9;
  double penal = 3.0;

  static MaterialModel from(const ProblemSpec& spec) {
    return {spec.young, spec.young_min, spec.penal};
  }
};

// x is expected in [0, 1]; clamping is the caller's job.
double young_modulus(double x, const MaterialModel& model);
double young_modulus_derivative(double x, const MaterialModel& model);

}  // namespace densitop
