#include "densitop/material.hpp"

#include <cmath>

namespace densitop {

double young_modulus(double x, const MaterialModel& m) {
  return m.e_min + std::pow(x, m.penal) * (m.e_0 - m.e_min);
}

double young_modulus_derivative(double x, const MaterialModel& m) {
  return m.penal * std::pow(x, m.penal - 1.0) * (m.e_0 - m.e_min);
}

}  // namespace densitop
