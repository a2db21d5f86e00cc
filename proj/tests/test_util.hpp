#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "densitop/field.hpp"

namespace densitop::testing {

inline DensityField random_field(int rows, int cols, std::mt19937& rng, double lo = 0.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  DensityField f(rows, cols);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = dist(rng);
  return f;
}

inline double relative_error(double a, double b, double floor = 0.0) {
  const double scale = std::max({std::abs(a), std::abs(b), floor});
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace densitop::testing
