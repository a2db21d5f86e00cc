#include "densitop/field.hpp"

#include <numeric>
#include <stdexcept>

namespace densitop {

DensityField::DensityField(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows < 0 || cols < 0 || values_.size() != static_cast<std::size_t>(rows) * cols) {
    throw std::invalid_argument("DensityField: value count does not match shape");
  }
}

double sum(const DensityField& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0);
}

double mean(const DensityField& f) { return f.size() == 0 ? 0.0 : sum(f) / f.size(); }

double dot(const DensityField& a, const DensityField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("dot: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

}  // namespace densitop
