#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace densitop {

/// Rank-2 real array stored row-major. Used for the element density grid
/// (shape nely x nelx, row 0 is the top of the domain) and anything shaped
/// like it: filtered densities, sensitivities, masks.
class DensityField {
 public:
  DensityField() = default;
  DensityField(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(static_cast<std::size_t>(rows) * cols, fill) {}
  DensityField(int rows, int cols, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(int r, int c) { return values_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const {
    return values_[static_cast<std::size_t>(r) * cols_ + c];
  }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const DensityField& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const DensityField&, const DensityField&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

double sum(const DensityField& f);
double mean(const DensityField& f);
double dot(const DensityField& a, const DensityField& b);

}  // namespace densitop
