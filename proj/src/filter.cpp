#include "densitop/filter.hpp"

#include <cmath>

#include "densitop/errors.hpp"

namespace densitop {
namespace {

// Maps any integer index onto [0, n) by mirror reflection with the edge
// sample repeated. Period is 2n, so kernels wider than the signal still work.
int reflect_index(int i, int n) {
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

// One 1D correlation pass along a strided line. The symmetric pairing matches
// scipy's accumulation order: w0*x[i] + sum_{k=r..1} w_k*(x[i-k] + x[i+k]).
void filter_line(const double* in, double* out, int n, std::ptrdiff_t stride,
                 const std::vector<double>& w) {
  const int r = static_cast<int>(w.size() / 2);
  for (int i = 0; i < n; ++i) {
    double acc = in[i * stride] * w[r];
    for (int k = r; k >= 1; --k) {
      acc += (in[reflect_index(i - k, n) * stride] + in[reflect_index(i + k, n) * stride]) * w[r - k];
    }
    out[i * stride] = acc;
  }
}

}  // namespace

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian filter width must be positive");
  const int r = static_cast<int>(4.0 * sigma + 0.5);
  std::vector<double> w(2 * r + 1);
  double total = 0.0;
  for (int k = -r; k <= r; ++k) {
    w[k + r] = std::exp(-0.5 / (sigma * sigma) * static_cast<double>(k * k));
    total += w[k + r];
  }
  for (double& v : w) v /= total;
  return w;
}

DensityField gaussian_filter(const DensityField& x, double sigma) {
  const auto w = gaussian_kernel(sigma);
  const int rows = x.rows();
  const int cols = x.cols();
  if (rows == 0 || cols == 0) return x;

  // Axis 0 (down each column) first, then axis 1, as scipy does.
  DensityField tmp(rows, cols);
  for (int c = 0; c < cols; ++c) {
    filter_line(&x.values()[c], &tmp.values()[c], rows, cols, w);
  }
  DensityField out(rows, cols);
  for (int r = 0; r < rows; ++r) {
    filter_line(&tmp.values()[static_cast<std::size_t>(r) * cols],
                &out.values()[static_cast<std::size_t>(r) * cols], cols, 1, w);
  }
  return out;
}

DensityField gaussian_filter_adjoint(const DensityField& cotangent, double sigma) {
  return gaussian_filter(cotangent, sigma);
}

DensityField physical_density(const DensityField& x, const ProblemSpec& spec, bool use_filter) {
  if (x.rows() != spec.nely || x.cols() != spec.nelx) {
    throw ValidationError("density field shape does not match (nely, nelx)");
  }
  DensityField masked = x;
  if (spec.mask) {
    if (!spec.mask->same_shape(x)) throw ValidationError("mask shape mismatch");
    for (std::size_t i = 0; i < masked.size(); ++i) masked[i] *= (*spec.mask)[i];
  }
  return use_filter ? gaussian_filter(masked, spec.filter_width) : masked;
}

double mean_density(const DensityField& x, const ProblemSpec& spec, bool use_filter) {
  const double mask_mean = spec.mask ? mean(*spec.mask) : 1.0;
  if (mask_mean == 0.0) throw ValidationError("mean of mask is zero");
  return mean(physical_density(x, spec, use_filter)) / mask_mean;
}

}  // namespace densitop
