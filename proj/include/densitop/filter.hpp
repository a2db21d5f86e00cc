#pragma once

#include <vector>

#include "densitop/field.hpp"
#include "densitop/problem.hpp"

namespace densitop {

/// Normalized 1D Gaussian weights w[-r..r] (stored at index k + r) with
/// r = floor(4 sigma + 0.5), the same truncation scipy.ndimage uses.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur along rows then columns with "reflect" boundaries
/// (d c b a | a b c d). Output shape equals input shape.
DensityField gaussian_filter(const DensityField& x, double sigma);

/// Vector-Jacobian product of gaussian_filter. The kernel is symmetric and the
/// reflect extension keeps the operator symmetric, so this is the filter itself.
DensityField gaussian_filter_adjoint(const DensityField& cotangent, double sigma);

/// mask * x, then Gaussian-filtered when use_filter is set.
DensityField physical_density(const DensityField& x, const ProblemSpec& spec,
                              bool use_filter = true);

/// Mean physical density divided by mean mask.
double mean_density(const DensityField& x, const ProblemSpec& spec, bool use_filter = true);

}  // namespace densitop
