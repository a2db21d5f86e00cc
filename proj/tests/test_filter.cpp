#include <gtest/gtest.h>

#include <random>

#include "densitop/errors.hpp"
#include "densitop/filter.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace densitop {
namespace {

using testing::random_field;

double max_abs_diff(const DensityField& a, const DensityField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

TEST(GaussianKernel, RadiusFollowsRoundedFourSigma) {
  EXPECT_EQ(gaussian_kernel(1.0).size(), 9u);   // r = 4
  EXPECT_EQ(gaussian_kernel(1.3).size(), 11u);  // r = floor(5.7) = 5
  EXPECT_EQ(gaussian_kernel(0.1).size(), 1u);   // r = 0
  EXPECT_THROW(gaussian_kernel(0.0), ValidationError);
}

TEST(GaussianFilter, ConstantFieldPreserved) {
  for (double sigma : {0.5, 1.0, 2.0, 3.7}) {
    const DensityField x(6, 9, 0.37);
    const DensityField y = gaussian_filter(x, sigma);
    for (double v : y.values()) EXPECT_NEAR(v, 0.37, 1e-14);
  }
}

TEST(GaussianFilter, ImpulseResponse) {
  // Frozen from the dense convolution oracle (and scipy.ndimage.gaussian_filter).
  DensityField x(9, 9, 0.0);
  x(4, 4) = 1.0;
  const DensityField y = gaussian_filter(x, 1.0);
  EXPECT_NEAR(y(4, 4), 0.15915589174187972, 1e-15);
  EXPECT_NEAR(y(4, 5), 0.09653292801535476, 1e-15);
  EXPECT_NEAR(y(3, 3), 0.05855018051314528, 1e-15);

  const DensityField oracle = oracles::dense_convolution(x, 1.0);
  EXPECT_NEAR(oracle(4, 4), 0.15915589174187972, 1e-15);
}

TEST(GaussianFilter, MatchesDenseConvolutionOracle) {
  std::mt19937 rng(11);
  for (auto [rows, cols, sigma] :
       {std::tuple{9, 9, 1.0}, {4, 3, 1.0}, {7, 5, 1.0}, {12, 20, 1.6}, {2, 11, 2.5}, {1, 1, 1.0}}) {
    const DensityField x = random_field(rows, cols, rng, -1.0, 1.0);
    EXPECT_LE(max_abs_diff(gaussian_filter(x, sigma), oracles::dense_convolution(x, sigma)), 1e-12)
        << rows << "x" << cols << " sigma " << sigma;
  }
}

TEST(GaussianFilter, MatchesScipyReference) {
  // scipy.ndimage.gaussian_filter(a, sigma, mode='reflect') values.
  DensityField a(3, 4);
  for (int i = 0; i < 12; ++i) a[i] = std::pow(static_cast<double>(i), 1.5) / 7.0;
  const std::vector<double> ref = {
      0.6618856844148209, 0.8611131080566036, 1.1670927706869092, 1.411988529155097,
      1.603970373874305,  1.8881531085122831, 2.3021491340826556, 2.620095347945391,
      2.645539920975195,  3.006673198631426,  3.5196493791303185, 3.905287067772952};
  const DensityField y = gaussian_filter(a, 1.0);
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(y[i], ref[i], 1e-14);

  // sigma = 1.3 distinguishes radius floor(4 sigma + 0.5) = 5 from ceil(4 sigma) = 6.
  DensityField b(5, 7);
  for (int i = 0; i < 35; ++i) b[i] = std::sin(i * 1.3);
  const DensityField z = gaussian_filter(b, 1.3);
  EXPECT_NEAR(z(0, 0), 0.13374638291429566, 1e-14);
  EXPECT_NEAR(z(2, 3), -0.0013447630009993015, 1e-14);
  EXPECT_NEAR(z(4, 6), -0.10058265396042324, 1e-14);
}

TEST(GaussianFilter, ShapePreserved) {
  const DensityField y = gaussian_filter(DensityField(3, 8, 0.2), 1.0);
  EXPECT_EQ(y.rows(), 3);
  EXPECT_EQ(y.cols(), 8);
}

TEST(GaussianFilter, Linearity) {
  std::mt19937 rng(3);
  const DensityField x = random_field(6, 8, rng);
  const DensityField y = random_field(6, 8, rng);
  const double a = 1.7, b = -0.4;
  DensityField combo(6, 8);
  for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * x[i] + b * y[i];
  const DensityField fx = gaussian_filter(x, 1.0);
  const DensityField fy = gaussian_filter(y, 1.0);
  const DensityField fc = gaussian_filter(combo, 1.0);
  for (std::size_t i = 0; i < combo.size(); ++i) EXPECT_NEAR(fc[i], a * fx[i] + b * fy[i], 1e-12);
}

TEST(GaussianFilter, MassConserved) {
  std::mt19937 rng(5);
  for (auto [rows, cols] : {std::pair{7, 5}, {3, 11}, {25, 80}}) {
    const DensityField x = random_field(rows, cols, rng);
    EXPECT_NEAR(sum(gaussian_filter(x, 1.0)), sum(x), 1e-9 * sum(x));
  }
}

TEST(GaussianFilterAdjoint, InnerProductIdentity) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityField x = random_field(7, 5, rng, -1.0, 1.0);
    const DensityField y = random_field(7, 5, rng, -1.0, 1.0);
    EXPECT_NEAR(dot(gaussian_filter(x, 1.0), y), dot(x, gaussian_filter_adjoint(y, 1.0)), 1e-12);
  }
}

TEST(GaussianFilterAdjoint, OracleOperatorIsSymmetric) {
  const Eigen::MatrixXd m = oracles::dense_filter_matrix(7, 5, 1.0);
  EXPECT_LE((m - m.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GaussianFilterAdjoint, ZeroAndForwardAgreement) {
  const DensityField zero(5, 4, 0.0);
  EXPECT_EQ(gaussian_filter_adjoint(zero, 1.0), zero);
  std::mt19937 rng(9);
  const DensityField x = random_field(5, 4, rng);
  EXPECT_EQ(gaussian_filter_adjoint(x, 1.0), gaussian_filter(x, 1.0));
}

TEST(PhysicalDensity, NoFilterIsIdentity) {
  std::mt19937 rng(13);
  const ProblemSpec spec = mbb_beam(6, 4);
  const DensityField x = random_field(4, 6, rng);
  EXPECT_EQ(physical_density(x, spec, false), x);
}

TEST(PhysicalDensity, UniformStaysUniform) {
  const ProblemSpec spec = mbb_beam(6, 4);
  const DensityField y = physical_density(DensityField(4, 6, 0.4), spec, true);
  for (double v : y.values()) {
    EXPECT_NEAR(v, 0.4, 1e-15);
  }
}

TEST(PhysicalDensity, CheckerboardSmoothedIntoOpenInterval) {
  const ProblemSpec spec = mbb_beam(8, 6);
  DensityField x(6, 8);
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 8; ++c) x(r, c) = (r + c) % 2;
  const DensityField y = physical_density(x, spec, true);
  const DensityField oracle = oracles::dense_convolution(x, 1.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    EXPECT_GT(y[i], 0.0);
    EXPECT_LT(y[i], 1.0);
    EXPECT_NEAR(y[i], oracle[i], 1e-12);
  }
}

TEST(PhysicalDensity, MaskAppliedBeforeFilter) {
  ProblemSpec spec = mbb_beam(4, 4);
  spec.mask = DensityField(4, 4, 1.0);
  (*spec.mask)(1, 2) = 0.0;
  const DensityField y = physical_density(DensityField(4, 4, 1.0), spec, false);
  EXPECT_EQ(y(1, 2), 0.0);
  EXPECT_EQ(y(0, 0), 1.0);
}

TEST(PhysicalDensity, ShapeMismatchRejected) {
  const ProblemSpec spec = mbb_beam(6, 4);
  EXPECT_THROW(physical_density(DensityField(6, 4), spec), ValidationError);
}

TEST(MeanDensity, Values) {
  const ProblemSpec spec = mbb_beam(6, 4);
  EXPECT_NEAR(mean_density(DensityField(4, 6, 0.4), spec), 0.4, 1e-15);
  EXPECT_EQ(mean_density(DensityField(4, 6, 0.0), spec), 0.0);
}

TEST(MeanDensity, MaskDoesNotDiluteFraction) {
  ProblemSpec spec = mbb_beam(2, 2);
  spec.mask = DensityField(2, 2, std::vector<double>{1, 0, 0, 1});
  DensityField x(2, 2, std::vector<double>{0.4, 0.0, 0.0, 0.4});
  EXPECT_NEAR(mean_density(x, spec, false), 0.4, 1e-15);
}

}  // namespace
}  // namespace densitop
