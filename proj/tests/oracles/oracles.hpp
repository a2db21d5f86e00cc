#pragma once

// Deliberately naive reference implementations for tests. Nothing here may
// call into the filter, fem, sparse or objective code paths it checks.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "densitop/field.hpp"
#include "densitop/material.hpp"
#include "densitop/problem.hpp"

namespace densitop::oracles {

/// Dense (rows*cols)^2 operator of the reflect-boundary Gaussian blur, built
/// from an explicitly mirrored index tape.
Eigen::MatrixXd dense_filter_matrix(int rows, int cols, double sigma);
DensityField dense_convolution(const DensityField& x, double sigma);

/// k0 by 2x2 Gauss quadrature of B^T D B (plane stress) on a unit square,
/// nodes at (col, row) = (0,0), (1,0), (1,1), (0,1).
Eigen::Matrix<double, 8, 8> quadrature_element_stiffness(double e, double nu);

/// Full 2N x 2N stiffness from element loops.
Eigen::MatrixXd dense_global_stiffness(const DensityField& x_phys, const MaterialModel& model,
                                       double young, double poisson);

struct DenseSolution {
  Eigen::VectorXd u;  // full DOF vector
  Eigen::MatrixXd k;  // full stiffness
  double compliance = 0.0;
  double residual = 0.0;  // ||K_ff u_f - f_f|| / ||f_f||
};

/// Builds dense K, deletes fixed rows/cols, dense LU solve, c = U^T K U.
DenseSolution dense_solve(const DensityField& x_phys, const ProblemSpec& spec);
double dense_objective(const DensityField& x, const ProblemSpec& spec, bool use_filter = true);

/// sum_e E(x_e) u_e^T k0 u_e with node indices written out per element.
double loop_compliance(const DensityField& x_phys, const std::vector<double>& u,
                       const MaterialModel& model, double young, double poisson);

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h on the listed
/// components (all of them when empty). Unlisted components are zero.
DensityField finite_difference_grad(const std::function<double(const DensityField&)>& f,
                                    const DensityField& x, double h,
                                    const std::vector<int>& components = {});

}  // namespace densitop::oracles
