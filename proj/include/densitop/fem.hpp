#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "densitop/field.hpp"
#include "densitop/material.hpp"
#include "densitop/problem.hpp"
#include "densitop/sparse.hpp"

namespace densitop {

/// 8x8 stiffness of a unit-square bilinear quad in plane stress. Local DOF
/// order is [x1, y1, x2, y2, x3, y3, x4, y4] over the corners
/// upper-left, upper-right, lower-right, lower-left.
struct ElementStiffness {
  std::array<double, 64> k{};

  double operator()(int a, int b) const { return k[8 * a + b]; }
};

ElementStiffness element_stiffness(double e, double nu);

using ElementDofs = std::array<int, 8>;

/// Elements are traversed column-major: element (elx, ely) has index
/// elx * nely + ely. Assembly and compliance both go through this map.
inline int element_index(int elx, int ely, int nely) { return elx * nely + ely; }

std::vector<ElementDofs> element_dof_map(int nelx, int nely);

/// inv[ixs[k]] = k. Throws std::invalid_argument if ixs is not a permutation.
std::vector<int> inverse_permutation(std::span<const int> ixs);

/// index_map = inverse_permutation(concat(freedofs, fixdofs)); free DOFs land
/// in [0, free_count).
struct DofReduction {
  std::vector<int> index_map;
  int free_count = 0;
};

DofReduction make_dof_reduction(const ProblemSpec& spec);

/// 64 triplets per element, value E(x_e) * k0[a][b] at (edof[a], edof[b]);
/// element-major, then a, then b.
CooMatrix assemble_full_k(const DensityField& x_phys, const ElementStiffness& k0,
                          const MaterialModel& model, int threads = 1);

/// The full triplet list filtered to free rows and columns, remapped through
/// the DOF reduction. origin[k] is the position of triplet k in the full list
/// (element * 64 + 8 * a + b).
struct ReducedStiffness {
  CooMatrix matrix;
  std::vector<std::int64_t> origin;
};

ReducedStiffness assemble_k(const DensityField& x_phys, const ElementStiffness& k0,
                            const MaterialModel& model, const ProblemSpec& spec, int threads = 1);

struct FemOptions {
  SolverOptions solver;
  // Every displacement solve is checked against this bound.
  double residual_tolerance = 1e-10;
  int threads = 1;
};

/// Everything a displacement solve produces, kept for adjoint reuse.
struct StaticSolution {
  std::vector<double> u;       // full DOF vector, zero at fixdofs
  std::vector<double> u_free;  // reduced ordering
  std::vector<double> f_free;
  ReducedStiffness stiffness;
  DofReduction reduction;
  std::shared_ptr<const Factorization> factor;
  double residual = 0.0;
};

/// Solves K_free u_free = forces[freedofs] and scatters back. Throws
/// NumericalError when K is singular (under-constrained structure) or the
/// relative residual exceeds options.residual_tolerance after one round of
/// iterative refinement.
StaticSolution solve_displacement(const DensityField& x_phys, const ElementStiffness& k0,
                                  const ProblemSpec& spec, const MaterialModel& model,
                                  const FemOptions& options = {});

std::vector<double> displace(const DensityField& x_phys, const ElementStiffness& k0,
                             const ProblemSpec& spec, const MaterialModel& model,
                             const FemOptions& options = {});

/// u_e^T k0 u_e per element, shaped (nely, nelx).
DensityField element_energies(std::span<const double> u, const ElementStiffness& k0, int nelx,
                              int nely, int threads = 1);

/// sum_e E(x_e) u_e^T k0 u_e, summed in element order.
double compliance(const DensityField& x_phys, std::span<const double> u,
                  const ElementStiffness& k0, const MaterialModel& model, int threads = 1);

}  // namespace densitop
