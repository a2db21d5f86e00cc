#include "densitop/fem.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "densitop/errors.hpp"
#include "densitop/parallel.hpp"

namespace densitop {

ElementStiffness element_stiffness(double e, double nu) {
  const std::array<double, 8> k = {
      1.0 / 2 - nu / 6,  1.0 / 8 + nu / 8,  -1.0 / 4 - nu / 12, -1.0 / 8 + 3 * nu / 8,
      -1.0 / 4 + nu / 12, -1.0 / 8 - nu / 8, nu / 6,             1.0 / 8 - 3 * nu / 8};
  static constexpr int pattern[8][8] = {
      {0, 1, 2, 3, 4, 5, 6, 7}, {1, 0, 7, 6, 5, 4, 3, 2}, {2, 7, 0, 5, 6, 3, 4, 1},
      {3, 6, 5, 0, 7, 2, 1, 4}, {4, 5, 6, 7, 0, 1, 2, 3}, {5, 4, 3, 2, 1, 0, 7, 6},
      {6, 3, 4, 1, 2, 7, 0, 5}, {7, 2, 1, 4, 3, 6, 5, 0}};
  const double scale = e / (1 - nu * nu);
  ElementStiffness out;
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) out.k[8 * a + b] = scale * k[pattern[a][b]];
  }
  return out;
}

std::vector<ElementDofs> element_dof_map(int nelx, int nely) {
  std::vector<ElementDofs> map(static_cast<std::size_t>(nelx) * nely);
  for (int elx = 0; elx < nelx; ++elx) {
    for (int ely = 0; ely < nely; ++ely) {
      const int n1 = (nely + 1) * elx + ely;
      const int n2 = (nely + 1) * (elx + 1) + ely;
      const int n3 = (nely + 1) * (elx + 1) + ely + 1;
      const int n4 = (nely + 1) * elx + ely + 1;
      map[element_index(elx, ely, nely)] = {2 * n1, 2 * n1 + 1, 2 * n2, 2 * n2 + 1,
                                            2 * n3, 2 * n3 + 1, 2 * n4, 2 * n4 + 1};
    }
  }
  return map;
}

std::vector<int> inverse_permutation(std::span<const int> ixs) {
  const int n = static_cast<int>(ixs.size());
  std::vector<int> inv(n, -1);
  for (int k = 0; k < n; ++k) {
    const int target = ixs[k];
    if (target < 0 || target >= n || inv[target] != -1) {
      throw std::invalid_argument("inverse_permutation: input is not a permutation of 0.." +
                                  std::to_string(n - 1));
    }
    inv[target] = k;
  }
  return inv;
}

DofReduction make_dof_reduction(const ProblemSpec& spec) {
  std::vector<int> order;
  order.reserve(spec.freedofs.size() + spec.fixdofs.size());
  order.insert(order.end(), spec.freedofs.begin(), spec.freedofs.end());
  order.insert(order.end(), spec.fixdofs.begin(), spec.fixdofs.end());
  return {inverse_permutation(order), static_cast<int>(spec.freedofs.size())};
}

CooMatrix assemble_full_k(const DensityField& x_phys, const ElementStiffness& k0,
                          const MaterialModel& model, int threads) {
  const int nely = x_phys.rows();
  const int nelx = x_phys.cols();
  const auto edofs = element_dof_map(nelx, nely);
  const std::size_t nnz = 64 * edofs.size();
  CooMatrix m;
  m.size = 2 * (nelx + 1) * (nely + 1);
  m.entries.resize(nnz);
  m.rows.resize(nnz);
  m.cols.resize(nnz);
  parallel_for(edofs.size(), threads, [&](std::size_t e) {
    const int elx = static_cast<int>(e) / nely;
    const int ely = static_cast<int>(e) % nely;
    const double stiffness = young_modulus(x_phys(ely, elx), model);
    const auto& dofs = edofs[e];
    std::size_t k = 64 * e;
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b, ++k) {
        m.entries[k] = stiffness * k0(a, b);
        m.rows[k] = dofs[a];
        m.cols[k] = dofs[b];
      }
    }
  });
  return m;
}

ReducedStiffness assemble_k(const DensityField& x_phys, const ElementStiffness& k0,
                            const MaterialModel& model, const ProblemSpec& spec, int threads) {
  if (x_phys.rows() != spec.nely || x_phys.cols() != spec.nelx) {
    throw ValidationError("assemble_k: density field shape does not match (nely, nelx)");
  }
  const CooMatrix full = assemble_full_k(x_phys, k0, model, threads);
  const DofReduction red = make_dof_reduction(spec);

  ReducedStiffness out;
  out.matrix.size = red.free_count;
  for (std::size_t k = 0; k < full.nnz(); ++k) {
    const int i = red.index_map[full.rows[k]];
    const int j = red.index_map[full.cols[k]];
    if (i >= red.free_count || j >= red.free_count) continue;
    out.matrix.entries.push_back(full.entries[k]);
    out.matrix.rows.push_back(i);
    out.matrix.cols.push_back(j);
    out.origin.push_back(static_cast<std::int64_t>(k));
  }
  return out;
}

StaticSolution solve_displacement(const DensityField& x_phys, const ElementStiffness& k0,
                                  const ProblemSpec& spec, const MaterialModel& model,
                                  const FemOptions& options) {
  StaticSolution sol;
  sol.stiffness = assemble_k(x_phys, k0, model, spec, options.threads);
  sol.reduction = make_dof_reduction(spec);
  sol.f_free.reserve(spec.freedofs.size());
  for (int d : spec.freedofs) sol.f_free.push_back(spec.forces[d]);

  try {
    sol.factor = std::make_shared<const Factorization>(sol.stiffness.matrix, options.solver);
    sol.u_free = sol.factor->solve(sol.f_free);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("stiffness matrix is singular; the structure is "
                                     "under-constrained (mechanism): ") +
                         e.what());
  }

  const CscMatrix& k = sol.factor->matrix();
  sol.residual = relative_residual(k, sol.u_free, sol.f_free);
  if (sol.residual > options.residual_tolerance) {
    auto r = k.multiply(sol.u_free);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = sol.f_free[i] - r[i];
    const auto du = sol.factor->solve(r);
    for (std::size_t i = 0; i < du.size(); ++i) sol.u_free[i] += du[i];
    sol.residual = relative_residual(k, sol.u_free, sol.f_free);
  }
  if (!(sol.residual <= options.residual_tolerance)) {
    throw NumericalError("displacement solve residual " + std::to_string(sol.residual) +
                         " exceeds " + std::to_string(options.residual_tolerance));
  }

  // u = concat(u_free, zeros)[index_map]
  const int n = spec.dof_count();
  sol.u.assign(n, 0.0);
  for (int d = 0; d < n; ++d) {
    const int slot = sol.reduction.index_map[d];
    if (slot < sol.reduction.free_count) sol.u[d] = sol.u_free[slot];
  }
  return sol;
}

std::vector<double> displace(const DensityField& x_phys, const ElementStiffness& k0,
                             const ProblemSpec& spec, const MaterialModel& model,
                             const FemOptions& options) {
  return solve_displacement(x_phys, k0, spec, model, options).u;
}

DensityField element_energies(std::span<const double> u, const ElementStiffness& k0, int nelx,
                              int nely, int threads) {
  if (static_cast<int>(u.size()) != 2 * (nelx + 1) * (nely + 1)) {
    throw std::invalid_argument("element_energies: displacement vector has the wrong length");
  }
  const auto edofs = element_dof_map(nelx, nely);
  DensityField out(nely, nelx);
  parallel_for(edofs.size(), threads, [&](std::size_t e) {
    std::array<double, 8> ue;
    for (int a = 0; a < 8; ++a) ue[a] = u[edofs[e][a]];
    double energy = 0.0;
    for (int a = 0; a < 8; ++a) {
      double row = 0.0;
      for (int b = 0; b < 8; ++b) row += k0(a, b) * ue[b];
      energy += ue[a] * row;
    }
    const int elx = static_cast<int>(e) / nely;
    const int ely = static_cast<int>(e) % nely;
    out(ely, elx) = energy;
  });
  return out;
}

double compliance(const DensityField& x_phys, std::span<const double> u,
                  const ElementStiffness& k0, const MaterialModel& model, int threads) {
  const int nely = x_phys.rows();
  const int nelx = x_phys.cols();
  const DensityField energy = element_energies(u, k0, nelx, nely, threads);
  double c = 0.0;
  for (int elx = 0; elx < nelx; ++elx) {
    for (int ely = 0; ely < nely; ++ely) {
      c += young_modulus(x_phys(ely, elx), model) * energy(ely, elx);
    }
  }
  return c;
}

}  // namespace densitop
