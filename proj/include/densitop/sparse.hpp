#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace densitop {

/// Coordinate-list (triplet) square matrix. Duplicate (row, col) pairs are
/// allowed and sum when materialized.
struct CooMatrix {
  int size = 0;
  std::vector<double> entries;
  std::vector<int> rows;
  std::vector<int> cols;

  std::size_t nnz() const { return entries.size(); }
  /// Same entries with rows and cols swapped.
  CooMatrix transposed() const;
};

/// Compressed sparse column form with sorted row indices and no duplicates.
struct CscMatrix {
  int size = 0;
  std::vector<int> col_ptr;
  std::vector<int> row_idx;
  std::vector<double> values;

  std::vector<double> multiply(std::span<const double> x) const;
  double max_asymmetry() const;
};

/// Sums duplicates and sorts. Throws std::out_of_range on bad indices.
CscMatrix materialize(const CooMatrix& m);

enum class SolverBackend {
  kSkylineCholesky,  // direct, default
  kJacobiCg,         // conjugate gradient, Jacobi preconditioner
};

struct SolverOptions {
  SolverBackend backend = SolverBackend::kSkylineCholesky;
  double cg_tolerance = 1e-12;
  int cg_max_iterations = 0;  // 0 means 10 * n
};

/// Reusable solve handle for one symmetric positive definite matrix.
/// Immutable after construction, so concurrent solve() calls are safe.
///
/// The direct backend is an envelope (skyline) Cholesky factorization: row i
/// stores L[i][first_i .. i], where first_i is the leftmost nonzero of row i
/// in the lower triangle. Fill stays inside that envelope, which for the
/// column-major node numbering is a band of width ~2 (nely + 2).
class Factorization {
 public:
  explicit Factorization(const CooMatrix& m, SolverOptions options = {});
  explicit Factorization(CscMatrix m, SolverOptions options = {});

  int size() const { return matrix_.size; }
  const CscMatrix& matrix() const { return matrix_; }
  SolverBackend backend() const { return options_.backend; }

  /// Throws NumericalError on CG breakdown or non-convergence.
  std::vector<double> solve(std::span<const double> b) const;

 private:
  void factor_skyline();
  std::vector<double> solve_skyline(std::span<const double> b) const;
  std::vector<double> solve_cg(std::span<const double> b) const;

  CscMatrix matrix_;
  SolverOptions options_;
  // Skyline storage: row i occupies values_[row_start_[i] .. row_start_[i+1]),
  // covering columns first_col_[i] .. i.
  std::vector<int> first_col_;
  std::vector<std::int64_t> row_start_;
  std::vector<double> lower_;
  std::vector<double> inv_diagonal_;
};

/// ||A u - b|| / ||b||, or ||A u|| when b = 0.
double relative_residual(const CscMatrix& a, std::span<const double> u, std::span<const double> b);

/// Factors m and solves m u = b. Both backends require m symmetric positive
/// definite; an unsymmetric m is rejected rather than solved against one
/// triangle.
std::vector<double> solve_coo(const CooMatrix& m, std::span<const double> b,
                              SolverOptions options = {});

/// Reverse-mode rule of u = solve(m, b) with respect to the triplet values:
/// lambda = solve(m^T, grad_u), g_k = -lambda[row_k] * u[col_k].
/// With sym_pos set, m^T = m and the given factorization is reused; otherwise
/// the transpose is factored afresh.
std::vector<double> solve_coo_adjoint_entries(const CooMatrix& m, const Factorization& factor,
                                              std::span<const double> u,
                                              std::span<const double> grad_u, bool sym_pos = true);

/// Matrix Market coordinate export (general, real), 1-based indices.
void write_matrix_market(const CooMatrix& m, const std::filesystem::path& path);

}  // namespace densitop
