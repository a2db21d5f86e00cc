#include "densitop/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <stdexcept>
#include <string>

#include "densitop/errors.hpp"

namespace densitop {
namespace {

double norm2(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Value at (row, col), zero when structurally absent.
double lookup(const CscMatrix& m, int row, int col) {
  const auto begin = m.row_idx.begin() + m.col_ptr[col];
  const auto end = m.row_idx.begin() + m.col_ptr[col + 1];
  const auto it = std::lower_bound(begin, end, row);
  if (it == end || *it != row) return 0.0;
  return m.values[it - m.row_idx.begin()];
}

}  // namespace

CooMatrix CooMatrix::transposed() const { return {size, entries, cols, rows}; }

std::vector<double> CscMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != size) throw std::invalid_argument("multiply: size mismatch");
  std::vector<double> y(size, 0.0);
  for (int c = 0; c < size; ++c) {
    const double xc = x[c];
    for (int k = col_ptr[c]; k < col_ptr[c + 1]; ++k) y[row_idx[k]] += values[k] * xc;
  }
  return y;
}

double CscMatrix::max_asymmetry() const {
  double worst = 0.0;
  for (int c = 0; c < size; ++c) {
    for (int k = col_ptr[c]; k < col_ptr[c + 1]; ++k) {
      worst = std::max(worst, std::abs(values[k] - lookup(*this, c, row_idx[k])));
    }
  }
  return worst;
}

CscMatrix materialize(const CooMatrix& m) {
  const std::size_t nnz = m.entries.size();
  if (m.rows.size() != nnz || m.cols.size() != nnz) {
    throw std::invalid_argument("materialize: triplet arrays differ in length");
  }
  for (std::size_t k = 0; k < nnz; ++k) {
    if (m.rows[k] < 0 || m.rows[k] >= m.size || m.cols[k] < 0 || m.cols[k] >= m.size) {
      throw std::out_of_range("materialize: triplet " + std::to_string(k) + " index (" +
                              std::to_string(m.rows[k]) + ", " + std::to_string(m.cols[k]) +
                              ") outside a " + std::to_string(m.size) + "x" +
                              std::to_string(m.size) + " matrix");
    }
  }

  // Stable sort by (column, row). Equal
  // (row, col) pairs keep their input order, so duplicate sums are
  // deterministic.
  std::vector<std::size_t> order(nnz);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&m](std::size_t a, std::size_t b) {
    if (m.cols[a] != m.cols[b]) return m.cols[a] < m.cols[b];
    return m.rows[a] < m.rows[b];
  });

  CscMatrix out;
  out.size = m.size;
  out.col_ptr.assign(m.size + 1, 0);
  for (std::size_t pos = 0; pos < nnz; ++pos) {
    const std::size_t k = order[pos];
    const bool duplicate = pos > 0 && m.rows[order[pos - 1]] == m.rows[k] &&
                           m.cols[order[pos - 1]] == m.cols[k];
    if (duplicate) {
      out.values.back() += m.entries[k];
    } else {
      out.row_idx.push_back(m.rows[k]);
      out.values.push_back(m.entries[k]);
      ++out.col_ptr[m.cols[k] + 1];
    }
  }
  std::partial_sum(out.col_ptr.begin(), out.col_ptr.end(), out.col_ptr.begin());
  return out;
}

Factorization::Factorization(const CooMatrix& m, SolverOptions options)
    : Factorization(materialize(m), options) {}

Factorization::Factorization(CscMatrix m, SolverOptions options)
    : matrix_(std::move(m)), options_(options) {
  double scale = 0.0;
  for (double v : matrix_.values) scale = std::max(scale, std::abs(v));
  if (matrix_.max_asymmetry() > 1e-12 * scale) {
    throw NumericalError("matrix is not symmetric; the solver requires a symmetric positive "
                         "definite matrix");
  }
  if (options_.backend == SolverBackend::kSkylineCholesky) {
    factor_skyline();
  } else {
    inv_diagonal_.assign(matrix_.size, 0.0);
    for (int i = 0; i < matrix_.size; ++i) {
      const double d = lookup(matrix_, i, i);
      if (!(d > 0.0)) {
        throw NumericalError("non-positive diagonal entry " + std::to_string(d) + " at row " +
                             std::to_string(i) + "; matrix is not positive definite");
      }
      inv_diagonal_[i] = 1.0 / d;
    }
  }
}

void Factorization::factor_skyline() {
  const int n = matrix_.size;
  first_col_.assign(n, 0);
  row_start_.assign(n + 1, 0);
  // Lower-triangle row i equals upper-triangle column i of a symmetric matrix.
  for (int i = 0; i < n; ++i) {
    const int begin = matrix_.col_ptr[i];
    first_col_[i] = (begin < matrix_.col_ptr[i + 1]) ? std::min(matrix_.row_idx[begin], i) : i;
    row_start_[i + 1] = row_start_[i] + (i - first_col_[i] + 1);
  }
  lower_.assign(row_start_[n], 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = matrix_.col_ptr[i]; k < matrix_.col_ptr[i + 1]; ++k) {
      const int r = matrix_.row_idx[k];
      if (r > i) break;
      lower_[row_start_[i] + (r - first_col_[i])] = matrix_.values[k];
    }
  }

  for (int i = 0; i < n; ++i) {
    double* row_i = &lower_[row_start_[i]];
    const int fi = first_col_[i];
    for (int j = fi; j < i; ++j) {
      const double* row_j = &lower_[row_start_[j]];
      const int fj = first_col_[j];
      const int k0 = std::max(fi, fj);
      double s = row_i[j - fi];
      for (int k = k0; k < j; ++k) s -= row_i[k - fi] * row_j[k - fj];
      row_i[j - fi] = s / row_j[j - fj];
    }
    const double a_ii = row_i[i - fi];
    double d = a_ii;
    for (int k = fi; k < i; ++k) d -= row_i[k - fi] * row_i[k - fi];
    if (!(d > 1e-13 * std::abs(a_ii)) || !std::isfinite(d)) {
      throw NumericalError("Cholesky breakdown at pivot " + std::to_string(i) + " (value " +
                           std::to_string(d) + ", diagonal " + std::to_string(a_ii) +
                           "): matrix is singular or not positive definite");
    }
    row_i[i - fi] = std::sqrt(d);
  }
}

std::vector<double> Factorization::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != matrix_.size) {
    throw std::invalid_argument("solve: right-hand side has the wrong length");
  }
  return options_.backend == SolverBackend::kSkylineCholesky ? solve_skyline(b) : solve_cg(b);
}

std::vector<double> Factorization::solve_skyline(std::span<const double> b) const {
  const int n = matrix_.size;
  std::vector<double> y(b.begin(), b.end());
  // L y = b
  for (int i = 0; i < n; ++i) {
    const double* row_i = &lower_[row_start_[i]];
    const int fi = first_col_[i];
    double s = y[i];
    for (int k = fi; k < i; ++k) s -= row_i[k - fi] * y[k];
    y[i] = s / row_i[i - fi];
  }
  // L^T x = y, column sweep over the row-stored factor.
  for (int i = n - 1; i >= 0; --i) {
    const double* row_i = &lower_[row_start_[i]];
    const int fi = first_col_[i];
    y[i] /= row_i[i - fi];
    const double xi = y[i];
    for (int k = fi; k < i; ++k) y[k] -= row_i[k - fi] * xi;
  }
  return y;
}

std::vector<double> Factorization::solve_cg(std::span<const double> b) const {
  const int n = matrix_.size;
  std::vector<double> x(n, 0.0);
  const double b_norm = norm2(b);
  if (b_norm == 0.0) return x;

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n);
  for (int i = 0; i < n; ++i) z[i] = inv_diagonal_[i] * r[i];
  p = z;
  double rho = dot(r, z);
  const int max_iter = options_.cg_max_iterations > 0 ? options_.cg_max_iterations : 10 * n;
  for (int iter = 0; iter < max_iter; ++iter) {
    const auto q = matrix_.multiply(p);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) {
      throw NumericalError("conjugate gradient breakdown at iteration " + std::to_string(iter) +
                           " (p^T A p = " + std::to_string(pq) +
                           "): matrix is not positive definite");
    }
    const double alpha = rho / pq;
    for (int i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (norm2(r) <= options_.cg_tolerance * b_norm) return x;
    for (int i = 0; i < n; ++i) z[i] = inv_diagonal_[i] * r[i];
    const double rho_next = dot(r, z);
    const double beta = rho_next / rho;
    rho = rho_next;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw NumericalError("conjugate gradient did not reach relative residual " +
                       std::to_string(options_.cg_tolerance) + " in " + std::to_string(max_iter) +
                       " iterations");
}

double relative_residual(const CscMatrix& a, std::span<const double> u, std::span<const double> b) {
  auto r = a.multiply(u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double b_norm = norm2(b);
  return b_norm > 0.0 ? norm2(r) / b_norm : norm2(r);
}

std::vector<double> solve_coo(const CooMatrix& m, std::span<const double> b,
                              SolverOptions options) {
  return Factorization(m, options).solve(b);
}

std::vector<double> solve_coo_adjoint_entries(const CooMatrix& m, const Factorization& factor,
                                              std::span<const double> u,
                                              std::span<const double> grad_u, bool sym_pos) {
  if (static_cast<int>(u.size()) != m.size || static_cast<int>(grad_u.size()) != m.size) {
    throw std::invalid_argument("solve_coo_adjoint_entries: vector length mismatch");
  }
  const auto lambda = sym_pos ? factor.solve(grad_u)
                              : Factorization(m.transposed(), SolverOptions{factor.backend()})
                                    .solve(grad_u);
  std::vector<double> grad(m.nnz());
  for (std::size_t k = 0; k < m.nnz(); ++k) grad[k] = -lambda[m.rows[k]] * u[m.cols[k]];
  return grad;
}

void write_matrix_market(const CooMatrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.size << ' ' << m.size << ' ' << m.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t k = 0; k < m.nnz(); ++k) {
    out << m.rows[k] + 1 << ' ' << m.cols[k] + 1 << ' ' << m.entries[k] << '\n';
  }
}

}  // namespace densitop
