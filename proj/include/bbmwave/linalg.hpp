#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbmwave {

using Vector = std::vector<double>;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-row sparse matrix. Column indices are strictly increasing
/// within each row. Explicitly stored zeros are kept so that operators
/// assembled on the same mesh share one sparsity pattern.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
               std::vector<std::size_t> col_indices, std::vector<double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nonzeros() const { return values_.size(); }

  std::span<const std::size_t> row_offsets() const { return offsets_; }
  std::span<const std::size_t> col_indices() const { return cols_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Stored value at (i, j), or 0 when (i, j) is outside the pattern.
  double at(std::size_t i, std::size_t j) const;
  /// Position of (i, j) in values(), or nonzeros() when absent.
  std::size_t find(std::size_t i, std::size_t j) const;

  Vector diagonal() const;
  SparseMatrix transpose() const;

  /// Overwrites row i with the identity row, keeping the pattern.
  void set_identity_row(std::size_t i);

  bool same_pattern(const SparseMatrix& other) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> cols_idx_;
  std::vector<double> values_;
};

/// Square n-by-n matrix from (row, col, value) triplets; duplicates are summed
/// in input order.
SparseMatrix assemble_from_triplets(std::span<const Triplet> triplets, std::size_t n);

/// alpha * A + beta * B for two matrices with identical patterns.
SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b);

Vector spmv(const SparseMatrix& a, std::span<const double> x);
void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

/// Max |A - A^T| relative to max |A| is within tol.
bool is_symmetric(const SparseMatrix& a, double tol);

enum class SolveStatus { converged, max_iterations, breakdown };

const char* to_string(SolveStatus status);

struct SolverOptions {
  double tolerance = 1e-10;       // on ||b - A x|| / ||b||
  std::size_t max_iterations = 0;  // 0 means 10 * n
};

struct SolveResult {
  Vector x;                 // best iterate found
  std::size_t iterations = 0;
  double residual = 0.0;    // ||b - A x|| / ||b|| for the returned x (0 when b = 0)
  SolveStatus status = SolveStatus::converged;

  bool converged() const { return status == SolveStatus::converged; }
};

/// Jacobi-preconditioned conjugate gradients for symmetric positive definite A.
SolveResult cg_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options = {},
                     std::span<const double> x0 = {});

/// Jacobi (right) preconditioned BiCGStab for general nonsingular A.
SolveResult bicgstab_solve(const SparseMatrix& a, std::span<const double> b, const SolverOptions& options = {},
                           std::span<const double> x0 = {});

}  // namespace bbmwave
