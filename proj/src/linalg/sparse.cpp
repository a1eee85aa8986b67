#include <algorithm>
#include <cmath>
#include <numeric>

#include "bbmwave/linalg.hpp"

namespace bbmwave {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                           std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      offsets_(std::move(row_offsets)),
      cols_idx_(std::move(col_indices)),
      values_(std::move(values)) {
  if (offsets_.size() != rows_ + 1 || offsets_.front() != 0)
    throw LinalgError("row offsets must have rows + 1 entries starting at 0");
  if (offsets_.back() != cols_idx_.size() || cols_idx_.size() != values_.size())
    throw LinalgError("row offsets, column indices and values disagree in length");
  for (std::size_t i = 0; i < rows_; ++i) {
    if (offsets_[i] > offsets_[i + 1]) throw LinalgError("row offsets must be nondecreasing");
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      if (cols_idx_[k] >= cols_) throw LinalgError("column index out of range");
      if (k > offsets_[i] && cols_idx_[k] <= cols_idx_[k - 1])
        throw LinalgError("column indices must be strictly increasing within a row");
    }
  }
}

std::size_t SparseMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto last = cols_idx_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, j);
  if (it == last || *it != j) return values_.size();
  return static_cast<std::size_t>(it - cols_idx_.begin());
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw LinalgError("matrix index out of range");
  const auto k = find(i, j);
  return k == values_.size() ? 0.0 : values_[k];
}

Vector SparseMatrix::diagonal() const {
  Vector d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<std::size_t> offsets(cols_ + 1, 0);
  for (auto j : cols_idx_) ++offsets[j + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  std::vector<std::size_t> cols(values_.size());
  std::vector<double> vals(values_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const auto pos = next[cols_idx_[k]]++;
      cols[pos] = i;
      vals[pos] = values_[k];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals));
}

void SparseMatrix::set_identity_row(std::size_t i) {
  if (i >= rows_) throw LinalgError("row index out of range");
  for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) values_[k] = cols_idx_[k] == i ? 1.0 : 0.0;
  if (find(i, i) == values_.size()) throw LinalgError("identity row requires a stored diagonal entry");
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && offsets_ == other.offsets_ && cols_idx_ == other.cols_idx_;
}

SparseMatrix assemble_from_triplets(std::span<const Triplet> triplets, std::size_t n) {
  for (const auto& t : triplets) {
    if (t.row >= n || t.col >= n)
      throw LinalgError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                        ") out of range for dimension " + std::to_string(n));
  }
  std::vector<std::size_t> order(triplets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ta = triplets[a];
    const auto& tb = triplets[b];
    return ta.row != tb.row ? ta.row < tb.row : ta.col < tb.col;
  });

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  std::size_t prev_row = n, prev_col = n;
  for (auto idx : order) {
    const auto& t = triplets[idx];
    if (t.row == prev_row && t.col == prev_col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
    prev_row = t.row;
    prev_col = t.col;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta, const SparseMatrix& b) {
  if (!a.same_pattern(b)) throw LinalgError("linear_combination requires identical sparsity patterns");
  std::vector<double> vals(a.nonzeros());
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = alpha * va[k] + beta * vb[k];
  return SparseMatrix(a.rows(), a.cols(), {a.row_offsets().begin(), a.row_offsets().end()},
                      {a.col_indices().begin(), a.col_indices().end()}, std::move(vals));
}

void spmv(const SparseMatrix& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.cols() || y.size() != a.rows())
    throw LinalgError("spmv dimension mismatch: matrix " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.cols()) + ", x " + std::to_string(x.size()) + ", y " +
                      std::to_string(y.size()));
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * x[cols[k]];
    y[i] = sum;
  }
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) {
  Vector y(a.rows());
  spmv(a, x, y);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LinalgError("dot dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

bool is_symmetric(const SparseMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const auto t = a.transpose();
  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
      const auto j = a.col_indices()[k];
      if (std::abs(a.values()[k] - t.at(i, j)) > tol * scale) return false;
    }
    for (std::size_t k = t.row_offsets()[i]; k < t.row_offsets()[i + 1]; ++k) {
      const auto j = t.col_indices()[k];
      if (std::abs(t.values()[k] - a.at(i, j)) > tol * scale) return false;
    }
  }
  return true;
}

}  // namespace bbmwave
