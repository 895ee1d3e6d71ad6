#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace nspnp {

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row. The sparsity
/// pattern is fixed at construction; assembly adds into existing slots.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
            std::vector<int> column_indices, std::vector<double> values);

  /// Pattern from per-element dof lists: every (row_dofs[e][a], col_dofs[e][b])
  /// pair becomes a slot, values zero.
  template <class RowLists, class ColLists>
  static CsrMatrix from_element_pattern(std::size_t rows, std::size_t cols,
                                        const RowLists& row_dofs, const ColLists& col_dofs);

  /// Build from (row, col, value) triplets; duplicates are summed in input order.
  struct Triplet {
    int row;
    int col;
    double value;
  };
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  static CsrMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t>& row_offsets() const { return row_offsets_; }
  const std::vector<int>& column_indices() const { return column_indices_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Slot of (i, j) in values(), or -1 when outside the pattern.
  std::ptrdiff_t find(std::size_t i, std::size_t j) const;
  /// Add v into slot (i, j); throws if (i, j) is not in the pattern.
  void add(std::size_t i, std::size_t j, double v);
  /// Entry value (zero outside the pattern).
  double at(std::size_t i, std::size_t j) const;

  bool same_pattern(const CsrMatrix& other) const;
  void set_zero();

  void multiply(std::span<const double> x, std::span<double> y) const;
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;
  CsrMatrix transpose() const;

  /// Entrywise max |A - A^T| relative to max |A|.
  double asymmetry() const;

 private:
  void check_structure() const;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<int> column_indices_;
  std::vector<double> values_;
};

/// y = A x, accumulated left to right within each row.
std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x);

/// sum_k coeffs[k] * mats[k]; every matrix must share the pattern of mats[0].
CsrMatrix linear_combination(std::span<const double> coeffs,
                             std::span<const CsrMatrix* const> mats);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 20000;
  bool jacobi = true;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  int restarts = 0;
  std::string message;
};

/// Preconditioned conjugate gradients for symmetric A. `x` holds the initial
/// guess on entry.
///
/// With `project_out_constants`, A is assumed to have the constant vector in
/// its kernel: b and every residual are projected onto the complement of
/// constants, and on exit x is shifted so that weights . x == 0 (plain mean
/// when `mean_weights` is empty).
SolveReport cg(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
               const SolverOptions& options = {}, bool project_out_constants = false,
               std::span<const double> mean_weights = {});

/// Right-preconditioned BiCGStab. On breakdown restarts once from the current
/// iterate, then reports failure.
SolveReport bicgstab(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                     const SolverOptions& options = {});

// ---------------------------------------------------------------------------

template <class RowLists, class ColLists>
CsrMatrix CsrMatrix::from_element_pattern(std::size_t rows, std::size_t cols,
                                          const RowLists& row_dofs, const ColLists& col_dofs) {
  std::vector<std::vector<int>> adjacency(rows);
  const std::size_t ne = std::size(row_dofs);
  for (std::size_t e = 0; e < ne; ++e) {
    for (auto r : row_dofs[e]) {
      for (auto c : col_dofs[e]) {
        adjacency[static_cast<std::size_t>(r)].push_back(static_cast<int>(c));
      }
    }
  }
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<int> columns;
  for (std::size_t r = 0; r < rows; ++r) {
    auto& adj = adjacency[r];
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    columns.insert(columns.end(), adj.begin(), adj.end());
    offsets[r + 1] = columns.size();
    std::vector<int>().swap(adj);
  }
  std::vector<double> values(columns.size(), 0.0);
  return CsrMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

}  // namespace nspnp
