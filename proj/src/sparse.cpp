#include "nspnp/sparse.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace nspnp {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                     std::vector<int> column_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)),
      values_(std::move(values)) {
  check_structure();
}

void CsrMatrix::check_structure() const {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0 ||
      row_offsets_.back() != column_indices_.size() || values_.size() != column_indices_.size()) {
    throw std::invalid_argument("CsrMatrix: inconsistent array sizes");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i] > row_offsets_[i + 1]) {
      throw std::invalid_argument("CsrMatrix: row offsets not monotone");
    }
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const int c = column_indices_[k];
      if (c < 0 || static_cast<std::size_t>(c) >= cols_) {
        throw std::invalid_argument("CsrMatrix: column index out of range");
      }
      if (k > row_offsets_[i] && column_indices_[k - 1] >= c) {
        throw std::invalid_argument("CsrMatrix: column indices not strictly increasing");
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<int> columns;
  std::vector<double> values;
  for (const auto& t : triplets) {
    if (t.row < 0 || static_cast<std::size_t>(t.row) >= rows || t.col < 0 ||
        static_cast<std::size_t>(t.col) >= cols) {
      throw std::invalid_argument("CsrMatrix::from_triplets: index out of range");
    }
  }
  std::size_t k = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (k < triplets.size() && static_cast<std::size_t>(triplets[k].row) == r) {
      if (columns.size() > offsets[r] && columns.back() == triplets[k].col) {
        values.back() += triplets[k].value;
      } else {
        columns.push_back(triplets[k].col);
        values.push_back(triplets[k].value);
      }
      ++k;
    }
    offsets[r + 1] = columns.size();
  }
  return CsrMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> offsets(n + 1);
  std::vector<int> columns(n);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(columns.begin(), columns.end(), 0);
  return CsrMatrix(n, n, std::move(offsets), std::move(columns), std::vector<double>(n, 1.0));
}

std::ptrdiff_t CsrMatrix::find(std::size_t i, std::size_t j) const {
  const auto first = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
  const auto last = column_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<int>(j));
  if (it == last || *it != static_cast<int>(j)) {
    return -1;
  }
  return it - column_indices_.begin();
}

void CsrMatrix::add(std::size_t i, std::size_t j, double v) {
  const std::ptrdiff_t slot = find(i, j);
  if (slot < 0) {
    throw std::out_of_range("CsrMatrix::add: (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") not in sparsity pattern");
  }
  values_[static_cast<std::size_t>(slot)] += v;
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const std::ptrdiff_t slot = find(i, j);
  return slot < 0 ? 0.0 : values_[static_cast<std::size_t>(slot)];
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_offsets_ == other.row_offsets_ &&
         column_indices_ == other.column_indices_;
}

void CsrMatrix::set_zero() { std::fill(values_.begin(), values_.end(), 0.0); }

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols_ || y.size() != rows_) {
    throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[static_cast<std::size_t>(column_indices_[k])];
    }
    y[i] = sum;
  }
}

void CsrMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (x.size() != rows_ || y.size() != cols_) {
    throw std::invalid_argument("CsrMatrix::multiply_transpose: dimension mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      y[static_cast<std::size_t>(column_indices_[k])] += values_[k] * x[i];
    }
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d[i] = at(i, i);
  }
  return d;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<std::size_t> offsets(cols_ + 1, 0);
  for (int c : column_indices_) {
    ++offsets[static_cast<std::size_t>(c) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<int> columns(nnz());
  std::vector<double> values(nnz());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const std::size_t dst = cursor[static_cast<std::size_t>(column_indices_[k])]++;
      columns[dst] = static_cast<int>(i);
      values[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(offsets), std::move(columns), std::move(values));
}

double CsrMatrix::asymmetry() const {
  if (rows_ != cols_) {
    return std::numeric_limits<double>::infinity();
  }
  double max_abs = 0.0;
  double max_diff = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(column_indices_[k]);
      max_abs = std::max(max_abs, std::abs(values_[k]));
      max_diff = std::max(max_diff, std::abs(values_[k] - at(j, i)));
    }
  }
  return max_abs > 0.0 ? max_diff / max_abs : 0.0;
}

std::vector<double> spmv(const CsrMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows());
  a.multiply(x, y);
  return y;
}

CsrMatrix linear_combination(std::span<const double> coeffs,
                             std::span<const CsrMatrix* const> mats) {
  if (coeffs.size() != mats.size() || mats.empty()) {
    throw std::invalid_argument("linear_combination: need one coefficient per matrix");
  }
  CsrMatrix out = *mats[0];
  auto& v = out.values();
  for (auto& e : v) e *= coeffs[0];
  for (std::size_t m = 1; m < mats.size(); ++m) {
    if (!mats[m]->same_pattern(out)) {
      throw std::invalid_argument("linear_combination: sparsity patterns differ");
    }
    const auto& w = mats[m]->values();
    for (std::size_t k = 0; k < v.size(); ++k) {
      v[k] += coeffs[m] * w[k];
    }
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

std::vector<double> inverse_diagonal(const CsrMatrix& a, bool jacobi) {
  std::vector<double> inv(a.rows(), 1.0);
  if (!jacobi) return inv;
  const auto d = a.diagonal();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    inv[i] = (d[i] != 0.0) ? 1.0 / d[i] : 1.0;
  }
  return inv;
}

void remove_mean(std::span<double> v) {
  if (v.empty()) return;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  for (auto& e : v) e -= mean;
}

void residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x,
              std::span<double> r) {
  a.multiply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
}

void check_square(const CsrMatrix& a, std::size_t nb, std::size_t nx, const char* who) {
  if (a.rows() != a.cols() || nb != a.rows() || nx != a.rows()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

}  // namespace

SolveReport cg(const CsrMatrix& a, std::span<const double> b_in, std::span<double> x,
               const SolverOptions& options, bool project_out_constants,
               std::span<const double> mean_weights) {
  check_square(a, b_in.size(), x.size(), "cg");
  const std::size_t n = x.size();
  std::vector<double> b(b_in.begin(), b_in.end());
  if (project_out_constants) remove_mean(b);

  auto finish_shift = [&]() {
    if (!project_out_constants || n == 0) return;
    double num = 0.0;
    double den = 0.0;
    if (mean_weights.empty()) {
      num = std::accumulate(x.begin(), x.end(), 0.0);
      den = static_cast<double>(n);
    } else {
      num = dot(mean_weights, x);
      den = std::accumulate(mean_weights.begin(), mean_weights.end(), 0.0);
    }
    const double shift = num / den;
    for (auto& e : x) e -= shift;
  };

  SolveReport report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }

  const auto minv = inverse_diagonal(a, options.jacobi);
  std::vector<double> r(n), z(n), p(n), ap(n);

  // Outer loop refreshes the recurrence residual if it drifts from the true one.
  for (int refresh = 0; refresh < 5; ++refresh) {
    residual(a, b, x, r);
    if (project_out_constants) remove_mean(r);
    double rel = norm2(r) / bnorm;
    if (rel <= options.tolerance) {
      report.relative_residual = rel;
      report.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = minv[i] * r[i];
    p = z;
    double rz = dot(r, z);
    bool hit = false;
    while (report.iterations < options.max_iterations) {
      a.multiply(p, ap);
      const double pap = dot(p, ap);
      if (pap <= 0.0 || !std::isfinite(pap)) {
        report.message = "cg: non-positive curvature";
        break;
      }
      const double alpha = rz / pap;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      if (project_out_constants) remove_mean(r);
      ++report.iterations;
      rel = norm2(r) / bnorm;
      if (rel <= options.tolerance) {
        hit = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) z[i] = minv[i] * r[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (!hit) break;
  }

  residual(a, b, x, r);
  if (project_out_constants) remove_mean(r);
  report.relative_residual = norm2(r) / bnorm;
  report.converged = report.relative_residual <= options.tolerance;
  if (!report.converged && report.message.empty()) {
    report.message = "cg: no convergence in " + std::to_string(report.iterations) + " iterations";
  }
  finish_shift();
  return report;
}

SolveReport bicgstab(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                     const SolverOptions& options) {
  check_square(a, b.size(), x.size(), "bicgstab");
  const std::size_t n = x.size();
  SolveReport report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    report.converged = true;
    return report;
  }
  const auto minv = inverse_diagonal(a, options.jacobi);
  std::vector<double> r(n), rhat(n), p(n), v(n), phat(n), s(n), shat(n), t(n);
  constexpr double tiny = 1e-300;
  int refreshes = 0;

  while (report.iterations < options.max_iterations) {
    residual(a, b, x, r);
    double rel = norm2(r) / bnorm;
    if (rel <= options.tolerance) {
      report.relative_residual = rel;
      report.converged = true;
      return report;
    }
    rhat = r;
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(v.begin(), v.end(), 0.0);
    std::fill(p.begin(), p.end(), 0.0);
    bool breakdown = false;
    bool hit = false;
    const double rhat_norm = norm2(rhat);

    while (report.iterations < options.max_iterations) {
      const double rho_new = dot(rhat, r);
      if (std::abs(rho_new) <= 1e-30 * rhat_norm * norm2(r) + tiny) {
        breakdown = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      for (std::size_t i = 0; i < n; ++i) phat[i] = minv[i] * p[i];
      a.multiply(phat, v);
      const double rv = dot(rhat, v);
      if (std::abs(rv) <= tiny) {
        breakdown = true;
        break;
      }
      alpha = rho / rv;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      ++report.iterations;
      if (norm2(s) / bnorm <= options.tolerance) {
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
        hit = true;
        break;
      }
      for (std::size_t i = 0; i < n; ++i) shat[i] = minv[i] * s[i];
      a.multiply(shat, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * phat[i] + omega * shat[i];
        r[i] = s[i] - omega * t[i];
      }
      if (norm2(r) / bnorm <= options.tolerance) {
        hit = true;
        break;
      }
      if (std::abs(omega) <= tiny) {
        breakdown = true;
        break;
      }
    }

    if (breakdown) {
      if (report.restarts >= 1) {
        report.message = "bicgstab: breakdown after restart";
        break;
      }
      ++report.restarts;
      continue;
    }
    if (hit) {
      // Accept only if the true residual agrees; otherwise refresh.
      residual(a, b, x, r);
      rel = norm2(r) / bnorm;
      if (rel <= options.tolerance || ++refreshes > 5) {
        break;
      }
    }
  }

  residual(a, b, x, r);
  report.relative_residual = norm2(r) / bnorm;
  report.converged = report.relative_residual <= options.tolerance;
  if (!report.converged && report.message.empty()) {
    report.message =
        "bicgstab: no convergence in " + std::to_string(report.iterations) + " iterations";
  }
  return report;
}

}  // namespace nspnp
