#pragma once

// Independent reference computations for the unit and acceptance tests.
// Nothing here calls into the library's numerics.

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "nspnp/mesh.hpp"
#include "nspnp/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const nspnp::CsrMatrix& a) {
  Dense d(a.rows(), std::vector<double>(a.cols(), 0.0));
  const auto& off = a.row_offsets();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = off[i]; k < off[i + 1]; ++k) {
      d[i][static_cast<std::size_t>(a.column_indices()[k])] += a.values()[k];
    }
  }
  return d;
}

inline nspnp::CsrMatrix from_dense(const Dense& d) {
  std::vector<nspnp::CsrMatrix::Triplet> t;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      if (d[i][j] != 0.0) t.push_back({static_cast<int>(i), static_cast<int>(j), d[i][j]});
    }
  }
  return nspnp::CsrMatrix::from_triplets(d.size(), d.empty() ? 0 : d[0].size(), std::move(t));
}

/// Gaussian elimination with partial pivoting.
inline std::vector<double> dense_solve(Dense a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (a[piv][k] == 0.0) throw std::runtime_error("dense_solve: singular");
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

/// Zero-mean solution of a singular system whose kernel is the constants:
/// the bordered system [A 1; 1^T 0] solved densely.
inline std::vector<double> dense_neumann_solve(const Dense& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  Dense big(n + 1, std::vector<double>(n + 1, 0.0));
  std::vector<double> rhs(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) big[i][j] = a[i][j];
    big[i][n] = 1.0;
    big[n][i] = 1.0;
    rhs[i] = b[i];
  }
  auto x = dense_solve(big, rhs);
  x.pop_back();
  return x;
}

inline Dense random_spd(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dense m(n, std::vector<double>(n));
  for (auto& row : m) {
    for (auto& v : row) v = u(rng);
  }
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = i == j ? 1.0 : 0.0;
      for (std::size_t k = 0; k < n; ++k) s += m[k][i] * m[k][j];
      a[i][j] = s;
    }
  }
  return a;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

/// Integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
inline double monomial_integral(int a, int b) {
  return std::tgamma(a + 1.0) * std::tgamma(b + 1.0) / std::tgamma(a + b + 3.0);
}

/// Closed-form P1 element data on one triangle.
struct P1Element {
  double area = 0.0;
  double gx[3]{};  // gradient of each barycentric function
  double gy[3]{};
};

inline P1Element p1_element(const nspnp::StructuredTriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles()[t];
  const auto& v = mesh.vertices();
  const double x0 = v[tri[0]].x, y0 = v[tri[0]].y;
  const double x1 = v[tri[1]].x, y1 = v[tri[1]].y;
  const double x2 = v[tri[2]].x, y2 = v[tri[2]].y;
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  P1Element e;
  e.area = 0.5 * std::abs(det);
  e.gx[0] = (y1 - y2) / det;
  e.gy[0] = (x2 - x1) / det;
  e.gx[1] = (y2 - y0) / det;
  e.gy[1] = (x0 - x2) / det;
  e.gx[2] = (y0 - y1) / det;
  e.gy[2] = (x1 - x0) / det;
  return e;
}

/// Global P1 matrix from a per-element closed form entry(e, i, j).
inline Dense p1_global(const nspnp::StructuredTriMesh& mesh,
                       const std::function<double(const P1Element&, int, int)>& entry) {
  const std::size_t n = mesh.num_vertices();
  Dense d(n, std::vector<double>(n, 0.0));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto e = p1_element(mesh, t);
    const auto& tri = mesh.triangles()[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) d[tri[i]][tri[j]] += entry(e, i, j);
    }
  }
  return d;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

/// Fourth-order central differences.
inline double d1(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline double d2(const std::function<double(double)>& f, double x, double h = 1e-3) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h);
}

}  // namespace oracle
