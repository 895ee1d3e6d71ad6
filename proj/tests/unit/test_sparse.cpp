#include <cmath>
#include <random>

#include "doctest.h"
#include "nspnp/sparse.hpp"
#include "support/oracles.hpp"

using namespace nspnp;

namespace {

CsrMatrix laplacian_1d(int n, bool neumann) {
  oracle::Dense d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    d[i][i] = 2.0;
    if (i > 0) d[i][i - 1] = -1.0;
    if (i + 1 < n) d[i][i + 1] = -1.0;
  }
  if (neumann) {
    d[0][0] = 1.0;
    d[n - 1][n - 1] = 1.0;
  }
  return oracle::from_dense(d);
}

SolverOptions tight() { return {1e-12, 10000, true}; }

}  // namespace

TEST_CASE("spmv") {
  const std::vector<double> x{1.5, -2.0, 3.25};
  CHECK(spmv(CsrMatrix::identity(3), x) == x);
  const auto z = CsrMatrix::from_triplets(3, 3, {});
  CHECK(spmv(z, x) == std::vector<double>(3, 0.0));
  const auto a = oracle::from_dense({{1, 2}, {3, 4}});
  CHECK(spmv(a, std::vector<double>{1, 1}) == std::vector<double>{3, 7});
  CHECK_THROWS(spmv(a, x));

  std::mt19937_64 rng(5);
  const auto r = oracle::from_dense(oracle::random_spd(30, rng));
  const auto v = oracle::random_vector(30, rng);
  const auto y1 = spmv(r, v), y2 = spmv(r, v);
  CHECK(y1 == y2);
}

TEST_CASE("csr construction and helpers") {
  const auto a = CsrMatrix::from_triplets(2, 3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {1, 1, -1.0}});
  CHECK(a.nnz() == 3);
  CHECK(a.at(0, 2) == 1.5);
  CHECK(a.at(0, 0) == 2.0);
  CHECK(a.at(1, 0) == 0.0);
  CHECK(a.find(1, 0) == -1);
  const auto t = a.transpose();
  CHECK(t.rows() == 3);
  CHECK(t.at(2, 0) == 1.5);
  std::vector<double> y(3);
  a.multiply_transpose(std::vector<double>{1.0, 2.0}, y);
  CHECK(y == std::vector<double>{2.0, -2.0, 1.5});

  auto b = a;
  b.add(1, 1, 3.0);
  CHECK(b.at(1, 1) == 2.0);
  CHECK_THROWS(b.add(1, 0, 1.0));
  CHECK(a.same_pattern(b));

  const CsrMatrix* mats[] = {&a, &b};
  const double coeffs[] = {2.0, -1.0};
  const auto c = linear_combination(coeffs, mats);
  CHECK(c.at(0, 2) == doctest::Approx(1.5));
  CHECK(c.at(1, 1) == doctest::Approx(-4.0));

  CHECK_THROWS(CsrMatrix(2, 2, {0, 1, 2}, {1, 0, 0}, {1, 1}));
  CHECK_THROWS(CsrMatrix(2, 2, {0, 2, 2}, {1, 0}, {1, 1}));
  CHECK_THROWS(CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}));
  CHECK(oracle::from_dense({{1, 2}, {3, 1}}).asymmetry() == doctest::Approx(1.0 / 3));
}

TEST_CASE("cg small oracles") {
  const std::vector<double> b{1.0, -2.0, 0.5, 4.0};
  std::vector<double> x(4, 0.0);
  const auto rep = cg(CsrMatrix::identity(4), b, x, tight());
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  CHECK(oracle::max_abs_diff(x, b) <= 1e-15);

  std::vector<double> y(3, 0.0);
  CHECK(cg(laplacian_1d(3, false), std::vector<double>{1, 1, 1}, y, tight()).converged);
  CHECK(y[0] == doctest::Approx(1.5));
  CHECK(y[1] == doctest::Approx(2.0));
  CHECK(y[2] == doctest::Approx(1.5));

  // Zero right-hand side.
  std::vector<double> z{1.0, 2.0, 3.0};
  CHECK(cg(laplacian_1d(3, false), std::vector<double>(3, 0.0), z, tight()).converged);
  CHECK(oracle::max_abs(z) == 0.0);
}

TEST_CASE("cg on random SPD systems matches dense elimination") {
  std::mt19937_64 rng(20240917);
  for (std::size_t n : {5u, 17u, 33u, 50u}) {
    const auto d = oracle::random_spd(n, rng);
    const auto b = oracle::random_vector(n, rng);
    const auto ref = oracle::dense_solve(d, b);
    std::vector<double> x(n, 0.0);
    const auto rep = cg(oracle::from_dense(d), b, x, tight());
    CHECK(rep.converged);
    CHECK(oracle::max_abs_diff(x, ref) <= 1e-8 * std::max(1.0, oracle::max_abs(ref)));
  }
}

TEST_CASE("cg with constant projection matches the zero-mean pseudoinverse") {
  std::mt19937_64 rng(99);
  for (int n : {4, 12, 20}) {
    const auto a = laplacian_1d(n, true);
    auto b = oracle::random_vector(n, rng);
    double mean = 0.0;
    for (double v : b) mean += v / n;
    for (double& v : b) v -= mean;
    const auto ref = oracle::dense_neumann_solve(oracle::to_dense(a), b);
    std::vector<double> x(n, 0.0);
    const auto rep = cg(a, b, x, tight(), true);
    CHECK(rep.converged);
    double xm = 0.0;
    for (double v : x) xm += v / n;
    CHECK(std::abs(xm) <= 1e-12);
    CHECK(oracle::max_abs_diff(x, ref) <= 1e-8);

    // Incompatible data: the constant part of b is discarded.
    auto b2 = b;
    for (double& v : b2) v += 0.3;
    std::vector<double> x2(n, 1.0);
    CHECK(cg(a, b2, x2, tight(), true).converged);
    CHECK(oracle::max_abs_diff(x2, ref) <= 1e-8);
  }

  // Weighted mean condition.
  const auto a = laplacian_1d(6, true);
  std::vector<double> b{1, -1, 2, -2, 0.5, -0.5};
  const std::vector<double> w{1, 2, 2, 2, 2, 1};
  std::vector<double> x(6, 0.0);
  CHECK(cg(a, b, x, tight(), true, w).converged);
  CHECK(std::abs(dot(w, x)) <= 1e-12);
}

TEST_CASE("bicgstab") {
  std::vector<double> b{2.0, -1.0, 0.25};
  std::vector<double> x(3, 0.0);
  CHECK(bicgstab(CsrMatrix::identity(3), b, x, tight()).converged);
  CHECK(oracle::max_abs_diff(x, b) <= 1e-15);

  // Upper triangular system: back substitution.
  const auto u = oracle::from_dense({{2, 1, -1}, {0, 3, 2}, {0, 0, 4}});
  const std::vector<double> rhs{1, 2, 8};
  std::vector<double> y(3, 0.0);
  CHECK(bicgstab(u, rhs, y, tight()).converged);
  const double y2 = 2.0, y1 = (2 - 2 * y2) / 3, y0 = (1 - y1 + y2) / 2;
  CHECK(y[2] == doctest::Approx(y2));
  CHECK(y[1] == doctest::Approx(y1));
  CHECK(y[0] == doctest::Approx(y0));

  std::mt19937_64 rng(17);
  for (std::size_t n : {8u, 25u, 50u}) {
    const auto d = oracle::random_spd(n, rng);
    const auto a = oracle::from_dense(d);
    const auto f = oracle::random_vector(n, rng);
    std::vector<double> xc(n, 0.0), xb(n, 0.0);
    CHECK(cg(a, f, xc, tight()).converged);
    CHECK(bicgstab(a, f, xb, tight()).converged);
    CHECK(oracle::max_abs_diff(xc, xb) <= 1e-10 * std::max(1.0, oracle::max_abs(xc)));

    // Nonsymmetric: diagonally dominant random perturbation.
    auto ns = d;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) ns[i][j] += 0.1 * (double(i) - double(j)) / double(n);
      }
    }
    const auto ref = oracle::dense_solve(ns, f);
    std::vector<double> xn(n, 0.0);
    CHECK(bicgstab(oracle::from_dense(ns), f, xn, tight()).converged);
    CHECK(oracle::max_abs_diff(xn, ref) <= 1e-8 * std::max(1.0, oracle::max_abs(ref)));
  }
}

TEST_CASE("solver failure is reported, not thrown") {
  std::mt19937_64 rng(1);
  const auto a = oracle::from_dense(oracle::random_spd(40, rng));
  const auto b = oracle::random_vector(40, rng);
  std::vector<double> x(40, 0.0);
  const auto rep = cg(a, b, x, {1e-14, 2, true});
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 2);
  std::vector<double> bad(3);
  CHECK_THROWS(cg(a, b, bad));
}
