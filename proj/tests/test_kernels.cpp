#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "izone/kernels.hpp"

using namespace izone;

namespace {

Eigen::MatrixXd random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uni(rng);
  return a;
}

}  // namespace

TEST_CASE("serial and parallel matvec agree bitwise") {
  for (int n : {1, 7, 64, 300, 1024}) {
    const Eigen::MatrixXd a = random_matrix(n, 11 + std::uint64_t(n));
    const Eigen::VectorXd x = random_matrix(n, 99 + std::uint64_t(n)).col(0);
    Eigen::VectorXd ys, yp;
    kernels::matvec_serial(a, x, ys);
    kernels::matvec_parallel(a, x, yp);
    for (int i = 0; i < n; ++i) CHECK(ys(i) == yp(i));  // exact, not approx

    Eigen::VectorXd yd;
    kernels::matvec(a, x, yd);
    for (int i = 0; i < n; ++i) CHECK(yd(i) == ys(i));
  }
}

TEST_CASE("matvec matches Eigen's product") {
  const Eigen::MatrixXd a = random_matrix(50, 3);
  const Eigen::VectorXd x = random_matrix(50, 4).col(0);
  Eigen::VectorXd y;
  kernels::matvec(a, x, y);
  CHECK((y - a * x).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("power iteration recovers the Perron pair of a symmetric matrix") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + int(rng() % 20);
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = uni(rng);

    const auto res = kernels::dominant_eigenpair(a, 1e-13, 20000);
    REQUIRE(res.converged);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    const double ref = solver.eigenvalues().maxCoeff();
    CHECK(res.value == doctest::Approx(ref).epsilon(1e-10));
    CHECK((a * res.vector - res.value * res.vector).norm() <
          1e-9 * std::max(1.0, std::abs(res.value)));
    CHECK(res.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((res.vector.array() > 0).all());  // Perron vector of a positive matrix
  }
}

TEST_CASE("power iteration is deterministic across parallel settings") {
  const Eigen::MatrixXd a = random_matrix(120, 17).cwiseAbs();
  const auto r1 = kernels::dominant_eigenpair(a, 1e-12, 10000, false);
  const auto r2 = kernels::dominant_eigenpair(a, 1e-12, 10000, true);
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  CHECK(r1.value == r2.value);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    CHECK(r1.vector(i) == r2.vector(i));
}

TEST_CASE("power iteration reports non-convergence") {
  Eigen::MatrixXd a(2, 2);
  a << 3.0, 1.0, 1.0, 1.0;  // two iterations cannot meet a 1e-16 tolerance
  const auto res = kernels::dominant_eigenpair(a, 1e-16, 2);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 2);
}
