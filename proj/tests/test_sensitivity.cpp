#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "izone/error.hpp"
#include "izone/network_model.hpp"
#include "izone/sensitivity.hpp"
#include "izone/spectral_core.hpp"
#include "support/test_cases.hpp"

using namespace izone;

namespace {

ReducedDynamics reduce(const NetworkCase& c) {
  return kron_reduce(build_laplacian(c), c.generators, c.nominal_freq);
}

}  // namespace

TEST_CASE("perturb_case scales the requested fields only") {
  const NetworkCase base = testcases::triangle_case();

  PerturbationSpec spec{PerturbParameter::voltage_mag, 0.1,
                        std::vector<int>{2}, false};
  const NetworkCase out = perturb_case(base, spec);
  CHECK(out.find_bus(2)->v_mag ==
        doctest::Approx(base.find_bus(2)->v_mag * 1.1));
  CHECK(out.find_bus(1)->v_mag == base.find_bus(1)->v_mag);
  CHECK(out.find_bus(2)->v_ang == base.find_bus(2)->v_ang);
  CHECK(out.find_generator(2)->inertia_h == base.find_generator(2)->inertia_h);

  PerturbationSpec abs_spec{PerturbParameter::voltage_ang, 0.05,
                            std::vector<int>{1}, true};
  CHECK(perturb_case(base, abs_spec).find_bus(1)->v_ang ==
        doctest::Approx(base.find_bus(1)->v_ang + 0.05));
}

TEST_CASE("perturb_case validates targets") {
  const NetworkCase base = testcases::chain_case();
  PerturbationSpec unknown{PerturbParameter::voltage_mag, 0.1,
                           std::vector<int>{99}, false};
  CHECK_THROWS_AS(perturb_case(base, unknown), Error);
  PerturbationSpec no_gen{PerturbParameter::inertia, 0.1, std::vector<int>{3},
                          false};
  CHECK_THROWS_AS(perturb_case(base, no_gen), Error);
}

TEST_CASE("scaling every inertia gives the exact derivative matrix") {
  // lm_red scales as 1/(1+eps), so the quotient is -lm_red / (1+eps)
  const NetworkCase base = testcases::triangle_case();
  const ReducedDynamics rd = reduce(base);
  const double eps = 0.2;
  const Eigen::MatrixXd lm1 = perturbation_matrix(
      base, {PerturbParameter::inertia, eps, std::nullopt, false});
  CHECK((lm1 + rd.lm_red / (1.0 + eps)).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("scaling every voltage magnitude doubles the relative change") {
  // every coupling picks up (1+eps)^2, so the quotient is (2+eps) lm_red
  const NetworkCase base = testcases::triangle_case();
  const ReducedDynamics rd = reduce(base);
  const double eps = 0.1;
  const Eigen::MatrixXd lm1 = perturbation_matrix(
      base, {PerturbParameter::voltage_mag, eps, std::nullopt, false});
  CHECK((lm1 - (2.0 + eps) * rd.lm_red).lpNorm<Eigen::Infinity>() < 1e-7);
}

TEST_CASE("uniform angles are insensitive to uniform angle scaling") {
  NetworkCase base = testcases::chain_case();
  for (auto& b : base.buses) b.v_ang = 0.1;  // cos of differences stays 1
  const Eigen::MatrixXd lm1 = perturbation_matrix(
      base, {PerturbParameter::voltage_ang, 0.2, std::nullopt, false});
  CHECK(lm1.lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("difference quotients converge (Richardson check)") {
  const NetworkCase base = load_case(testcases::fixture("ieee39_base.json"));
  for (auto p : {PerturbParameter::voltage_mag, PerturbParameter::voltage_ang,
                 PerturbParameter::inertia}) {
    const Eigen::MatrixXd a =
        perturbation_matrix(base, {p, 1e-6, std::vector<int>{31}, false});
    const Eigen::MatrixXd b =
        perturbation_matrix(base, {p, 1e-7, std::vector<int>{31}, false});
    const double scale = std::max(1.0, b.lpNorm<Eigen::Infinity>());
    CHECK((a - b).lpNorm<Eigen::Infinity>() / scale < 1e-3);
  }
}

TEST_CASE("first_order_eigs hand example") {
  // symmetric base diag(1, 3) with off-diagonal perturbation [[0,1],[1,0]]:
  // Lambda_1 = 0, U_1 = [[0, 0.5], [-0.5, 0]]
  EigenSystem es;
  es.eigenvalues = Eigen::VectorXd(2);
  es.eigenvalues << 1.0, 3.0;
  es.right_vectors = Eigen::MatrixXd::Identity(2, 2);
  es.left_vectors = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd lm1(2, 2);
  lm1 << 0.0, 1.0, 1.0, 0.0;

  const SensitivityReport rep = first_order_eigs(es, lm1);
  CHECK(rep.lambda1(0) == doctest::Approx(0.0));
  CHECK(rep.lambda1(1) == doctest::Approx(0.0));
  CHECK(rep.u1(0, 0) == doctest::Approx(0.0));
  CHECK(rep.u1(1, 0) == doctest::Approx(-0.5));
  CHECK(rep.u1(0, 1) == doctest::Approx(0.5));
  CHECK(rep.u1(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("zero perturbation matrix gives zero variations") {
  const ReducedDynamics rd = reduce(testcases::triangle_case());
  const EigenSystem es = eigensystem(rd);
  const SensitivityReport rep =
      first_order_eigs(es, Eigen::MatrixXd::Zero(3, 3));
  CHECK(rep.lambda1.lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(rep.u1.lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("first_order_eigs is linear in the perturbation") {
  const ReducedDynamics rd = reduce(testcases::triangle_case());
  const EigenSystem es = eigensystem(rd);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd a(3, 3), b(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a(i, j) = uni(rng);
      b(i, j) = uni(rng);
    }
  const auto ra = first_order_eigs(es, a);
  const auto rb = first_order_eigs(es, b);
  const auto rab = first_order_eigs(es, 2.0 * a + b);
  CHECK((rab.lambda1 - 2.0 * ra.lambda1 - rb.lambda1)
            .lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK((rab.u1 - 2.0 * ra.u1 - rb.u1).lpNorm<Eigen::Infinity>() < 1e-9);
}

TEST_CASE("eigenvector variation is orthogonal to its own mode") {
  // for a symmetric base the expansion of U_1 has no component along the
  // unperturbed eigenvector itself (the Upsilon diagonal is zero)
  const ReducedDynamics rd = reduce(testcases::triangle_case());
  const EigenSystem es = eigensystem_symmetric(merw_matrix(rd));
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd d(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j) d(i, j) = d(j, i) = uni(rng);
  const auto rep = first_order_eigs(es, d);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(es.right_vectors.col(i).dot(rep.u1.col(i))) < 1e-10);
}

TEST_CASE("first_order_eigs refuses near-degenerate spectra") {
  EigenSystem es;
  es.eigenvalues = Eigen::VectorXd(2);
  es.eigenvalues << 1.0, 1.0 + 1e-12;
  es.right_vectors = Eigen::MatrixXd::Identity(2, 2);
  es.left_vectors = Eigen::MatrixXd::Identity(2, 2);
  CHECK_THROWS_AS(first_order_eigs(es, Eigen::MatrixXd::Ones(2, 2)), Error);
}

TEST_CASE("u1var hand example") {
  EigenSystem es;
  es.eigenvalues = Eigen::VectorXd(2);
  es.eigenvalues << 1.0, 2.0;
  es.right_vectors.resize(2, 2);
  es.right_vectors << 0.8, 0.6, -0.6, 0.8;
  es.left_vectors = es.right_vectors.transpose();
  SensitivityReport rep;
  rep.lambda1 = Eigen::VectorXd::Zero(2);
  rep.u1.resize(2, 2);
  rep.u1 << 0.0, 0.06, 0.0, -0.08;
  // |0.06 / 0.6| + |-0.08 / 0.8| = 0.2
  CHECK(u1var_metric(es, rep) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("u1var refuses near-zero base entries") {
  EigenSystem es;
  es.eigenvalues = Eigen::VectorXd(2);
  es.eigenvalues << 1.0, 2.0;
  es.right_vectors.resize(2, 2);
  es.right_vectors << 1.0, 0.0, 0.0, 1.0;  // zero entry in the last column
  es.left_vectors = es.right_vectors.transpose();
  SensitivityReport rep;
  rep.u1 = Eigen::MatrixXd::Zero(2, 2);
  CHECK_THROWS_AS(u1var_metric(es, rep), Error);
}

TEST_CASE("per-bus study ranks the parameters on the 39-bus case") {
  const NetworkCase base = load_case(testcases::fixture("ieee39_base.json"));
  const StudyRow inertia =
      dnw_sensitivity_study(base, PerturbParameter::inertia, 0.2);
  const StudyRow vmag =
      dnw_sensitivity_study(base, PerturbParameter::voltage_mag, 0.2);
  const StudyRow vang =
      dnw_sensitivity_study(base, PerturbParameter::voltage_ang, 0.2);

  CHECK(inertia.u1var > vmag.u1var);
  CHECK(vmag.u1var > vang.u1var);
  CHECK(inertia.u1var > 0.0);
  CHECK(vang.u1var > 0.0);
}
