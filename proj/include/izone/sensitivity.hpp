#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "izone/network_model.hpp"
#include "izone/spectral_core.hpp"

namespace izone {

enum class PerturbParameter { voltage_mag, voltage_ang, inertia };

struct PerturbationSpec {
  PerturbParameter parameter = PerturbParameter::inertia;
  double magnitude = 0.2;  // epsilon, fraction of initial value
  // empty -> all applicable buses (all buses for voltage parameters,
  // generator buses for inertia)
  std::optional<std::vector<int>> targets;
  bool absolute = false;  // add epsilon instead of scaling by (1 + epsilon)
};

struct SensitivityReport {
  Eigen::VectorXd lambda1;  // first-order eigenvalue variations
  Eigen::MatrixXd u1;       // first-order eigenvector variation
};

NetworkCase perturb_case(const NetworkCase& base, const PerturbationSpec& spec);

// LM_red_1 = (LM_red(perturbed) - LM_red(base)) / epsilon, rebuilt through
// the full Laplacian + Kron pipeline.
Eigen::MatrixXd perturbation_matrix(const NetworkCase& base,
                                    const PerturbationSpec& spec);

// Lambda_1 = diag(W* LM_1 U); U_1 = -U (Ups o (W* LM_1 U)) with
// Ups_ij = 1/(lambda_i - lambda_j) off the diagonal, zero on it.
// Requires a simple spectrum.
SensitivityReport first_order_eigs(const EigenSystem& es,
                                   const Eigen::MatrixXd& lm1);

// Sum of |U_1 ./ U_o| over the largest-eigenvalue column.
double u1var_metric(const EigenSystem& es, const SensitivityReport& report);

struct StudyRow {
  PerturbParameter parameter;
  double epsilon = 0.0;
  double u1var = 0.0;
  Eigen::VectorXd lambda1;
};

// The Table-style DNW sensitivity study: perturbs the named parameter one
// generator bus at a time, propagates each perturbation through the MERW
// matrix, and sums the per-bus u1var contributions. (Scaling every bus at
// once commutes with the base matrix and would measure exactly zero for
// voltage and inertia.)
StudyRow dnw_sensitivity_study(const NetworkCase& base, PerturbParameter p,
                               double epsilon);

}  // namespace izone
