#include "izone/sensitivity.hpp"

#include <algorithm>
#include <cmath>

#include "izone/error.hpp"

namespace izone {

namespace {

ReducedDynamics reduce(const NetworkCase& c) {
  PartitionedLaplacian pl = build_laplacian(c);
  return kron_reduce(pl, c.generators, c.nominal_freq);
}

std::vector<int> applicable_targets(const NetworkCase& c,
                                    const PerturbationSpec& spec) {
  if (spec.targets) {
    for (int id : *spec.targets) {
      if (!c.find_bus(id))
        throw Error("perturbation target references unknown bus " +
                    std::to_string(id));
      if (spec.parameter == PerturbParameter::inertia && !c.find_generator(id))
        throw Error("inertia perturbation target bus " + std::to_string(id) +
                    " hosts no generator");
    }
    return *spec.targets;
  }
  std::vector<int> t;
  if (spec.parameter == PerturbParameter::inertia) {
    for (const auto& g : c.generators) t.push_back(g.bus_id);
  } else {
    for (const auto& b : c.buses) t.push_back(b.id);
  }
  return t;
}

}  // namespace

NetworkCase perturb_case(const NetworkCase& base, const PerturbationSpec& spec) {
  if (!(spec.magnitude > 0)) throw Error("perturbation magnitude must be positive");
  NetworkCase out = base;
  const auto targets = applicable_targets(base, spec);
  auto bump = [&](double v) {
    return spec.absolute ? v + spec.magnitude : v * (1.0 + spec.magnitude);
  };
  for (int id : targets) {
    switch (spec.parameter) {
      case PerturbParameter::voltage_mag:
        for (auto& b : out.buses)
          if (b.id == id) b.v_mag = bump(b.v_mag);
        break;
      case PerturbParameter::voltage_ang:
        for (auto& b : out.buses)
          if (b.id == id) b.v_ang = bump(b.v_ang);
        break;
      case PerturbParameter::inertia:
        for (auto& g : out.generators)
          if (g.bus_id == id) g.inertia_h = bump(g.inertia_h);
        break;
    }
  }
  validate(out);
  return out;
}

Eigen::MatrixXd perturbation_matrix(const NetworkCase& base,
                                    const PerturbationSpec& spec) {
  const ReducedDynamics rd0 = reduce(base);
  const ReducedDynamics rd1 = reduce(perturb_case(base, spec));
  return (rd1.lm_red - rd0.lm_red) / spec.magnitude;
}

SensitivityReport first_order_eigs(const EigenSystem& es,
                                   const Eigen::MatrixXd& lm1) {
  const Eigen::Index n = es.eigenvalues.size();
  if (lm1.rows() != n || lm1.cols() != n)
    throw Error("first_order_eigs: perturbation matrix size mismatch");

  const double radius = es.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    const double gap = es.eigenvalues(i + 1) - es.eigenvalues(i);
    if (gap < 1e-8 * std::max(radius, 1.0))
      throw Error("near-degenerate eigenvalues (gap " + std::to_string(gap) +
                  "); first-order perturbation formula is invalid");
  }

  const Eigen::MatrixXd f = es.left_vectors * lm1 * es.right_vectors;
  SensitivityReport rep;
  rep.lambda1 = f.diagonal();
  Eigen::MatrixXd hadamard = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j)
        hadamard(i, j) = f(i, j) / (es.eigenvalues(i) - es.eigenvalues(j));
  rep.u1 = -es.right_vectors * hadamard;
  return rep;
}

double u1var_metric(const EigenSystem& es, const SensitivityReport& report) {
  const Eigen::Index last = es.eigenvalues.size() - 1;
  const Eigen::VectorXd base = es.right_vectors.col(last);
  if ((base.cwiseAbs().array() < 1e-12).any())
    throw Error("u1var: base eigenvector entry below 1e-12; division ill-posed");
  return (report.u1.col(last).array() / base.array()).abs().sum();
}

StudyRow dnw_sensitivity_study(const NetworkCase& base, PerturbParameter p,
                               double epsilon) {
  if (!(epsilon > 0)) throw Error("sensitivity study: epsilon must be positive");
  const ReducedDynamics rd0 = reduce(base);
  const Eigen::MatrixXd s0 = merw_matrix(rd0);
  const EigenSystem es = eigensystem_symmetric(s0);

  StudyRow row{p, epsilon, 0.0,
               Eigen::VectorXd::Zero(es.eigenvalues.size())};
  for (const auto& g : base.generators) {
    PerturbationSpec spec{p, epsilon, std::vector<int>{g.bus_id}, false};
    const ReducedDynamics rd1 = reduce(perturb_case(base, spec));
    const Eigen::MatrixXd s1 = (merw_matrix(rd1) - s0) / epsilon;
    const SensitivityReport rep = first_order_eigs(es, s1);
    row.u1var += u1var_metric(es, rep);
    row.lambda1 += rep.lambda1;
  }
  return row;
}

}  // namespace izone
