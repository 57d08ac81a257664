#include "izone/spectral_core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "izone/error.hpp"
#include "izone/kernels.hpp"

namespace izone {

namespace {

// Load components with no path to any generator make p_kk singular.
void check_load_islands(const PartitionedLaplacian& pl) {
  const Eigen::Index nl = pl.n_load();
  if (nl == 0) return;
  const double scale = pl.p_kk.cwiseAbs().maxCoeff();
  const double tol = scale > 0 ? 1e-14 * scale : 0.0;
  std::vector<int> comp(nl, -1);
  int n_comp = 0;
  for (Eigen::Index s = 0; s < nl; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<Eigen::Index> stack{s};
    while (!stack.empty()) {
      Eigen::Index v = stack.back();
      stack.pop_back();
      if (comp[v] >= 0) continue;
      comp[v] = n_comp;
      for (Eigen::Index w = 0; w < nl; ++w)
        if (w != v && std::abs(pl.p_kk(v, w)) > tol && comp[w] < 0)
          stack.push_back(w);
    }
    ++n_comp;
  }
  std::vector<bool> touches_gen(n_comp, false);
  for (Eigen::Index v = 0; v < nl; ++v)
    for (Eigen::Index g = 0; g < pl.n_gen(); ++g)
      if (std::abs(pl.p_kg(v, g)) > tol) touches_gen[comp[v]] = true;
  for (int ci = 0; ci < n_comp; ++ci) {
    if (touches_gen[ci]) continue;
    std::ostringstream os;
    os << "singular load partition: island with no generator path, buses:";
    for (Eigen::Index v = 0; v < nl; ++v)
      if (comp[v] == ci) os << " " << pl.load_order[v];
    throw Error(os.str());
  }
}

Eigen::LLT<Eigen::MatrixXd> factor_pkk(const PartitionedLaplacian& pl) {
  check_load_islands(pl);
  Eigen::LLT<Eigen::MatrixXd> llt(pl.p_kk);
  if (llt.info() != Eigen::Success)
    throw Error("load partition p_kk is not positive definite (islanded or ill-conditioned)");
  return llt;
}

void fix_column_signs(Eigen::MatrixXd& right, Eigen::MatrixXd* left) {
  for (Eigen::Index c = 0; c < right.cols(); ++c) {
    Eigen::Index imax = 0;
    right.col(c).cwiseAbs().maxCoeff(&imax);
    if (right(imax, c) < 0) {
      right.col(c) = -right.col(c);
      if (left) left->row(c) = -left->row(c);
    }
  }
}

}  // namespace

ReducedDynamics kron_reduce(const PartitionedLaplacian& pl,
                            std::span<const GeneratorRecord> gens, double f_n) {
  if (f_n <= 0) throw Error("kron_reduce: nominal frequency must be positive");
  ReducedDynamics rd;
  rd.gen_order = pl.gen_order;
  const Eigen::Index ng = pl.n_gen();

  rd.m_diag.resize(ng);
  for (Eigen::Index i = 0; i < ng; ++i) {
    const GeneratorRecord* rec = nullptr;
    for (const auto& g : gens)
      if (g.bus_id == pl.gen_order[i]) rec = &g;
    if (!rec)
      throw Error("kron_reduce: no generator record for bus " +
                  std::to_string(pl.gen_order[i]));
    rd.m_diag(i) = 2.0 * rec->inertia_h / (2.0 * std::numbers::pi * f_n);
  }

  if (pl.n_load() == 0) {
    rd.l_red = pl.p_gg;
  } else {
    auto llt = factor_pkk(pl);
    rd.l_red = pl.p_gg - pl.p_gk * llt.solve(pl.p_kg);
  }
  // symmetrize roundoff so downstream symmetric solvers see an exact pair
  rd.l_red = 0.5 * (rd.l_red + rd.l_red.transpose()).eval();
  rd.lm_red = rd.m_diag.cwiseInverse().asDiagonal() * rd.l_red;
  return rd;
}

EigenSystem eigensystem(const ReducedDynamics& rd) {
  const Eigen::Index ng = rd.l_red.rows();
  Eigen::VectorXd sqrt_m = rd.m_diag.cwiseSqrt();
  Eigen::MatrixXd sym(ng, ng);
  for (Eigen::Index i = 0; i < ng; ++i)
    for (Eigen::Index j = 0; j < ng; ++j)
      sym(i, j) = rd.l_red(i, j) / (sqrt_m(i) * sqrt_m(j));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw Error("eigensolver did not converge; |l_red|_max = " +
                std::to_string(rd.l_red.cwiseAbs().maxCoeff()));

  EigenSystem out;
  out.eigenvalues = es.eigenvalues();
  out.right_vectors = sqrt_m.cwiseInverse().asDiagonal() * es.eigenvectors();
  out.left_vectors = es.eigenvectors().transpose() * sqrt_m.asDiagonal();
  fix_column_signs(out.right_vectors, &out.left_vectors);
  return out;
}

EigenSystem eigensystem_symmetric(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw Error("eigensolver did not converge on symmetric input");
  EigenSystem out;
  out.eigenvalues = es.eigenvalues();
  out.right_vectors = es.eigenvectors();
  out.left_vectors = es.eigenvectors().transpose();
  fix_column_signs(out.right_vectors, &out.left_vectors);
  return out;
}

Eigen::MatrixXd merw_matrix(const ReducedDynamics& rd) {
  const Eigen::Index ng = rd.l_red.rows();
  Eigen::VectorXd sqrt_m = rd.m_diag.cwiseSqrt();
  Eigen::MatrixXd s(ng, ng);
  for (Eigen::Index i = 0; i < ng; ++i)
    for (Eigen::Index j = 0; j < ng; ++j)
      s(i, j) = std::abs(rd.l_red(i, j)) / (sqrt_m(i) * sqrt_m(j));
  return s;
}

DnwVector merw_dnw(const ReducedDynamics& rd) {
  const Eigen::MatrixXd s = merw_matrix(rd);
  const Eigen::Index ng = s.rows();

  // irreducibility: the off-diagonal pattern must be connected
  {
    const double scale = s.cwiseAbs().maxCoeff();
    const double tol = scale > 0 ? 1e-14 * scale : 0.0;
    std::vector<int> comp(ng, -1);
    int n_comp = 0;
    for (Eigen::Index v0 = 0; v0 < ng; ++v0) {
      if (comp[v0] >= 0) continue;
      std::vector<Eigen::Index> stack{v0};
      while (!stack.empty()) {
        Eigen::Index v = stack.back();
        stack.pop_back();
        if (comp[v] >= 0) continue;
        comp[v] = n_comp;
        for (Eigen::Index w = 0; w < ng; ++w)
          if (w != v && s(v, w) > tol && comp[w] < 0) stack.push_back(w);
      }
      ++n_comp;
    }
    if (n_comp > 1) {
      std::ostringstream os;
      os << "reduced generator coupling is reducible; components:";
      for (int ci = 0; ci < n_comp; ++ci) {
        os << " {";
        bool first = true;
        for (Eigen::Index v = 0; v < ng; ++v)
          if (comp[v] == ci) {
            os << (first ? "" : ",") << rd.gen_order[v];
            first = false;
          }
        os << "}";
      }
      throw Error(os.str());
    }
  }

  auto pi = kernels::dominant_eigenpair(s, 1e-12, 10000);
  if (!pi.converged)
    throw Error("Perron power iteration did not converge in 10000 iterations");

  // Inverse-iteration polish. The power iteration's stopping rule is a
  // norm-wise residual, which leaves small Perron entries with enough
  // relative error to spoil the row sums of the transition matrix; one or
  // two near-singular solves push the pair to componentwise precision.
  {
    // componentwise relative residual: the row sums of P_M are only as good
    // as the worst-converged entry of u
    auto rel_resid = [&](const Eigen::VectorXd& u, double lambda) {
      if ((u.array() <= 0).any()) return std::numeric_limits<double>::infinity();
      return ((s * u - lambda * u).array().abs() / (lambda * u.array()))
          .maxCoeff();
    };
    double resid = rel_resid(pi.vector, pi.value);
    for (int step = 0; step < 5; ++step) {
      Eigen::MatrixXd shifted = s;
      shifted.diagonal().array() -= pi.value;
      Eigen::VectorXd w = Eigen::PartialPivLU<Eigen::MatrixXd>(shifted)
                              .solve(pi.vector);
      if (!w.allFinite() || w.norm() == 0.0) break;
      w /= w.norm();
      if (w.dot(pi.vector) < 0) w = -w;
      const double rq = w.dot(s * w);
      const double r = rel_resid(w, rq);
      if (r >= resid) break;
      pi.vector = w;
      pi.value = rq;
      resid = r;
    }
  }

  if ((pi.vector.array() <= 0).any())
    throw Error("Perron vector is not strictly positive");

  DnwVector out;
  out.perron_value = pi.value;
  out.perron_vector = pi.vector;
  out.gen_weights = pi.vector.cwiseAbs2();
  out.all_weights = out.gen_weights;
  out.gen_order = rd.gen_order;
  out.bus_order = rd.gen_order;
  out.transition.resize(ng, ng);
  for (Eigen::Index i = 0; i < ng; ++i)
    for (Eigen::Index j = 0; j < ng; ++j)
      out.transition(i, j) = s(i, j) * pi.vector(j) / (pi.value * pi.vector(i));
  // the row sums are exactly 1 in real arithmetic (lambda u_i = sum_j S_ij u_j);
  // renormalize away the float error of that identity
  for (Eigen::Index i = 0; i < ng; ++i)
    out.transition.row(i) /= out.transition.row(i).sum();
  return out;
}

DnwVector extend_dnw(const DnwVector& dnw, const PartitionedLaplacian& pl) {
  DnwVector out = dnw;
  out.bus_order = pl.bus_order();
  const Eigen::Index nl = pl.n_load();
  if (nl == 0) {
    out.all_weights = dnw.gen_weights;
    return out;
  }
  auto llt = factor_pkk(pl);
  Eigen::VectorXd load_part = llt.solve(-pl.p_kg * dnw.gen_weights);
  out.all_weights.resize(pl.n_total());
  out.all_weights.head(pl.n_gen()) = dnw.gen_weights;
  out.all_weights.tail(nl) = load_part;
  return out;
}

}  // namespace izone
