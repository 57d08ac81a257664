#include "izone/swing_sim.hpp"

#include <algorithm>
#include <cmath>

#include "izone/error.hpp"
#include "izone/kernels.hpp"

namespace izone {

namespace {

int gen_index(const std::vector<int>& order, int bus_id) {
  auto it = std::find(order.begin(), order.end(), bus_id);
  return it == order.end() ? -1 : int(it - order.begin());
}

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd da = (a.array() - a.mean()).matrix();
  const Eigen::VectorXd db = (b.array() - b.mean()).matrix();
  const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
  if (den == 0.0) return 1.0;  // flat traces count as perfectly coherent
  return da.dot(db) / den;
}

}  // namespace

Eigen::VectorXd injection_profile(const PartitionedLaplacian& pl, int bus_id) {
  const int gi = gen_index(pl.gen_order, bus_id);
  if (gi >= 0) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(pl.n_gen());
    e(gi) = 1.0;
    return e;
  }
  const int li = gen_index(pl.load_order, bus_id);
  if (li < 0)
    throw Error("injection_profile: unknown bus " + std::to_string(bus_id));
  Eigen::VectorXd e = Eigen::VectorXd::Zero(pl.n_load());
  e(li) = 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(pl.p_kk);
  if (llt.info() != Eigen::Success)
    throw Error("injection_profile: load partition not factorizable");
  return -pl.p_gk * llt.solve(e);
}

Trajectory simulate(const ReducedDynamics& rd, const DisturbanceSpec& d,
                    double dt, double horizon,
                    const Eigen::VectorXd* injection, double damping) {
  const Eigen::Index ng = rd.lm_red.rows();
  if (!(dt > 0)) throw Error("simulate: dt must be positive");
  if (d.size == 0.0) throw Error("simulate: disturbance size must be nonzero");
  if (!(d.t_start < d.t_end)) throw Error("simulate: t_start must precede t_end");
  if (horizon < d.t_end) throw Error("simulate: horizon must cover the disturbance");

  // explicit RK4 stability limit on the oscillatory spectrum
  const Eigen::VectorXd sqrt_m = rd.m_diag.cwiseSqrt();
  Eigen::MatrixXd sym(ng, ng);
  for (Eigen::Index i = 0; i < ng; ++i)
    for (Eigen::Index j = 0; j < ng; ++j)
      sym(i, j) = rd.l_red(i, j) / (sqrt_m(i) * sqrt_m(j));
  const double lambda_max =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym).eigenvalues().maxCoeff();
  if (lambda_max > 0 && dt >= 2.0 / std::sqrt(lambda_max))
    throw Error("simulate: dt " + std::to_string(dt) +
                " violates the stability bound 2/sqrt(lambda_max) = " +
                std::to_string(2.0 / std::sqrt(lambda_max)));

  Eigen::VectorXd inj;
  if (d.kind == DisturbanceKind::power_step) {
    if (injection) {
      inj = *injection;
      if (inj.size() != ng) throw Error("simulate: injection profile size mismatch");
    } else {
      const int gi = gen_index(rd.gen_order, d.bus_id);
      if (gi < 0)
        throw Error("simulate: bus " + std::to_string(d.bus_id) +
                    " is not a generator; pass an injection_profile");
      inj = Eigen::VectorXd::Zero(ng);
      inj(gi) = 1.0;
    }
  }

  const int steps = int(std::lround(horizon / dt));
  Trajectory tr;
  tr.gen_order = rd.gen_order;
  tr.times.resize(steps + 1);
  tr.delta.resize(ng, steps + 1);
  tr.omega.resize(ng, steps + 1);

  Eigen::VectorXd delta = Eigen::VectorXd::Zero(ng);
  Eigen::VectorXd omega = Eigen::VectorXd::Zero(ng);
  Eigen::VectorXd ld(ng);

  auto accel = [&](const Eigen::VectorXd& dl, const Eigen::VectorXd& om,
                   double t, Eigen::VectorXd& out) {
    kernels::matvec(rd.l_red, dl, ld);
    out = -(ld.array() / rd.m_diag.array());
    if (d.kind == DisturbanceKind::power_step && t >= d.t_start && t < d.t_end)
      out += d.size * inj.cwiseQuotient(rd.m_diag);
    if (damping > 0) out -= damping * om;
  };

  bool impulse_done = false;
  Eigen::VectorXd a1(ng), a2(ng), a3(ng), a4(ng);
  for (int s = 0; s <= steps; ++s) {
    const double t = s * dt;
    if (d.kind == DisturbanceKind::angle_impulse && !impulse_done &&
        t >= d.t_start) {
      const int gi = gen_index(rd.gen_order, d.bus_id);
      if (gi < 0)
        throw Error("simulate: angle impulse requires a generator bus, got " +
                    std::to_string(d.bus_id));
      delta(gi) += d.size;
      impulse_done = true;
    }
    tr.times(s) = t;
    tr.delta.col(s) = delta;
    tr.omega.col(s) = omega;
    if (s == steps) break;

    const Eigen::VectorXd k1d = omega;
    accel(delta, omega, t, a1);
    const Eigen::VectorXd k2d = omega + 0.5 * dt * a1;
    accel(delta + 0.5 * dt * k1d, k2d, t + 0.5 * dt, a2);
    const Eigen::VectorXd k3d = omega + 0.5 * dt * a2;
    accel(delta + 0.5 * dt * k2d, k3d, t + 0.5 * dt, a3);
    const Eigen::VectorXd k4d = omega + dt * a3;
    accel(delta + dt * k3d, k4d, t + dt, a4);

    delta += dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    omega += dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
  }
  if (!tr.delta.allFinite() || !tr.omega.allFinite())
    throw Error("simulate: trajectory diverged to non-finite values");
  return tr;
}

double swing_energy(const ReducedDynamics& rd, const Eigen::VectorXd& delta,
                    const Eigen::VectorXd& omega) {
  return 0.5 * omega.dot(rd.m_diag.cwiseProduct(omega)) +
         0.5 * delta.dot(rd.l_red * delta);
}

CoherenceScore coherence_score(const Trajectory& tr, const ZoningResult& zr,
                               const DisturbanceSpec& d) {
  const Eigen::Index ng = tr.omega.rows();
  // window: free response after the forcing ends
  Eigen::Index first = 0;
  while (first < tr.times.size() && tr.times(first) < d.t_end) ++first;
  if (tr.times(tr.times.size() - 1) - tr.times(first) < 2.0)
    throw Error("coherence_score: trajectory must cover >= 2 s past the disturbance");

  std::vector<int> zone_of_gen(size_t(ng), -1);
  for (size_t i = 0; i < zr.bus_order.size(); ++i) {
    const auto it =
        std::find(tr.gen_order.begin(), tr.gen_order.end(), zr.bus_order[i]);
    if (it != tr.gen_order.end())
      zone_of_gen[size_t(it - tr.gen_order.begin())] = zr.assignment[i];
  }
  for (int z : zone_of_gen)
    if (z < 0) throw Error("coherence_score: zoning does not cover all generators");

  const int disturbed = [&] {
    auto it = std::find(tr.gen_order.begin(), tr.gen_order.end(), d.bus_id);
    return it == tr.gen_order.end() ? -1 : int(it - tr.gen_order.begin());
  }();

  const Eigen::Index win = tr.times.size() - first;
  CoherenceScore score;
  double intra_sum = 0.0, inter_sum = 0.0;
  for (Eigen::Index i = 0; i < ng; ++i) {
    if (int(i) == disturbed) continue;
    for (Eigen::Index j = i + 1; j < ng; ++j) {
      if (int(j) == disturbed) continue;
      const double c = pearson(tr.omega.row(i).segment(first, win).transpose(),
                               tr.omega.row(j).segment(first, win).transpose());
      if (zone_of_gen[size_t(i)] == zone_of_gen[size_t(j)]) {
        intra_sum += c;
        ++score.intra_pairs;
      } else {
        inter_sum += c;
        ++score.inter_pairs;
      }
    }
  }
  if (score.intra_pairs > 0) score.intra = intra_sum / score.intra_pairs;
  if (score.inter_pairs > 0) score.inter = inter_sum / score.inter_pairs;
  return score;
}

}  // namespace izone
