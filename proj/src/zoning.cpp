#include "izone/zoning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "izone/error.hpp"

namespace izone {

namespace {

Eigen::VectorXd nearest_distances(const Eigen::MatrixXd& rows,
                                  const Eigen::MatrixXd& centroids) {
  Eigen::VectorXd d(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c)
      best = std::min(best, (rows.row(i) - centroids.row(c)).norm());
    d(i) = best;
  }
  return d;
}

Eigen::RowVectorXd weighted_centroid(const Eigen::MatrixXd& rows,
                                     const std::vector<int>& assignment,
                                     const Eigen::VectorXd& w, int zone,
                                     const Eigen::RowVectorXd& fallback) {
  Eigen::RowVectorXd num = Eigen::RowVectorXd::Zero(rows.cols());
  double den = 0.0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    if (assignment[size_t(i)] != zone) continue;
    num += w(i) * rows.row(i);
    den += w(i);
  }
  if (den == 0.0) return fallback;
  return num / den;
}

}  // namespace

double weighted_cost(const FeatureMatrix& fm,
                     const std::vector<int>& assignment,
                     const Eigen::MatrixXd& centroids,
                     const Eigen::VectorXd& weights) {
  double cost = 0.0;
  for (Eigen::Index i = 0; i < fm.values.rows(); ++i)
    cost += weights(i) *
            (fm.values.row(i) - centroids.row(assignment[size_t(i)])).squaredNorm();
  return cost;
}

FeatureMatrix build_features(const EigenSystem& es,
                             const PartitionedLaplacian& pl,
                             const DnwVector& dnw, int r,
                             bool include_rigid_mode) {
  const Eigen::Index ng = pl.n_gen();
  const Eigen::Index n = pl.n_total();
  if (r < 1 || r > int(ng) - 1)
    throw Error("build_features: r must be in [1, N_g - 1], got " +
                std::to_string(r));
  if (dnw.all_weights.size() != n)
    throw Error("build_features: DNW not extended to all buses");

  // slow modes, skipping the near-zero rigid-body eigenvalue
  const double max_abs = es.eigenvalues.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> selected;
  for (Eigen::Index i = 0; i < es.eigenvalues.size(); ++i) {
    if (!include_rigid_mode && std::abs(es.eigenvalues(i)) < 1e-8 * max_abs)
      continue;
    selected.push_back(i);
    if (int(selected.size()) == r) break;
  }
  if (int(selected.size()) < r)
    throw Error("build_features: fewer than r non-rigid modes available");

  FeatureMatrix fm;
  fm.r = r;
  fm.bus_order = pl.bus_order();
  fm.values.resize(n, r + 1);

  Eigen::LLT<Eigen::MatrixXd> llt;
  if (pl.n_load() > 0) llt.compute(pl.p_kk);
  for (int c = 0; c < r; ++c) {
    Eigen::VectorXd gen_vec = es.right_vectors.col(selected[size_t(c)]);
    Eigen::Index imax = 0;
    gen_vec.cwiseAbs().maxCoeff(&imax);
    if (gen_vec(imax) < 0) gen_vec = -gen_vec;
    fm.values.col(c).head(ng) = gen_vec;
    if (pl.n_load() > 0)
      fm.values.col(c).tail(pl.n_load()) = llt.solve(-pl.p_kg * gen_vec);
  }
  fm.values.col(r) = dnw.all_weights;

  if (!fm.values.allFinite())
    throw Error("build_features: non-finite feature entries");

  for (Eigen::Index c = 0; c <= r; ++c) {
    const double lo = fm.values.col(c).minCoeff();
    const double hi = fm.values.col(c).maxCoeff();
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
      fm.values.col(c).setConstant(0.5);
    else
      fm.values.col(c) = (fm.values.col(c).array() - lo) / (hi - lo);
  }
  return fm;
}

KInit auto_k_init(const FeatureMatrix& fm, double tau, std::uint64_t seed) {
  if (!(tau > 0)) throw Error("auto_k_init: tau must be positive");
  const Eigen::Index n = fm.values.rows();
  if (n == 0) throw Error("auto_k_init: empty feature matrix");

  // The draw indexes buses by id rank, not by row position, so a permuted
  // feature matrix seeds the same bus.
  std::vector<Eigen::Index> by_id(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) by_id[size_t(i)] = i;
  std::sort(by_id.begin(), by_id.end(), [&](Eigen::Index a, Eigen::Index b) {
    return fm.bus_order[size_t(a)] < fm.bus_order[size_t(b)];
  });
  std::mt19937_64 rng(seed);
  const Eigen::Index first = by_id[size_t(rng() % std::uint64_t(n))];

  Eigen::MatrixXd centroids(1, fm.values.cols());
  centroids.row(0) = fm.values.row(first);
  double s_prev = -1.0;
  while (true) {
    Eigen::VectorXd d = nearest_distances(fm.values, centroids);
    Eigen::Index farthest = 0;
    const double s_i = d.maxCoeff(&farthest);
    if (s_prev >= 0 && (s_prev - s_i) / s_prev < tau) break;
    if (s_i == 0.0 || centroids.rows() == n) break;
    centroids.conservativeResize(centroids.rows() + 1, Eigen::NoChange);
    centroids.row(centroids.rows() - 1) = fm.values.row(farthest);
    s_prev = s_i;
  }
  return KInit{int(centroids.rows()), centroids};
}

ZoningResult weighted_kmeans(const FeatureMatrix& fm, const KInit& init,
                             const DnwVector& dnw, int max_iter) {
  const Eigen::Index n = fm.values.rows();
  const int k = init.k;
  if (dnw.all_weights.size() != n)
    throw Error("weighted_kmeans: DNW size does not match feature rows");
  if ((dnw.all_weights.array() <= 0).any())
    throw Error("weighted_kmeans: non-positive nodal weight; 1/Pi is undefined");
  const Eigen::VectorXd w = dnw.all_weights.cwiseInverse();

  Eigen::MatrixXd centroids = init.centroids;
  std::vector<int> assignment(size_t(n), 0);

  auto assign_all = [&]() {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (fm.values.row(i) - centroids.row(c)).squaredNorm();
        if (d < best_d) {  // ties stay with the lowest index
          best_d = d;
          best = c;
        }
      }
      if (assignment[size_t(i)] != best) {
        assignment[size_t(i)] = best;
        changed = true;
      }
    }
    return changed;
  };

  auto repair_empty = [&]() {
    for (int c = 0; c < k; ++c) {
      std::vector<int> count(size_t(k), 0);
      for (int a : assignment) ++count[size_t(a)];
      if (count[size_t(c)] > 0) continue;
      Eigen::Index victim = -1;
      double worst = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (count[size_t(assignment[size_t(i)])] < 2) continue;
        const double d =
            (fm.values.row(i) - centroids.row(assignment[size_t(i)])).norm();
        if (d > worst) {
          worst = d;
          victim = i;
        }
      }
      if (victim >= 0) assignment[size_t(victim)] = c;
    }
  };

  assign_all();
  repair_empty();
  for (int it = 0; it < max_iter; ++it) {
    for (int c = 0; c < k; ++c)
      centroids.row(c) =
          weighted_centroid(fm.values, assignment, w, c, centroids.row(c));
    const bool changed = assign_all();
    repair_empty();
    if (!changed) break;
  }

  // Single-move polish: Lloyd fixed points can still be improved by one
  // reassignment once centroids are recomputed. First improving move in
  // (row, zone) order, repeated until clean, keeps the result deterministic.
  double cost = weighted_cost(fm, assignment, centroids, w);
  for (int guard = 0; guard < 10000; ++guard) {
    Eigen::Index best_i = -1;
    int best_to = -1;
    double best_cost = cost - 1e-12 * std::max(1.0, cost);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int from = assignment[size_t(i)];
      int members = 0;
      for (int a : assignment)
        if (a == from) ++members;
      if (members < 2) continue;
      for (int to = 0; to < k; ++to) {
        if (to == from) continue;
        std::vector<int> trial = assignment;
        trial[size_t(i)] = to;
        Eigen::MatrixXd tc = centroids;
        tc.row(from) = weighted_centroid(fm.values, trial, w, from, tc.row(from));
        tc.row(to) = weighted_centroid(fm.values, trial, w, to, tc.row(to));
        const double trial_cost = weighted_cost(fm, trial, tc, w);
        if (trial_cost < best_cost ||
            (trial_cost == best_cost && best_i >= 0 &&
             fm.bus_order[size_t(i)] < fm.bus_order[size_t(best_i)])) {
          best_cost = trial_cost;
          best_i = i;
          best_to = to;
        }
      }
    }
    if (best_i < 0) break;
    const int from = assignment[size_t(best_i)];
    assignment[size_t(best_i)] = best_to;
    centroids.row(from) =
        weighted_centroid(fm.values, assignment, w, from, centroids.row(from));
    centroids.row(best_to) = weighted_centroid(fm.values, assignment, w,
                                               best_to, centroids.row(best_to));
    cost = weighted_cost(fm, assignment, centroids, w);
  }

  // canonical zone labels: order by lowest contained bus id
  std::vector<int> lowest(size_t(k), std::numeric_limits<int>::max());
  for (Eigen::Index i = 0; i < n; ++i)
    lowest[size_t(assignment[size_t(i)])] =
        std::min(lowest[size_t(assignment[size_t(i)])], fm.bus_order[size_t(i)]);
  std::vector<int> perm(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) perm[size_t(c)] = c;
  std::sort(perm.begin(), perm.end(),
            [&](int a, int b) { return lowest[size_t(a)] < lowest[size_t(b)]; });
  std::vector<int> relabel(static_cast<size_t>(k));
  for (int c = 0; c < k; ++c) relabel[size_t(perm[size_t(c)])] = c;

  ZoningResult zr;
  zr.k = k;
  zr.bus_order = fm.bus_order;
  zr.assignment.resize(size_t(n));
  zr.seps.resize(k, fm.values.cols());
  for (Eigen::Index i = 0; i < n; ++i)
    zr.assignment[size_t(i)] = relabel[size_t(assignment[size_t(i)])];
  for (int c = 0; c < k; ++c)
    zr.seps.row(relabel[size_t(c)]) = centroids.row(c);
  return zr;
}

ZoningResult system_sep_and_sed(ZoningResult zr, const DnwVector& dnw) {
  const int k = zr.k;
  zr.zone_weight = Eigen::VectorXd::Zero(k);
  for (size_t i = 0; i < zr.assignment.size(); ++i)
    zr.zone_weight(zr.assignment[i]) += dnw.all_weights(Eigen::Index(i));

  zr.system_sep = Eigen::VectorXd::Zero(zr.seps.cols());
  const double total = zr.zone_weight.sum();
  for (int c = 0; c < k; ++c)
    zr.system_sep += zr.zone_weight(c) / total * zr.seps.row(c).transpose();

  zr.sed = Eigen::VectorXd::Zero(k);
  if (k >= 2) {
    Eigen::VectorXd d(k);
    for (int c = 0; c < k; ++c)
      d(c) = (zr.seps.row(c).transpose() - zr.system_sep).norm();
    const double dmax = d.maxCoeff();
    if (dmax > 0) zr.sed = d / dmax;
  }
  return zr;
}

}  // namespace izone
