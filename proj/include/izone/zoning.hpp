#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "izone/spectral_core.hpp"

namespace izone {

// Per-bus feature rows: r slow-mode eigenvector components (load buses get
// the -P_kk^-1 P_kg extension) plus one DNW column, each column min-max
// normalized to [0,1].
struct FeatureMatrix {
  Eigen::MatrixXd values;  // N x (r+1)
  std::vector<int> bus_order;
  int r = 0;
};

struct ZoningResult {
  int k = 0;
  std::vector<int> assignment;  // zone index per bus_order position
  Eigen::MatrixXd seps;         // k x d cluster SEPs
  Eigen::VectorXd system_sep;
  Eigen::VectorXd sed;          // in [0,1], max exactly 1 when k >= 2
  Eigen::VectorXd zone_weight;  // summed Pi_M_net per zone
  std::vector<int> bus_order;
};

FeatureMatrix build_features(const EigenSystem& es,
                             const PartitionedLaplacian& pl,
                             const DnwVector& dnw, int r,
                             bool include_rigid_mode = false);

struct KInit {
  int k = 0;
  Eigen::MatrixXd centroids;  // k x d
};

// Farthest-point seeding that also picks k: stop growing the centroid set
// once the max distance-to-nearest-centroid stops shrinking by more than
// tau (relative).
KInit auto_k_init(const FeatureMatrix& fm, double tau, std::uint64_t seed);

// Lloyd iterations with centroid updates weighted by 1/Pi_M_net, followed
// by single-move polishing until no reassignment lowers the weighted
// within-cluster cost. Zone labels are canonicalized by lowest contained
// bus id.
ZoningResult weighted_kmeans(const FeatureMatrix& fm, const KInit& init,
                             const DnwVector& dnw, int max_iter = 100);

// Fills system_sep, sed, and zone_weight.
ZoningResult system_sep_and_sed(ZoningResult zr, const DnwVector& dnw);

double weighted_cost(const FeatureMatrix& fm,
                     const std::vector<int>& assignment,
                     const Eigen::MatrixXd& centroids,
                     const Eigen::VectorXd& weights);

}  // namespace izone
