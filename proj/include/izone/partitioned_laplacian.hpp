#pragma once

#include <Eigen/Dense>
#include <vector>

namespace izone {

// Synchronizing-power Laplacian blocked into generator (G) and load (k)
// partitions. Bus ordering inside each partition is ascending by id and
// fixed at build time; downstream vectors are index-aligned with
// gen_order followed by load_order.
struct PartitionedLaplacian {
  Eigen::MatrixXd p_gg;
  Eigen::MatrixXd p_gk;
  Eigen::MatrixXd p_kg;
  Eigen::MatrixXd p_kk;
  std::vector<int> gen_order;
  std::vector<int> load_order;

  Eigen::Index n_gen() const { return p_gg.rows(); }
  Eigen::Index n_load() const { return p_kk.rows(); }
  Eigen::Index n_total() const { return n_gen() + n_load(); }

  Eigen::MatrixXd full() const {
    Eigen::MatrixXd l(n_total(), n_total());
    l.topLeftCorner(n_gen(), n_gen()) = p_gg;
    l.topRightCorner(n_gen(), n_load()) = p_gk;
    l.bottomLeftCorner(n_load(), n_gen()) = p_kg;
    l.bottomRightCorner(n_load(), n_load()) = p_kk;
    return l;
  }

  std::vector<int> bus_order() const {
    std::vector<int> order = gen_order;
    order.insert(order.end(), load_order.begin(), load_order.end());
    return order;
  }
};

}  // namespace izone
