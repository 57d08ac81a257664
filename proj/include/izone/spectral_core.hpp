#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "izone/network_model.hpp"
#include "izone/partitioned_laplacian.hpp"

namespace izone {

// Generator-only dynamics after Kron reduction of the load partition.
struct ReducedDynamics {
  Eigen::MatrixXd l_red;   // Schur complement, symmetric, zero row sums
  Eigen::MatrixXd lm_red;  // diag(m)^-1 * l_red
  Eigen::VectorXd m_diag;  // m_i = 2 H_i / (2 pi f_n)
  std::vector<int> gen_order;
};

// Real eigensystem of lm_red with biorthonormal left/right vectors
// (W* U = I). Eigenvalues ascending.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd right_vectors;  // columns
  Eigen::MatrixXd left_vectors;   // rows
};

struct DnwVector {
  Eigen::VectorXd gen_weights;  // Pi_M, sums to 1
  Eigen::VectorXd all_weights;  // Pi_M_net, generator entries first
  double perron_value = 0.0;
  Eigen::VectorXd perron_vector;  // unit 2-norm, strictly positive
  Eigen::MatrixXd transition;     // P_M, row-stochastic
  std::vector<int> gen_order;
  std::vector<int> bus_order;  // gen_order then load_order once extended
};

ReducedDynamics kron_reduce(const PartitionedLaplacian& pl,
                            std::span<const GeneratorRecord> gens, double f_n);

// Computed through the symmetric similarity transform
// diag(m)^(1/2) lm_red diag(m)^(-1/2) and mapped back.
EigenSystem eigensystem(const ReducedDynamics& rd);

// Eigensystem of a symmetric matrix; left vectors are the transpose.
EigenSystem eigensystem_symmetric(const Eigen::MatrixXd& a);

// The non-negative matrix the maximal entropy random walk runs on:
// element-wise |l_red| scaled by 1/sqrt(m_i m_j). This is the symmetric
// inertia-weighted form of |lm_red| (same spectrum), which keeps
// Pi_i = u_i^2 an exact stationary distribution.
Eigen::MatrixXd merw_matrix(const ReducedDynamics& rd);

// Dynamic Nodal Weight of the generator nodes via MERW.
DnwVector merw_dnw(const ReducedDynamics& rd);

// Extends the generator weights to load buses through the network
// structure: solve P_kk x = -P_kg Pi_M.
DnwVector extend_dnw(const DnwVector& dnw, const PartitionedLaplacian& pl);

}  // namespace izone
