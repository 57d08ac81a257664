#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "izone/spectral_core.hpp"
#include "izone/zoning.hpp"

namespace izone {

enum class DisturbanceKind { angle_impulse, power_step };

struct DisturbanceSpec {
  int bus_id = 0;
  DisturbanceKind kind = DisturbanceKind::power_step;
  double size = 0.0;  // p.u. (power_step) or rad (angle_impulse)
  double t_start = 0.0;
  double t_end = 0.0;
};

struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd delta;  // N_g x T angle deviations, rad
  Eigen::MatrixXd omega;  // N_g x T speed deviations, rad/s
  std::vector<int> gen_order;
};

// Generator-side injection profile for a power step at any bus. A step at
// a load bus maps through the reduced network as -P_gk P_kk^-1 e_k.
Eigen::VectorXd injection_profile(const PartitionedLaplacian& pl, int bus_id);

// Classical RK4 integration of d(delta)/dt = omega,
// d(omega)/dt = -lm_red delta (+ injection/m during the step window).
// injection defaults to a unit vector at the disturbed generator; pass an
// injection_profile result to disturb a load bus.
Trajectory simulate(const ReducedDynamics& rd, const DisturbanceSpec& d,
                    double dt, double horizon,
                    const Eigen::VectorXd* injection = nullptr,
                    double damping = 0.0);

double swing_energy(const ReducedDynamics& rd, const Eigen::VectorXd& delta,
                    const Eigen::VectorXd& omega);

struct CoherenceScore {
  double intra = 0.0;
  double inter = 0.0;
  int intra_pairs = 0;
  int inter_pairs = 0;
};

// Mean pairwise Pearson correlation of the post-disturbance omega traces,
// split into same-zone and cross-zone generator pairs. Pairs involving the
// disturbed generator (if any) are excluded; singleton zones simply
// contribute no intra pairs.
CoherenceScore coherence_score(const Trajectory& tr, const ZoningResult& zr,
                               const DisturbanceSpec& d);

}  // namespace izone
