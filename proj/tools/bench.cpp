// Compares the serial reference kernels against the OpenMP variants and
// times the DNW computation on the bundled 39-bus case.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "izone/kernels.hpp"
#include "izone/network_model.hpp"
#include "izone/pipeline.hpp"
#include "izone/spectral_core.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, seconds(t0, Clock::now()));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  std::printf("threads: %d\n", izone::kernels::thread_count());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int n : {256, 1024, 4096}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = uni(rng);
    Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index) {
      return uni(rng);
    });
    Eigen::VectorXd y1, y2;
    const double ts = time_best_of(20, [&] { izone::kernels::matvec_serial(a, x, y1); });
    const double tp = time_best_of(20, [&] { izone::kernels::matvec_parallel(a, x, y2); });
    const double diff = (y1 - y2).lpNorm<Eigen::Infinity>();
    std::printf("matvec n=%5d  serial %8.1f us  omp %8.1f us  speedup %.2fx  maxdiff %.1e\n",
                n, ts * 1e6, tp * 1e6, ts / tp, diff);

    const double ps = time_best_of(
        3, [&] { izone::kernels::dominant_eigenpair(a, 1e-10, 2000, false); });
    const double pp = time_best_of(
        3, [&] { izone::kernels::dominant_eigenpair(a, 1e-10, 2000, true); });
    std::printf("perron n=%5d  serial %8.1f us  omp %8.1f us  speedup %.2fx\n",
                n, ps * 1e6, pp * 1e6, ps / pp);
  }

  const char* fixture = argc > 1 ? argv[1] : "fixtures/ieee39_base.json";
  izone::NetworkCase net = izone::load_case(fixture);
  izone::PartitionedLaplacian pl = izone::build_laplacian(net);
  izone::ReducedDynamics rd =
      izone::kron_reduce(pl, net.generators, net.nominal_freq);

  std::vector<double> times;
  for (int i = 0; i < 100; ++i) {
    const auto t0 = Clock::now();
    auto dnw = izone::extend_dnw(izone::merw_dnw(rd), pl);
    times.push_back(seconds(t0, Clock::now()));
  }
  std::sort(times.begin(), times.end());
  std::printf("39-bus DNW end-to-end: median %.3f ms (100 runs)\n",
              times[times.size() / 2] * 1e3);

  const auto t0 = Clock::now();
  auto p = izone::run_pipeline(net, 2, 0.15, 42);
  std::printf("39-bus full zones pipeline: %.3f ms (k=%d)\n",
              seconds(t0, Clock::now()) * 1e3, p.zr.k);
  return 0;
}
