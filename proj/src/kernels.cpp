#include "izone/kernels.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "izone/error.hpp"

namespace izone::kernels {

void matvec_serial(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                   Eigen::VectorXd& y) {
  const Eigen::Index n = a.rows();
  y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * x(j);
    y(i) = acc;
  }
}

void matvec_parallel(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                     Eigen::VectorXd& y) {
  const Eigen::Index n = a.rows();
  y.resize(n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * x(j);
    y(i) = acc;
  }
}

void matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
            Eigen::VectorXd& y) {
  // Thread spawn overhead dominates below a few hundred rows.
  if (a.rows() >= 256)
    matvec_parallel(a, x, y);
  else
    matvec_serial(a, x, y);
}

PowerIterationResult dominant_eigenpair(const Eigen::MatrixXd& a, double tol,
                                        int max_iter, bool parallel) {
  const Eigen::Index n = a.rows();
  if (n == 0 || a.cols() != n) throw Error("dominant_eigenpair: matrix must be square and non-empty");

  const double shift = a.cwiseAbs().rowwise().sum().maxCoeff();
  Eigen::MatrixXd shifted = a;
  shifted.diagonal().array() += shift;

  PowerIterationResult res;
  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(double(n)));
  Eigen::VectorXd w(n);
  for (int it = 1; it <= max_iter; ++it) {
    if (parallel)
      matvec(shifted, v, w);
    else
      matvec_serial(shifted, v, w);
    const double rayleigh = v.dot(w);  // v has unit norm
    const double lambda = rayleigh - shift;
    const double resid = (w - rayleigh * v).lpNorm<Eigen::Infinity>();
    v = w / w.norm();
    res.iterations = it;
    if (resid <= tol * std::max(1.0, std::abs(rayleigh))) {
      res.value = lambda;
      res.converged = true;
      break;
    }
    res.value = lambda;
  }
  if (v(0) < 0) v = -v;
  res.vector = v;
  return res;
}

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace izone::kernels
