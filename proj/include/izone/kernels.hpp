#pragma once

#include <Eigen/Dense>

namespace izone::kernels {

// Dense matrix-vector product, y = A x. The serial variant is the reference
// used by tests; the parallel variant splits rows across OpenMP threads and
// produces bitwise-identical results (each row is reduced serially).
void matvec_serial(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                   Eigen::VectorXd& y);
void matvec_parallel(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
                     Eigen::VectorXd& y);
void matvec(const Eigen::MatrixXd& a, const Eigen::VectorXd& x,
            Eigen::VectorXd& y);

struct PowerIterationResult {
  double value = 0.0;
  Eigen::VectorXd vector;
  int iterations = 0;
  bool converged = false;
};

// Shifted power iteration for the dominant eigenpair of a symmetric
// non-negative matrix. The shift (inf-norm of a) keeps the iteration matrix
// positive semidefinite so the dominant eigenvalue is the Perron one.
PowerIterationResult dominant_eigenpair(const Eigen::MatrixXd& a,
                                        double tol = 1e-12,
                                        int max_iter = 10000,
                                        bool parallel = true);

int thread_count();

}  // namespace izone::kernels
