#pragma once

#include <Eigen/Core>
#include <Eigen/Cholesky>
#include <utility>

#include "gridlodf/network.hpp"

namespace gridlodf {

// L = C B C^T together with its slack-reduced inverse A (embedded as an n x n
// matrix whose slack row and column are zero) and the Moore-Penrose
// pseudoinverse. Immutable once built.
class LaplacianSystem {
 public:
  // Throws SINGULAR_REDUCED when the reduced Laplacian is not numerically
  // positive definite.
  explicit LaplacianSystem(const Network& net);

  const Eigen::MatrixXd& laplacian() const noexcept { return laplacian_; }
  const Eigen::MatrixXd& reduced_inverse() const noexcept { return reduced_inverse_; }
  const Eigen::MatrixXd& pseudoinverse() const noexcept { return pseudoinverse_; }
  Index slack() const noexcept { return slack_; }
  Index bus_count() const noexcept { return laplacian_.rows(); }

  // Reciprocal condition estimate of the reduced Laplacian factorization.
  double reduced_rcond() const noexcept { return rcond_; }

  // Phase angles with the slack angle fixed at zero: theta = A p.
  Eigen::VectorXd angles(const Eigen::VectorXd& injections) const;

 private:
  Eigen::MatrixXd laplacian_;
  Eigen::MatrixXd reduced_inverse_;
  Eigen::MatrixXd pseudoinverse_;
  Index slack_ = 0;
  double rcond_ = 0.0;
};

inline LaplacianSystem build_system(const Network& net) { return LaplacianSystem(net); }

Eigen::MatrixXd laplacian_matrix(const Network& net);

// f = B C^T A p. Throws UNBALANCED_INJECTION unless |sum p| <= 1e-9.
Eigen::VectorXd solve_flows(const Network& net, const LaplacianSystem& sys,
                            const Eigen::VectorXd& injections);

// Same flows through the pseudoinverse: f = B C^T L^+ p.
Eigen::VectorXd solve_flows_pseudoinverse(const Network& net, const LaplacianSystem& sys,
                                          const Eigen::VectorXd& injections);

// (L+_ii + L+_jj - L+_ij - L+_ji, A_ii + A_jj - A_ij - A_ji); the two agree for
// any non-slack pair. Throws SLACK_EXCLUDED if i or j is the slack.
std::pair<double, double> quadratic_form_equiv(const LaplacianSystem& sys, Index i, Index j);

}  // namespace gridlodf
