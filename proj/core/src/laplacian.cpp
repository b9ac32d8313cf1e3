#include "gridlodf/laplacian.hpp"

#include <cmath>
#include <sstream>

#include "gridlodf/error.hpp"

namespace gridlodf {
namespace {

constexpr double kMinReducedRcond = 1e-14;

void require_balanced(const Eigen::VectorXd& p) {
  if (std::abs(p.sum()) > 1e-9) {
    std::ostringstream msg;
    msg << "injections sum to " << p.sum();
    throw Error(ErrorCode::kUnbalancedInjection, msg.str());
  }
}

}  // namespace

Eigen::MatrixXd laplacian_matrix(const Network& net) {
  const Index n = net.bus_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const Line& line : net.lines()) {
    const Index i = net.tail(line.id);
    const Index j = net.head(line.id);
    lap(i, i) += line.susceptance;
    lap(j, j) += line.susceptance;
    lap(i, j) -= line.susceptance;
    lap(j, i) -= line.susceptance;
  }
  return lap;
}

LaplacianSystem::LaplacianSystem(const Network& net)
    : laplacian_(laplacian_matrix(net)), slack_(net.slack()) {
  const Index n = laplacian_.rows();
  const Index r = n - 1;

  // Reduced Laplacian: drop the slack row and column.
  Eigen::MatrixXd reduced(r, r);
  auto keep = [&](Index k) { return k < slack_ ? k : k + 1; };
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) reduced(a, b) = laplacian_(keep(a), keep(b));
  }
  Eigen::LLT<Eigen::MatrixXd> llt(reduced);
  rcond_ = llt.info() == Eigen::Success ? llt.rcond() : 0.0;
  if (llt.info() != Eigen::Success || !(rcond_ > kMinReducedRcond)) {
    std::ostringstream msg;
    msg << "reduced Laplacian is not positive definite (rcond " << rcond_ << ")";
    throw Error(ErrorCode::kSingularReduced, msg.str());
  }
  Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(r, r));
  inverse = 0.5 * (inverse + inverse.transpose());
  reduced_inverse_ = Eigen::MatrixXd::Zero(n, n);
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) reduced_inverse_(keep(a), keep(b)) = inverse(a, b);
  }

  // For a connected graph L + J/n is positive definite and
  // L^+ = (L + J/n)^{-1} - J/n, where J is the all-ones matrix.
  const Eigen::MatrixXd shift = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  Eigen::LLT<Eigen::MatrixXd> shifted(laplacian_ + shift);
  if (shifted.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularReduced, "shifted Laplacian is not positive definite");
  }
  pseudoinverse_ = shifted.solve(Eigen::MatrixXd::Identity(n, n)) - shift;
  pseudoinverse_ = 0.5 * (pseudoinverse_ + pseudoinverse_.transpose());
}

Eigen::VectorXd LaplacianSystem::angles(const Eigen::VectorXd& injections) const {
  return reduced_inverse_ * injections;
}

Eigen::VectorXd solve_flows(const Network& net, const LaplacianSystem& sys,
                            const Eigen::VectorXd& injections) {
  require_balanced(injections);
  const Eigen::VectorXd theta = sys.angles(injections);
  Eigen::VectorXd f(net.line_count());
  for (const Line& line : net.lines()) {
    f[line.id] = line.susceptance * (theta[net.tail(line.id)] - theta[net.head(line.id)]);
  }
  return f;
}

Eigen::VectorXd solve_flows_pseudoinverse(const Network& net, const LaplacianSystem& sys,
                                          const Eigen::VectorXd& injections) {
  require_balanced(injections);
  const Eigen::VectorXd theta = sys.pseudoinverse() * injections;
  Eigen::VectorXd f(net.line_count());
  for (const Line& line : net.lines()) {
    f[line.id] = line.susceptance * (theta[net.tail(line.id)] - theta[net.head(line.id)]);
  }
  return f;
}

std::pair<double, double> quadratic_form_equiv(const LaplacianSystem& sys, Index i, Index j) {
  if (i == sys.slack() || j == sys.slack()) {
    throw Error(ErrorCode::kSlackExcluded, "the slack bus has no row in the reduced inverse");
  }
  const auto& lp = sys.pseudoinverse();
  const auto& a = sys.reduced_inverse();
  return {lp(i, i) + lp(j, j) - lp(i, j) - lp(j, i), a(i, i) + a(j, j) - a(i, j) - a(j, i)};
}

}  // namespace gridlodf
