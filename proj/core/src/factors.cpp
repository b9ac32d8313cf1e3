#include "gridlodf/factors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <limits>
#include <random>
#include <sstream>

#include "gridlodf/error.hpp"

namespace gridlodf {
namespace {

constexpr double kMinOutageRcond = 1e-10;

}  // namespace

double ptdf(const Network& net, const LaplacianSystem& sys, Index line, Index w, Index z) {
  const auto& a = sys.reduced_inverse();
  const Index i = net.tail(line);
  const Index j = net.head(line);
  return net.lines()[static_cast<std::size_t>(line)].susceptance *
         (a(i, w) + a(j, z) - a(i, z) - a(j, w));
}

Eigen::MatrixXd ptdf_matrix(const Network& net, const LaplacianSystem& sys) {
  return susceptance_matrix(net) * (incidence_matrix(net).transpose() * sys.reduced_inverse());
}

Eigen::MatrixXd line_ptdf_matrix(const Network& net, const LaplacianSystem& sys) {
  return ptdf_matrix(net, sys) * incidence_matrix(net);
}

Glodf glodf(const Network& net, const LaplacianSystem& sys, std::span<const Index> tripped) {
  Glodf out;
  out.tripped.assign(tripped.begin(), tripped.end());
  std::vector<bool> in_f(static_cast<std::size_t>(net.line_count()), false);
  for (Index l : tripped) {
    if (l < 0 || l >= net.line_count()) {
      throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(l) + " does not exist");
    }
    if (in_f[static_cast<std::size_t>(l)]) {
      throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(l) + " listed twice");
    }
    in_f[static_cast<std::size_t>(l)] = true;
  }
  for (Index l = 0; l < net.line_count(); ++l) {
    if (!in_f[static_cast<std::size_t>(l)]) out.surviving.push_back(l);
  }
  const auto k = static_cast<Index>(out.tripped.size());
  const auto s = static_cast<Index>(out.surviving.size());
  if (k == 0) {
    out.factors = Eigen::MatrixXd::Zero(s, 0);
    return out;
  }
  if (!net.connected_without(tripped)) {
    throw Error(ErrorCode::kCutSet, "the tripped lines disconnect the network");
  }

  const Eigen::MatrixXd d = line_ptdf_matrix(net, sys);
  Eigen::MatrixXd d_ff(k, k);
  Eigen::MatrixXd d_sf(s, k);
  for (Index c = 0; c < k; ++c) {
    const Index col = out.tripped[static_cast<std::size_t>(c)];
    for (Index r = 0; r < k; ++r) d_ff(r, c) = d(out.tripped[static_cast<std::size_t>(r)], col);
    for (Index r = 0; r < s; ++r) d_sf(r, c) = d(out.surviving[static_cast<std::size_t>(r)], col);
  }
  const Eigen::MatrixXd outage = Eigen::MatrixXd::Identity(k, k) - d_ff;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(outage);
  const auto& sv = svd.singularValues();
  out.condition = sv[k - 1] > 0.0 ? sv[0] / sv[k - 1] : std::numeric_limits<double>::infinity();
  if (!(1.0 / out.condition > kMinOutageRcond)) {
    std::ostringstream msg;
    msg << "outage operator I - D_FF is singular (condition estimate " << out.condition << ")";
    throw Error(ErrorCode::kSingularOutage, msg.str());
  }
  // K^F = D_-F,F (I - D_FF)^{-1}, solved as (I - D_FF)^T K^T = D_-F,F^T.
  out.factors = outage.transpose().partialPivLu().solve(d_sf.transpose()).transpose();
  return out;
}

double effective_reactance(const Network& net, const LaplacianSystem& sys, Index i, Index j) {
  if (i == j) throw Error(ErrorCode::kInvalidArgument, "effective reactance needs two buses");
  if (i != sys.slack() && j != sys.slack()) {
    const auto& a = sys.reduced_inverse();
    return a(i, i) + a(j, j) - 2.0 * a(i, j);
  }
  for (Index k = 0; k < net.bus_count(); ++k) {
    if (k != i && k != j) {
      LaplacianSystem moved(net.with_slack(k));
      const auto& a = moved.reduced_inverse();
      return a(i, i) + a(j, j) - 2.0 * a(i, j);
    }
  }
  // Two-bus network: every choice of slack touches the pair, fall back to L^+.
  const auto& lp = sys.pseudoinverse();
  return lp(i, i) + lp(j, j) - 2.0 * lp(i, j);
}

double spanning_tree_centrality(const Network& net, const LaplacianSystem& sys, Index line) {
  const Line& l = net.lines()[static_cast<std::size_t>(line)];
  return effective_reactance(net, sys, net.tail(line), net.head(line)) / l.reactance;
}

Network perturb(const Network& net, const Perturbation& perturbation) {
  const double mag = perturbation.relative_magnitude;
  if (!(mag >= 0.0 && mag < 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, "perturbation magnitude must lie in [0, 0.5)");
  }
  if (mag == 0.0) return net;
  std::mt19937_64 rng(perturbation.seed);
  std::uniform_real_distribution<double> noise(-mag, mag);
  Eigen::VectorXd b = net.susceptances();
  for (Index l = 0; l < b.size(); ++l) b[l] *= 1.0 + noise(rng);
  return net.with_susceptances(b);
}

}  // namespace gridlodf
