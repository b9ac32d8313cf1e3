#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "gridlodf/network.hpp"

namespace gridlodf::testing {

// Flows from a least-squares solve of the full singular Laplacian, built
// straight from the line list. Shares no code with LaplacianSystem. Lines with
// `skip[l]` set are left out and report zero flow; every connected piece must
// have balanced injections.
inline Eigen::VectorXd direct_flows(const Network& net, const Eigen::VectorXd& injections,
                                    const std::vector<bool>& skip = {}) {
  const Index n = net.bus_count();
  auto skipped = [&](Index l) { return !skip.empty() && skip[static_cast<std::size_t>(l)]; };
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Index l = 0; l < net.line_count(); ++l) {
    if (skipped(l)) continue;
    const double b = net.lines()[static_cast<std::size_t>(l)].susceptance;
    const Index i = net.tail(l);
    const Index j = net.head(l);
    lap(i, i) += b;
    lap(j, j) += b;
    lap(i, j) -= b;
    lap(j, i) -= b;
  }
  const Eigen::VectorXd theta = lap.completeOrthogonalDecomposition().solve(injections);
  Eigen::VectorXd f = Eigen::VectorXd::Zero(net.line_count());
  for (Index l = 0; l < net.line_count(); ++l) {
    if (skipped(l)) continue;
    f[l] = net.lines()[static_cast<std::size_t>(l)].susceptance * (theta[net.tail(l)] - theta[net.head(l)]);
  }
  return f;
}

// Trips `tripped`, rebalances each resulting piece by `weights` normalized on
// that piece, and re-solves. Returns post minus pre flow for every line (a
// tripped line reports minus its pre-outage flow). NaN entries mark a piece
// that is unbalanced and has no participating bus.
inline Eigen::VectorXd direct_outage_change(const Network& net, const Eigen::VectorXd& injections,
                                            const std::vector<Index>& tripped,
                                            const Eigen::VectorXd& weights) {
  const Index n = net.bus_count();
  std::vector<bool> skip(static_cast<std::size_t>(net.line_count()), false);
  for (Index l : tripped) skip[static_cast<std::size_t>(l)] = true;
  std::vector<Index> piece(static_cast<std::size_t>(n), -1);
  Index pieces = 0;
  for (Index s = 0; s < n; ++s) {
    if (piece[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Index> stack{s};
    piece[static_cast<std::size_t>(s)] = pieces;
    while (!stack.empty()) {
      const Index v = stack.back();
      stack.pop_back();
      for (Index l : net.incident_lines(v)) {
        if (skip[static_cast<std::size_t>(l)]) continue;
        const Index u = net.tail(l) == v ? net.head(l) : net.tail(l);
        if (piece[static_cast<std::size_t>(u)] < 0) {
          piece[static_cast<std::size_t>(u)] = pieces;
          stack.push_back(u);
        }
      }
    }
    ++pieces;
  }
  Eigen::VectorXd p = injections;
  for (Index c = 0; c < pieces; ++c) {
    double imbalance = 0.0;
    double weight = 0.0;
    for (Index b = 0; b < n; ++b) {
      if (piece[static_cast<std::size_t>(b)] != c) continue;
      imbalance += injections[b];
      weight += weights[b];
    }
    if (std::abs(imbalance) <= 1e-14) continue;
    if (!(weight > 0.0)) return Eigen::VectorXd::Constant(net.line_count(), std::nan(""));
    for (Index b = 0; b < n; ++b) {
      if (piece[static_cast<std::size_t>(b)] == c) p[b] -= imbalance * weights[b] / weight;
    }
  }
  return direct_flows(net, p, skip) - direct_flows(net, injections);
}

// Flow change on line l per unit moved from w to z, via two direct solves.
inline double direct_ptdf(const Network& net, Index line, Index w, Index z) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(net.bus_count());
  p[w] += 1.0;
  p[z] -= 1.0;
  return direct_flows(net, p)[line];
}

// Depth-first enumeration of every simple src-dst path; reports whether one uses `line`.
inline bool brute_force_path_through(const Network& net, Index line, Index src, Index dst) {
  if (src == dst) return false;
  std::vector<bool> visited(static_cast<std::size_t>(net.bus_count()), false);
  std::function<bool(Index, bool)> walk = [&](Index v, bool used) {
    if (v == dst) return used;
    visited[static_cast<std::size_t>(v)] = true;
    for (Index l : net.incident_lines(v)) {
      const Index u = net.tail(l) == v ? net.head(l) : net.tail(l);
      if (visited[static_cast<std::size_t>(u)]) continue;
      if (walk(u, used || l == line)) {
        visited[static_cast<std::size_t>(v)] = false;
        return true;
      }
    }
    visited[static_cast<std::size_t>(v)] = false;
    return false;
  };
  return walk(src, false);
}

}  // namespace gridlodf::testing
