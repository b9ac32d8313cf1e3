#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "gridlodf/laplacian.hpp"
#include "gridlodf/network.hpp"

namespace gridlodf {

// Flow change on `line` (positive tail -> head) per unit injected at bus `w`
// and withdrawn at bus `z`: B_l (A_iw + A_jz - A_iz - A_jw) with l = (i, j).
double ptdf(const Network& net, const LaplacianSystem& sys, Index line, Index w, Index z);

// m x n matrix B C^T A: column k is the flow response to a unit injection at k
// withdrawn at the slack.
Eigen::MatrixXd ptdf_matrix(const Network& net, const LaplacianSystem& sys);

// m x m matrix B C^T A C: column l' is the flow response to a unit transfer
// from the tail of l' to its head.
Eigen::MatrixXd line_ptdf_matrix(const Network& net, const LaplacianSystem& sys);

// Generalized line outage distribution factors for a simultaneous non-cut
// outage F: K^F = B_-F C_-F^T A C_F (I - B_F C_F^T A C_F)^{-1}.
struct Glodf {
  std::vector<Index> surviving;  // row order: line ids not in F, ascending
  std::vector<Index> tripped;    // column order: F as given
  Eigen::MatrixXd factors;       // |surviving| x |tripped|
  double condition = 1.0;        // 2-norm condition number of I - B_F C_F^T A C_F
};

// Throws CUT_SET when removing F disconnects the network and SINGULAR_OUTAGE
// when the outage operator is numerically singular.
Glodf glodf(const Network& net, const LaplacianSystem& sys, std::span<const Index> tripped);

// A_ii + A_jj - 2 A_ij. If i or j is the slack the reduced inverse is rebuilt
// around another slack bus; the value does not depend on that choice.
double effective_reactance(const Network& net, const LaplacianSystem& sys, Index i, Index j);

// Weighted share of spanning trees through the line, computed as R_ij / X_l.
double spanning_tree_centrality(const Network& net, const LaplacianSystem& sys, Index line);

struct Perturbation {
  std::uint64_t seed = 0;
  double relative_magnitude = 0.01;  // in [0, 0.5)
};

// Same topology with every susceptance scaled by (1 + u), u ~ U[-mag, +mag]
// drawn independently per line. Deterministic in the seed.
Network perturb(const Network& net, const Perturbation& perturbation);

}  // namespace gridlodf
