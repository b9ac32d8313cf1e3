#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gridlodf/error.hpp"
#include "gridlodf/network.hpp"

namespace gridlodf {

struct ColumnDiagnostic {
  Index line = 0;
  ErrorCode code = ErrorCode::kSingularOutage;
  std::string message;
};

// Distribution factors of a whole network. lodf(l, c) is the flow change on l
// per unit of pre-outage flow on c (both in tail -> head orientation) when c
// alone trips; the diagonal is -1. Bridge columns come from the two islands
// the bridge leaves behind, each rebalanced by its participation profile.
struct FactorSet {
  Eigen::MatrixXd ptdf;               // m x n, injection at a bus withdrawn at the slack
  Eigen::MatrixXd lodf;               // m x m, line id order
  std::vector<bool> bridge_column;
  std::vector<Index> order;           // bridges first, then cells by size
  std::vector<ColumnDiagnostic> diagnostics;
  std::string orientation = "tail->head";

  Eigen::MatrixXd block_sorted() const;
};

// `weights` are participation weights over buses (uniform when absent),
// normalized within each island of a bridge outage. Failing columns are left
// zero and recorded in `diagnostics`.
FactorSet full_lodf_matrix(const Network& net,
                           const std::optional<Eigen::VectorXd>& weights = std::nullopt);

struct InfluenceEdge {
  Index a = 0;  // a < b, line ids
  Index b = 0;
  double weight = 0.0;  // max(|K_ab|, |K_ba|)
};

inline constexpr double kDefaultInfluenceThreshold = 0.005;

// Undirected edges between distinct lines whose factor magnitude in either
// direction reaches the threshold.
std::vector<InfluenceEdge> influence_graph(const Eigen::MatrixXd& lodf,
                                           double threshold = kDefaultInfluenceThreshold);

// Block-sorted |K| with a header row and a label column, "%.17e" entries.
std::string lodf_csv(const Network& net, const FactorSet& factors);

// Undirected DOT graph over lines named "i-j#k" and labelled "i-j".
std::string influence_dot(const Network& net, const std::vector<InfluenceEdge>& edges);

// Plain comma separated matrix, one row per line, "%.17e" entries.
std::string matrix_csv(const Eigen::MatrixXd& matrix);

}  // namespace gridlodf
