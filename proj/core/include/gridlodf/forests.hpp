#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gridlodf/laplacian.hpp"
#include "gridlodf/network.hpp"

namespace gridlodf {

inline constexpr Index kForestMaxBuses = 10;
inline constexpr Index kForestMaxLines = 16;

enum class ForestKind { kSpanningTree, kTwoForest };

// Edge sets of a tree or 2-forest family together with the summed weight
// chi(E) = product of susceptances over E.
struct ForestFamily {
  ForestKind kind = ForestKind::kSpanningTree;
  std::vector<std::vector<Index>> edge_sets;  // ascending line ids
  double weight_sum = 0.0;
  std::vector<Index> first;   // N1 (bus indices), two-forest families only
  std::vector<Index> second;  // N2
};

// Exhaustive enumeration of spanning trees and spanning 2-forests of a small
// network, cached so that repeated family queries are cheap. Throws OVER_LIMIT
// beyond 10 buses or 16 lines.
class ForestEnumerator {
 public:
  explicit ForestEnumerator(const Network& net);

  const ForestFamily& spanning_trees() const noexcept { return trees_; }

  // Spanning 2-forests with all of `first` in one tree and all of `second` in
  // the other. Throws INVALID_PARTITION when a set is empty or the sets overlap.
  ForestFamily two_forests(const std::vector<Index>& first, const std::vector<Index>& second) const;

  // Weight of the same family; an overlapping pair yields 0 instead of throwing.
  double two_forest_weight(const std::vector<Index>& first, const std::vector<Index>& second) const;

  double tree_weight() const noexcept { return trees_.weight_sum; }
  double trees_through(Index line) const;

  // Sum over spanning trees containing e_i and not e_j of sign(T) chi(T), where
  // with e_i = (u, v) and e_j = (w, z) the sign is +1 when T - e_i puts w with u
  // and z with v, -1 for the mirrored split, and 0 when w and z fall on the same
  // side. Throws SAME_EDGE for e_i == e_j.
  double signed_expansion(Index e_i, Index e_j) const;

 private:
  struct TwoForest {
    std::uint32_t line_mask;
    std::uint32_t bus_mask;  // buses in the tree that does not hold bus 0
    double weight;
  };

  std::uint32_t bus_set_mask(const std::vector<Index>& buses) const;

  Network net_;
  ForestFamily trees_;
  std::vector<std::uint32_t> tree_masks_;
  std::vector<double> tree_weights_;
  std::vector<TwoForest> forests_;
};

ForestFamily spanning_trees(const Network& net);
ForestFamily two_forests(const Network& net, const std::vector<Index>& first,
                         const std::vector<Index>& second);

// (sum over 2-forests separating {i, j} from the slack / sum over trees, A_ij).
// Throws SLACK_EXCLUDED if i or j is the slack.
std::pair<double, double> verify_A_entry(const Network& net, const LaplacianSystem& sys, Index i,
                                         Index j);
std::pair<double, double> verify_A_entry(const ForestEnumerator& forests,
                                         const LaplacianSystem& sys, Index i, Index j);

// ((T({i,w},{j,z}) - T({i,z},{j,w})) / T, A_iw + A_jz - A_iz - A_jw).
// Throws SLACK_EXCLUDED if any of the four buses is the slack.
std::pair<double, double> verify_cross_product(const Network& net, const LaplacianSystem& sys,
                                               Index i, Index j, Index w, Index z);
std::pair<double, double> verify_cross_product(const ForestEnumerator& forests,
                                               const LaplacianSystem& sys, Index i, Index j,
                                               Index w, Index z);

double signed_expansion(const Network& net, Index e_i, Index e_j);

}  // namespace gridlodf
