#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "gridlodf/network.hpp"

namespace gridlodf {

// Edge partition into 2-connected cells and bridges. Parallel lines between the
// same pair of buses form a cycle and therefore share a cell.
struct BlockDecomposition {
  static constexpr Index kBridge = -1;

  std::vector<std::vector<Index>> cells;  // line ids; ordered by size, then smallest id
  std::vector<Index> bridges;             // line ids, ascending
  std::vector<int> cut_vertices;          // bus ids, ascending
  std::vector<Index> cell_of;             // line id -> cell index or kBridge

  bool is_bridge(Index line) const { return cell_of[static_cast<std::size_t>(line)] == kBridge; }

  // Lines sharing a block with `line`: its cell, or just itself for a bridge.
  std::vector<Index> block_of(Index line) const;

  // Bridges first (ascending id), then cells in stored order.
  std::vector<Index> block_order() const;
};

BlockDecomposition block_decomposition(const Network& net);

// {"cells":[[...]], "bridges":[...], "cut_vertices":[...]}
std::string to_json(const BlockDecomposition& dec);

bool same_cell(const BlockDecomposition& dec, Index line, Index other);

// Whether some simple src-dst path traverses `line`. Answered with a unit
// vertex-capacity max-flow: such a path exists iff, without the line, the two
// endpoints {src, dst} can be joined to the line's endpoints by vertex-disjoint paths.
bool simple_path_through_line(const Network& net, Index line, Index src, Index dst);

// Proportional balancing weights over buses: non-negative, summing to one.
class ParticipationProfile {
 public:
  // Throws BAD_ALPHA unless every entry is >= 0 and the sum is 1 within 1e-12.
  explicit ParticipationProfile(Eigen::VectorXd alpha);

  static ParticipationProfile uniform(Index buses);
  static ParticipationProfile single(Index buses, Index bus);
  // Rescales non-negative weights to sum one; throws BAD_ALPHA on a zero total.
  static ParticipationProfile normalized(const Eigen::VectorXd& weights);

  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  std::vector<Index> participating() const;  // bus indices with alpha > 0

 private:
  Eigen::VectorXd alpha_;
};

// Cells holding a participating bus that is not a cut vertex.
std::vector<Index> participating_blocks(const Network& net, const BlockDecomposition& dec,
                                        const ParticipationProfile& profile);

// Whether some line of `block` lies on a simple path from `from` to a participating bus.
bool block_on_simple_path(const Network& net, std::span<const Index> block, Index from,
                          const ParticipationProfile& profile);
bool block_on_simple_path(const Network& net, const BlockDecomposition& dec, Index cell,
                          Index from, const ParticipationProfile& profile);

}  // namespace gridlodf
