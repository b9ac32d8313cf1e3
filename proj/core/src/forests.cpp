#include "gridlodf/forests.hpp"

#include <bit>
#include <numeric>
#include <string>

#include "gridlodf/error.hpp"

namespace gridlodf {
namespace {

class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      auto& p = parent_[static_cast<std::size_t>(x)];
      p = parent_[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[static_cast<std::size_t>(a)] = b;
    return true;
  }

 private:
  std::vector<Index> parent_;
};

// Calls fn(mask) for every m-bit mask with exactly k bits set, in increasing order.
template <typename Fn>
void for_each_subset(int m, int k, Fn&& fn) {
  if (k < 0 || k > m) return;
  if (k == 0) {
    fn(std::uint32_t{0});
    return;
  }
  std::uint32_t mask = (std::uint32_t{1} << k) - 1;
  const std::uint32_t limit = std::uint32_t{1} << m;
  while (mask < limit) {
    fn(mask);
    const std::uint32_t low = mask & (~mask + 1);
    const std::uint32_t ripple = mask + low;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
}

std::vector<Index> mask_to_lines(std::uint32_t mask) {
  std::vector<Index> out;
  while (mask != 0) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

void require_not_slack(const LaplacianSystem& sys, std::initializer_list<Index> buses) {
  for (Index b : buses) {
    if (b == sys.slack()) {
      throw Error(ErrorCode::kSlackExcluded,
                  "bus index " + std::to_string(b) + " is the slack bus");
    }
  }
}

}  // namespace

ForestEnumerator::ForestEnumerator(const Network& net) : net_(net) {
  const Index n = net.bus_count();
  const Index m = net.line_count();
  if (n > kForestMaxBuses || m > kForestMaxLines) {
    throw Error(ErrorCode::kOverLimit, "enumeration is limited to " +
                                           std::to_string(kForestMaxBuses) + " buses and " +
                                           std::to_string(kForestMaxLines) + " lines");
  }
  const Eigen::VectorXd b = net.susceptances();
  auto weight_of = [&](std::uint32_t mask) {
    double w = 1.0;
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) w *= b[std::countr_zero(rest)];
    return w;
  };
  auto acyclic = [&](std::uint32_t mask, UnionFind& uf) {
    for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1) {
      const Index l = std::countr_zero(rest);
      if (!uf.unite(net.tail(l), net.head(l))) return false;
    }
    return true;
  };

  trees_.kind = ForestKind::kSpanningTree;
  for_each_subset(static_cast<int>(m), static_cast<int>(n - 1), [&](std::uint32_t mask) {
    UnionFind uf(n);
    if (!acyclic(mask, uf)) return;
    const double w = weight_of(mask);
    tree_masks_.push_back(mask);
    tree_weights_.push_back(w);
    trees_.edge_sets.push_back(mask_to_lines(mask));
    trees_.weight_sum += w;
  });

  for_each_subset(static_cast<int>(m), static_cast<int>(n - 2), [&](std::uint32_t mask) {
    UnionFind uf(n);
    if (!acyclic(mask, uf)) return;
    const Index root = uf.find(0);
    std::uint32_t other = 0;
    for (Index v = 0; v < n; ++v) {
      if (uf.find(v) != root) other |= std::uint32_t{1} << v;
    }
    forests_.push_back({mask, other, weight_of(mask)});
  });
}

std::uint32_t ForestEnumerator::bus_set_mask(const std::vector<Index>& buses) const {
  std::uint32_t mask = 0;
  for (Index v : buses) {
    if (v < 0 || v >= net_.bus_count()) {
      throw Error(ErrorCode::kInvalidArgument, "bus index " + std::to_string(v) + " out of range");
    }
    mask |= std::uint32_t{1} << v;
  }
  return mask;
}

ForestFamily ForestEnumerator::two_forests(const std::vector<Index>& first,
                                           const std::vector<Index>& second) const {
  const std::uint32_t a = bus_set_mask(first);
  const std::uint32_t b = bus_set_mask(second);
  if (a == 0 || b == 0 || (a & b) != 0) {
    throw Error(ErrorCode::kInvalidPartition, "bus sets must be nonempty and disjoint");
  }
  const std::uint32_t all = (std::uint32_t{1} << net_.bus_count()) - 1;
  ForestFamily out;
  out.kind = ForestKind::kTwoForest;
  out.first = first;
  out.second = second;
  for (const auto& f : forests_) {
    const std::uint32_t x = f.bus_mask;
    const std::uint32_t y = all & ~x;
    if (((a & ~x) == 0 && (b & ~y) == 0) || ((a & ~y) == 0 && (b & ~x) == 0)) {
      out.edge_sets.push_back(mask_to_lines(f.line_mask));
      out.weight_sum += f.weight;
    }
  }
  return out;
}

double ForestEnumerator::two_forest_weight(const std::vector<Index>& first,
                                           const std::vector<Index>& second) const {
  const std::uint32_t a = bus_set_mask(first);
  const std::uint32_t b = bus_set_mask(second);
  if ((a & b) != 0) return 0.0;
  if (a == 0 || b == 0) {
    throw Error(ErrorCode::kInvalidPartition, "bus sets must be nonempty");
  }
  const std::uint32_t all = (std::uint32_t{1} << net_.bus_count()) - 1;
  double sum = 0.0;
  for (const auto& f : forests_) {
    const std::uint32_t x = f.bus_mask;
    const std::uint32_t y = all & ~x;
    if (((a & ~x) == 0 && (b & ~y) == 0) || ((a & ~y) == 0 && (b & ~x) == 0)) sum += f.weight;
  }
  return sum;
}

double ForestEnumerator::trees_through(Index line) const {
  const std::uint32_t bit = std::uint32_t{1} << line;
  double sum = 0.0;
  for (std::size_t t = 0; t < tree_masks_.size(); ++t) {
    if (tree_masks_[t] & bit) sum += tree_weights_[t];
  }
  return sum;
}

double ForestEnumerator::signed_expansion(Index e_i, Index e_j) const {
  if (e_i == e_j) throw Error(ErrorCode::kSameEdge, "the two lines must differ");
  const Index m = net_.line_count();
  if (e_i < 0 || e_i >= m || e_j < 0 || e_j >= m) {
    throw Error(ErrorCode::kInvalidArgument, "line id out of range");
  }
  const std::uint32_t bit_i = std::uint32_t{1} << e_i;
  const std::uint32_t bit_j = std::uint32_t{1} << e_j;
  const Index u = net_.tail(e_i);
  const Index w = net_.tail(e_j);
  const Index z = net_.head(e_j);
  double sum = 0.0;
  for (std::size_t t = 0; t < tree_masks_.size(); ++t) {
    const std::uint32_t mask = tree_masks_[t];
    if (!(mask & bit_i) || (mask & bit_j)) continue;
    UnionFind uf(net_.bus_count());
    for (std::uint32_t rest = mask & ~bit_i; rest != 0; rest &= rest - 1) {
      const Index l = std::countr_zero(rest);
      uf.unite(net_.tail(l), net_.head(l));
    }
    const bool w_with_u = uf.find(w) == uf.find(u);
    const bool z_with_u = uf.find(z) == uf.find(u);
    if (w_with_u == z_with_u) continue;
    sum += w_with_u ? tree_weights_[t] : -tree_weights_[t];
  }
  return sum;
}

ForestFamily spanning_trees(const Network& net) { return ForestEnumerator(net).spanning_trees(); }

ForestFamily two_forests(const Network& net, const std::vector<Index>& first,
                         const std::vector<Index>& second) {
  return ForestEnumerator(net).two_forests(first, second);
}

std::pair<double, double> verify_A_entry(const ForestEnumerator& forests,
                                         const LaplacianSystem& sys, Index i, Index j) {
  require_not_slack(sys, {i, j});
  const double combinatorial =
      forests.two_forest_weight({i, j}, {sys.slack()}) / forests.tree_weight();
  return {combinatorial, sys.reduced_inverse()(i, j)};
}

std::pair<double, double> verify_A_entry(const Network& net, const LaplacianSystem& sys, Index i,
                                         Index j) {
  require_not_slack(sys, {i, j});
  return verify_A_entry(ForestEnumerator(net), sys, i, j);
}

std::pair<double, double> verify_cross_product(const ForestEnumerator& forests,
                                               const LaplacianSystem& sys, Index i, Index j,
                                               Index w, Index z) {
  require_not_slack(sys, {i, j, w, z});
  const double plus = forests.two_forest_weight({i, w}, {j, z});
  const double minus = forests.two_forest_weight({i, z}, {j, w});
  const auto& a = sys.reduced_inverse();
  return {(plus - minus) / forests.tree_weight(), a(i, w) + a(j, z) - a(i, z) - a(j, w)};
}

std::pair<double, double> verify_cross_product(const Network& net, const LaplacianSystem& sys,
                                               Index i, Index j, Index w, Index z) {
  require_not_slack(sys, {i, j, w, z});
  return verify_cross_product(ForestEnumerator(net), sys, i, j, w, z);
}

double signed_expansion(const Network& net, Index e_i, Index e_j) {
  if (e_i == e_j) throw Error(ErrorCode::kSameEdge, "the two lines must differ");
  return ForestEnumerator(net).signed_expansion(e_i, e_j);
}

}  // namespace gridlodf
