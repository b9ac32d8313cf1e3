#include "gridlodf/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "gridlodf/error.hpp"
#include "json.hpp"

namespace gridlodf {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

Index other_end(const Network& net, Index line, Index bus) {
  return net.tail(line) == bus ? net.head(line) : net.tail(line);
}

// Unit-capacity flow network over split bus nodes (in = 2v, out = 2v + 1).
class SplitFlowGraph {
 public:
  explicit SplitFlowGraph(Index nodes) : adjacency_(at(nodes)) {}

  void add_arc(Index from, Index to) {
    adjacency_[at(from)].push_back(static_cast<Index>(arcs_.size()));
    arcs_.push_back({to, 1});
    adjacency_[at(to)].push_back(static_cast<Index>(arcs_.size()));
    arcs_.push_back({from, 0});
  }

  // Augments along BFS paths until `limit` units flow or none remain.
  int max_flow(Index source, Index sink, int limit) {
    int flow = 0;
    while (flow < limit) {
      std::vector<Index> via(adjacency_.size(), -1);
      std::vector<bool> seen(adjacency_.size(), false);
      std::deque<Index> queue{source};
      seen[at(source)] = true;
      while (!queue.empty() && !seen[at(sink)]) {
        Index u = queue.front();
        queue.pop_front();
        for (Index a : adjacency_[at(u)]) {
          const Arc& arc = arcs_[at(a)];
          if (arc.capacity > 0 && !seen[at(arc.to)]) {
            seen[at(arc.to)] = true;
            via[at(arc.to)] = a;
            queue.push_back(arc.to);
          }
        }
      }
      if (!seen[at(sink)]) break;
      for (Index v = sink; v != source;) {
        Index a = via[at(v)];
        arcs_[at(a)].capacity -= 1;
        arcs_[at(a ^ 1)].capacity += 1;
        v = arcs_[at(a ^ 1)].to;
      }
      ++flow;
    }
    return flow;
  }

 private:
  struct Arc {
    Index to;
    int capacity;
  };
  std::vector<std::vector<Index>> adjacency_;
  std::vector<Arc> arcs_;
};

// True when, with `line` removed, `from` and some bus of `others` (distinct from
// `from`) reach the two endpoints of `line` along vertex-disjoint paths.
bool path_through_line_to_any(const Network& net, Index line, Index from,
                              std::span<const Index> others) {
  const Index n = net.bus_count();
  const Index source = 2 * n;
  const Index pool = 2 * n + 1;
  const Index sink = 2 * n + 2;
  SplitFlowGraph graph(2 * n + 3);
  for (Index v = 0; v < n; ++v) graph.add_arc(2 * v, 2 * v + 1);
  for (Index l = 0; l < net.line_count(); ++l) {
    if (l == line) continue;
    graph.add_arc(2 * net.tail(l) + 1, 2 * net.head(l));
    graph.add_arc(2 * net.head(l) + 1, 2 * net.tail(l));
  }
  bool any_other = false;
  for (Index k : others) {
    if (k == from) continue;
    graph.add_arc(pool, 2 * k);
    any_other = true;
  }
  if (!any_other) return false;
  graph.add_arc(source, 2 * from);
  graph.add_arc(source, pool);
  graph.add_arc(2 * net.tail(line) + 1, sink);
  graph.add_arc(2 * net.head(line) + 1, sink);
  return graph.max_flow(source, sink, 2) == 2;
}

}  // namespace

std::vector<Index> BlockDecomposition::block_of(Index line) const {
  Index cell = cell_of[at(line)];
  if (cell == kBridge) return {line};
  return cells[at(cell)];
}

std::vector<Index> BlockDecomposition::block_order() const {
  std::vector<Index> order = bridges;
  for (const auto& cell : cells) order.insert(order.end(), cell.begin(), cell.end());
  return order;
}

BlockDecomposition block_decomposition(const Network& net) {
  const Index n = net.bus_count();
  std::vector<Index> disc(at(n), -1);
  std::vector<Index> low(at(n), 0);
  std::vector<bool> cut(at(n), false);
  std::vector<Index> edge_stack;
  std::vector<std::vector<Index>> components;

  struct Frame {
    Index bus;
    Index parent_line;
    std::size_t next = 0;
    int children = 0;
  };
  Index clock = 0;
  for (Index root = 0; root < n; ++root) {
    if (disc[at(root)] != -1) continue;
    std::vector<Frame> stack{{root, -1}};
    disc[at(root)] = low[at(root)] = clock++;
    while (!stack.empty()) {
      Frame& frame = stack.back();
      const Index v = frame.bus;
      const auto& incident = net.incident_lines(v);
      if (frame.next < incident.size()) {
        const Index l = incident[frame.next++];
        if (l == frame.parent_line) continue;
        const Index w = other_end(net, l, v);
        if (disc[at(w)] == -1) {
          ++frame.children;
          edge_stack.push_back(l);
          disc[at(w)] = low[at(w)] = clock++;
          stack.push_back({w, l});
        } else if (disc[at(w)] < disc[at(v)]) {
          edge_stack.push_back(l);
          low[at(v)] = std::min(low[at(v)], disc[at(w)]);
        }
        continue;
      }
      const Frame done = frame;
      stack.pop_back();
      if (stack.empty()) {
        if (done.children > 1) cut[at(done.bus)] = true;
        continue;
      }
      const Index u = stack.back().bus;
      low[at(u)] = std::min(low[at(u)], low[at(done.bus)]);
      if (low[at(done.bus)] >= disc[at(u)]) {
        if (stack.size() > 1) cut[at(u)] = true;
        std::vector<Index> component;
        while (true) {
          Index e = edge_stack.back();
          edge_stack.pop_back();
          component.push_back(e);
          if (e == done.parent_line) break;
        }
        components.push_back(std::move(component));
      }
    }
  }

  BlockDecomposition dec;
  dec.cell_of.assign(at(net.line_count()), BlockDecomposition::kBridge);
  for (auto& component : components) {
    std::sort(component.begin(), component.end());
    if (component.size() == 1) {
      dec.bridges.push_back(component.front());
    } else {
      dec.cells.push_back(std::move(component));
    }
  }
  std::sort(dec.bridges.begin(), dec.bridges.end());
  std::sort(dec.cells.begin(), dec.cells.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.front() < b.front();
  });
  for (std::size_t c = 0; c < dec.cells.size(); ++c) {
    for (Index l : dec.cells[c]) dec.cell_of[at(l)] = static_cast<Index>(c);
  }
  for (Index v = 0; v < n; ++v) {
    if (cut[at(v)]) dec.cut_vertices.push_back(net.bus_id(v));
  }
  std::sort(dec.cut_vertices.begin(), dec.cut_vertices.end());
  return dec;
}

std::string to_json(const BlockDecomposition& dec) {
  nlohmann::json doc;
  doc["cells"] = dec.cells;
  doc["bridges"] = dec.bridges;
  doc["cut_vertices"] = dec.cut_vertices;
  return doc.dump();
}

bool same_cell(const BlockDecomposition& dec, Index line, Index other) {
  const Index a = dec.cell_of[at(line)];
  const Index b = dec.cell_of[at(other)];
  return a != BlockDecomposition::kBridge && a == b;
}

bool simple_path_through_line(const Network& net, Index line, Index src, Index dst) {
  if (src == dst) return false;
  const Index target[] = {dst};
  return path_through_line_to_any(net, line, src, target);
}

ParticipationProfile::ParticipationProfile(Eigen::VectorXd alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() == 0) throw Error(ErrorCode::kBadAlpha, "empty participation vector");
  for (Index k = 0; k < alpha_.size(); ++k) {
    if (!(alpha_[k] >= 0.0) || !std::isfinite(alpha_[k])) {
      throw Error(ErrorCode::kBadAlpha, "participation factors must be finite and non-negative");
    }
  }
  if (std::abs(alpha_.sum() - 1.0) > 1e-12) {
    throw Error(ErrorCode::kBadAlpha, "participation factors sum to " +
                                          std::to_string(alpha_.sum()) + ", expected 1");
  }
}

ParticipationProfile ParticipationProfile::uniform(Index buses) {
  return normalized(Eigen::VectorXd::Ones(buses));
}

ParticipationProfile ParticipationProfile::single(Index buses, Index bus) {
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(buses);
  alpha[bus] = 1.0;
  return ParticipationProfile(std::move(alpha));
}

ParticipationProfile ParticipationProfile::normalized(const Eigen::VectorXd& weights) {
  if (weights.size() == 0 || (weights.array() < 0.0).any() || !weights.allFinite()) {
    throw Error(ErrorCode::kBadAlpha, "participation weights must be finite and non-negative");
  }
  const double total = weights.sum();
  if (!(total > 0.0)) throw Error(ErrorCode::kBadAlpha, "participation weights are all zero");
  Eigen::VectorXd alpha = weights / total;
  // Push the rounding residue onto the largest weight so the sum is exact to 1e-12.
  Index largest = 0;
  alpha.maxCoeff(&largest);
  alpha[largest] += 1.0 - alpha.sum();
  return ParticipationProfile(std::move(alpha));
}

std::vector<Index> ParticipationProfile::participating() const {
  std::vector<Index> out;
  for (Index k = 0; k < alpha_.size(); ++k) {
    if (alpha_[k] > 0.0) out.push_back(k);
  }
  return out;
}

std::vector<Index> participating_blocks(const Network& net, const BlockDecomposition& dec,
                                        const ParticipationProfile& profile) {
  std::set<int> cut(dec.cut_vertices.begin(), dec.cut_vertices.end());
  std::vector<Index> out;
  for (std::size_t c = 0; c < dec.cells.size(); ++c) {
    bool participating = false;
    for (Index l : dec.cells[c]) {
      for (Index bus : {net.tail(l), net.head(l)}) {
        if (profile.alpha()[bus] > 0.0 && !cut.contains(net.bus_id(bus))) participating = true;
      }
    }
    if (participating) out.push_back(static_cast<Index>(c));
  }
  return out;
}

bool block_on_simple_path(const Network& net, std::span<const Index> block, Index from,
                          const ParticipationProfile& profile) {
  const std::vector<Index> participants = profile.participating();
  for (Index l : block) {
    if (path_through_line_to_any(net, l, from, participants)) return true;
  }
  return false;
}

bool block_on_simple_path(const Network& net, const BlockDecomposition& dec, Index cell,
                          Index from, const ParticipationProfile& profile) {
  return block_on_simple_path(net, dec.cells[at(cell)], from, profile);
}

}  // namespace gridlodf
