#include "gridlodf/generators.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "gridlodf/error.hpp"

namespace gridlodf {
namespace {

Index uniform_index(std::mt19937_64& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

class Builder {
 public:
  Builder(double bmin, double bmax, std::mt19937_64& rng) : bmin_(bmin), bmax_(bmax), rng_(rng) {}

  int add_bus() { return ++buses_; }
  int bus_count() const { return buses_; }

  bool has(int a, int b) const { return pairs_.count({std::min(a, b), std::max(a, b)}) > 0; }

  void connect(int a, int b) {
    pairs_.insert({std::min(a, b), std::max(a, b)});
    const double susceptance = std::uniform_real_distribution<double>(bmin_, bmax_)(rng_);
    if (std::bernoulli_distribution(0.5)(rng_)) std::swap(a, b);
    lines_.push_back(Line::from_susceptance(a, b, susceptance));
  }

  Network finish(bool random_slack) {
    const Eigen::VectorXd p = random_balanced_injections(buses_, rng_);
    const Index slack = random_slack ? uniform_index(rng_, 0, buses_ - 1) : buses_ - 1;
    std::vector<Bus> buses;
    for (int k = 0; k < buses_; ++k) buses.push_back({k + 1, p[k], k == slack});
    return Network(std::move(buses), std::move(lines_));
  }

 private:
  double bmin_;
  double bmax_;
  std::mt19937_64& rng_;
  int buses_ = 0;
  std::set<std::pair<int, int>> pairs_;
  std::vector<Line> lines_;
};

}  // namespace

Network random_connected_network(const RandomNetworkOptions& options, std::mt19937_64& rng) {
  const Index n = options.buses;
  const Index m = options.lines;
  if (n < 2 || m < n - 1 || m > n * (n - 1) / 2) {
    throw Error(ErrorCode::kInvalidArgument, "cannot build a connected simple graph with " +
                                                 std::to_string(n) + " buses and " +
                                                 std::to_string(m) + " lines");
  }
  Builder b(options.min_susceptance, options.max_susceptance, rng);
  std::vector<int> order;
  for (Index k = 0; k < n; ++k) order.push_back(b.add_bus());
  std::shuffle(order.begin(), order.end(), rng);
  for (Index k = 1; k < n; ++k) b.connect(order[k], order[uniform_index(rng, 0, k - 1)]);
  std::vector<std::pair<int, int>> free_pairs;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) {
      if (!b.has(u, v)) free_pairs.emplace_back(u, v);
    }
  }
  std::shuffle(free_pairs.begin(), free_pairs.end(), rng);
  for (Index k = 0; k < m - (n - 1); ++k) b.connect(free_pairs[k].first, free_pairs[k].second);
  return b.finish(options.random_slack);
}

Network random_multicell_network(const MulticellOptions& options, std::mt19937_64& rng) {
  Builder b(options.min_susceptance, options.max_susceptance, rng);
  const Index cells = uniform_index(rng, options.min_cells, options.max_cells);
  std::bernoulli_distribution use_bridge(options.bridge_probability);
  std::bernoulli_distribution add_pendant(options.pendant_probability);
  for (Index c = 0; c < cells; ++c) {
    const Index size = uniform_index(rng, options.min_cycle, options.max_cycle);
    std::vector<int> cycle;
    if (c == 0) {
      cycle.push_back(b.add_bus());
    } else {
      const int anchor = static_cast<int>(uniform_index(rng, 1, b.bus_count()));
      if (use_bridge(rng)) {
        const int start = b.add_bus();
        b.connect(anchor, start);
        cycle.push_back(start);
      } else {
        cycle.push_back(anchor);
      }
    }
    while (static_cast<Index>(cycle.size()) < size) cycle.push_back(b.add_bus());
    for (std::size_t k = 0; k < cycle.size(); ++k) b.connect(cycle[k], cycle[(k + 1) % cycle.size()]);
    const Index chords = uniform_index(rng, 0, options.max_chords);
    for (Index k = 0; k < chords; ++k) {
      const int u = cycle[static_cast<std::size_t>(uniform_index(rng, 0, size - 1))];
      const int v = cycle[static_cast<std::size_t>(uniform_index(rng, 0, size - 1))];
      if (u != v && !b.has(u, v)) b.connect(u, v);
    }
  }
  if (add_pendant(rng)) {
    const int anchor = static_cast<int>(uniform_index(rng, 1, b.bus_count()));
    b.connect(anchor, b.add_bus());
  }
  return b.finish(true);
}

Eigen::VectorXd random_balanced_injections(Index buses, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd p(buses);
  for (Index k = 0; k < buses; ++k) p[k] = u(rng);
  p.array() -= p.mean();
  return p;
}

}  // namespace gridlodf
