#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gridlodf {

using Index = Eigen::Index;

struct Bus {
  int id = 0;               // external label, >= 1 by convention
  double injection = 0.0;   // per-unit, generation minus load
  bool is_slack = false;
};

// Directed tail -> head; a positive flow runs from tail to head.
struct Line {
  Index id = 0;             // position in Network::lines()
  int tail = 0;             // bus id
  int head = 0;             // bus id
  double susceptance = 1.0;
  double reactance = 1.0;

  static Line from_reactance(int tail, int head, double reactance);
  static Line from_susceptance(int tail, int head, double susceptance);
};

// Immutable bus/line multigraph with a single slack bus. Construction validates
// the invariants and throws gridlodf::Error on the first violation:
// at least two buses, unique ids, exactly one slack, no self loops, positive and
// mutually reciprocal reactance/susceptance, connected. Line ids are reassigned
// to their position. Injection balance is not checked here.
class Network {
 public:
  Network(std::vector<Bus> buses, std::vector<Line> lines);

  const std::vector<Bus>& buses() const noexcept { return buses_; }
  const std::vector<Line>& lines() const noexcept { return lines_; }
  Index bus_count() const noexcept { return static_cast<Index>(buses_.size()); }
  Index line_count() const noexcept { return static_cast<Index>(lines_.size()); }

  Index slack() const noexcept { return slack_; }
  Index bus_index(int id) const;  // throws UNKNOWN_BUS
  std::optional<Index> find_bus(int id) const;
  int bus_id(Index bus) const { return buses_[static_cast<std::size_t>(bus)].id; }

  Index tail(Index line) const { return endpoints_[static_cast<std::size_t>(line)].first; }
  Index head(Index line) const { return endpoints_[static_cast<std::size_t>(line)].second; }
  const std::vector<Index>& incident_lines(Index bus) const {
    return incident_[static_cast<std::size_t>(bus)];
  }

  Eigen::VectorXd injections() const;
  Eigen::VectorXd susceptances() const;
  double injection_imbalance() const;  // sum of injections

  // "tail-head#k", where k counts earlier lines joining the same unordered pair.
  std::string line_label(Index line) const;

  // True when the graph stays connected after dropping `removed` lines.
  bool connected_without(std::span<const Index> removed) const;

  Network with_susceptances(const Eigen::VectorXd& susceptances) const;
  Network with_injections(const Eigen::VectorXd& injections) const;
  Network with_slack(Index bus) const;

 private:
  std::vector<Bus> buses_;
  std::vector<Line> lines_;
  std::vector<std::pair<Index, Index>> endpoints_;
  std::vector<std::vector<Index>> incident_;
  Index slack_ = 0;
};

// Connected components of the bus graph with some lines removed. Returns a
// component label per bus index (labels numbered in order of first bus).
std::vector<Index> component_labels(const Network& net, std::span<const Index> removed);

// A network carved out of a parent, with maps back to parent indices.
struct Subnetwork {
  Network network;
  std::vector<Index> parent_bus;   // sub bus index -> parent bus index
  std::vector<Index> parent_line;  // sub line id -> parent line id
};

// Buses and lines must form a connected graph; `slack` is a parent bus index
// contained in `buses`. Bus and line order follows the given vectors.
Subnetwork induced_subnetwork(const Network& parent, const std::vector<Index>& buses,
                              const std::vector<Index>& lines, Index slack);

// Network with the given lines removed (must stay connected); surviving lines
// keep their relative order.
Subnetwork remove_lines(const Network& net, std::span<const Index> removed);

// Column l holds +1 at the tail row and -1 at the head row.
Eigen::MatrixXd incidence_matrix(const Network& net);
Eigen::DiagonalMatrix<double, Eigen::Dynamic> susceptance_matrix(const Network& net);

// Repeatedly strips buses joined to the rest of the network by a single line
// and moves their injection onto the neighbour, which equals the pre-outage
// flow over that dangling line. Stops at two buses.
struct CollapsedNetwork {
  Subnetwork kept;
  std::vector<Index> removed_lines;  // parent line ids
  std::vector<int> removed_buses;    // bus ids
};
CollapsedNetwork collapse_dangling(const Network& net);

// Overwrites the slack injection so that the injections sum to zero.
Network balance_at_slack(const Network& net);

}  // namespace gridlodf
