#include "gridlodf/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "gridlodf/error.hpp"

namespace gridlodf {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

class DisjointSets {
 public:
  explicit DisjointSets(Index n) : parent_(at(n)) { std::iota(parent_.begin(), parent_.end(), 0); }
  Index find(Index x) {
    while (parent_[at(x)] != x) {
      parent_[at(x)] = parent_[at(parent_[at(x)])];
      x = parent_[at(x)];
    }
    return x;
  }
  bool unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[at(b)] = a;
    return true;
  }

 private:
  std::vector<Index> parent_;
};

}  // namespace

Line Line::from_reactance(int tail, int head, double reactance) {
  return Line{0, tail, head, 1.0 / reactance, reactance};
}

Line Line::from_susceptance(int tail, int head, double susceptance) {
  return Line{0, tail, head, susceptance, 1.0 / susceptance};
}

Network::Network(std::vector<Bus> buses, std::vector<Line> lines)
    : buses_(std::move(buses)), lines_(std::move(lines)) {
  if (buses_.size() < 2) {
    throw Error(ErrorCode::kTooFewBuses, "a network needs at least two buses");
  }
  std::unordered_map<int, Index> index_of;
  std::optional<Index> slack;
  for (std::size_t k = 0; k < buses_.size(); ++k) {
    const Bus& bus = buses_[k];
    if (!index_of.emplace(bus.id, static_cast<Index>(k)).second) {
      throw Error(ErrorCode::kDuplicateBus, "bus id " + std::to_string(bus.id) + " appears twice");
    }
    if (bus.is_slack) {
      if (slack) {
        throw Error(ErrorCode::kMultipleSlack,
                    "buses " + std::to_string(buses_[at(*slack)].id) + " and " +
                        std::to_string(bus.id) + " are both marked slack");
      }
      slack = static_cast<Index>(k);
    }
  }
  if (!slack) throw Error(ErrorCode::kNoSlack, "no slack bus designated");
  slack_ = *slack;

  endpoints_.reserve(lines_.size());
  incident_.assign(buses_.size(), {});
  for (std::size_t k = 0; k < lines_.size(); ++k) {
    Line& line = lines_[k];
    line.id = static_cast<Index>(k);
    auto tail = index_of.find(line.tail);
    auto head = index_of.find(line.head);
    if (tail == index_of.end() || head == index_of.end()) {
      throw Error(ErrorCode::kUnknownBus, "line " + std::to_string(k) + " references bus " +
                                              std::to_string(tail == index_of.end() ? line.tail
                                                                                    : line.head) +
                                              " which does not exist");
    }
    if (line.tail == line.head) {
      throw Error(ErrorCode::kSelfLoop,
                  "line " + std::to_string(k) + " joins bus " + std::to_string(line.tail) +
                      " to itself");
    }
    if (!(line.reactance > 0.0) || !std::isfinite(line.reactance)) {
      throw Error(ErrorCode::kNonpositiveReactance,
                  "line " + std::to_string(k) + " has reactance " + std::to_string(line.reactance));
    }
    if (!(line.susceptance > 0.0) || !std::isfinite(line.susceptance) ||
        std::abs(line.susceptance * line.reactance - 1.0) > 1e-12) {
      throw Error(ErrorCode::kInconsistentSusceptance,
                  "line " + std::to_string(k) + " has susceptance " +
                      std::to_string(line.susceptance) + " not reciprocal to its reactance");
    }
    endpoints_.emplace_back(tail->second, head->second);
    incident_[at(tail->second)].push_back(line.id);
    incident_[at(head->second)].push_back(line.id);
  }
  if (!connected_without({})) {
    throw Error(ErrorCode::kDisconnected, "the bus graph is not connected");
  }
}

Index Network::bus_index(int id) const {
  if (auto found = find_bus(id)) return *found;
  throw Error(ErrorCode::kUnknownBus, "no bus with id " + std::to_string(id));
}

std::optional<Index> Network::find_bus(int id) const {
  for (std::size_t k = 0; k < buses_.size(); ++k) {
    if (buses_[k].id == id) return static_cast<Index>(k);
  }
  return std::nullopt;
}

Eigen::VectorXd Network::injections() const {
  Eigen::VectorXd p(bus_count());
  for (Index k = 0; k < bus_count(); ++k) p[k] = buses_[at(k)].injection;
  return p;
}

Eigen::VectorXd Network::susceptances() const {
  Eigen::VectorXd b(line_count());
  for (Index l = 0; l < line_count(); ++l) b[l] = lines_[at(l)].susceptance;
  return b;
}

double Network::injection_imbalance() const { return injections().sum(); }

std::string Network::line_label(Index line) const {
  const Line& target = lines_[at(line)];
  int twins = 0;
  for (Index l = 0; l < line; ++l) {
    const Line& other = lines_[at(l)];
    if ((other.tail == target.tail && other.head == target.head) ||
        (other.tail == target.head && other.head == target.tail)) {
      ++twins;
    }
  }
  return std::to_string(target.tail) + "-" + std::to_string(target.head) + "#" +
         std::to_string(twins);
}

bool Network::connected_without(std::span<const Index> removed) const {
  auto labels = component_labels(*this, removed);
  return std::all_of(labels.begin(), labels.end(), [](Index c) { return c == 0; });
}

Network Network::with_susceptances(const Eigen::VectorXd& susceptances) const {
  std::vector<Line> lines = lines_;
  for (std::size_t k = 0; k < lines.size(); ++k) {
    lines[k].susceptance = susceptances[static_cast<Index>(k)];
    lines[k].reactance = 1.0 / lines[k].susceptance;
  }
  return Network(buses_, std::move(lines));
}

Network Network::with_injections(const Eigen::VectorXd& injections) const {
  std::vector<Bus> buses = buses_;
  for (std::size_t k = 0; k < buses.size(); ++k) buses[k].injection = injections[static_cast<Index>(k)];
  return Network(std::move(buses), lines_);
}

Network Network::with_slack(Index bus) const {
  std::vector<Bus> buses = buses_;
  for (std::size_t k = 0; k < buses.size(); ++k) buses[k].is_slack = static_cast<Index>(k) == bus;
  return Network(std::move(buses), lines_);
}

std::vector<Index> component_labels(const Network& net, std::span<const Index> removed) {
  std::vector<bool> skip(at(net.line_count()), false);
  for (Index l : removed) skip[at(l)] = true;
  DisjointSets sets(net.bus_count());
  for (Index l = 0; l < net.line_count(); ++l) {
    if (!skip[at(l)]) sets.unite(net.tail(l), net.head(l));
  }
  std::vector<Index> labels(at(net.bus_count()), -1);
  std::map<Index, Index> root_label;
  for (Index k = 0; k < net.bus_count(); ++k) {
    auto [it, inserted] = root_label.emplace(sets.find(k), static_cast<Index>(root_label.size()));
    labels[at(k)] = it->second;
  }
  return labels;
}

Subnetwork induced_subnetwork(const Network& parent, const std::vector<Index>& buses,
                              const std::vector<Index>& lines, Index slack) {
  std::vector<Bus> sub_buses;
  sub_buses.reserve(buses.size());
  bool slack_inside = false;
  for (Index k : buses) {
    Bus bus = parent.buses()[at(k)];
    bus.is_slack = k == slack;
    slack_inside = slack_inside || bus.is_slack;
    sub_buses.push_back(bus);
  }
  if (!slack_inside) {
    throw Error(ErrorCode::kInvalidArgument, "subnetwork slack is not one of its buses");
  }
  std::vector<Line> sub_lines;
  sub_lines.reserve(lines.size());
  for (Index l : lines) sub_lines.push_back(parent.lines()[at(l)]);
  return Subnetwork{Network(std::move(sub_buses), std::move(sub_lines)), buses, lines};
}

Subnetwork remove_lines(const Network& net, std::span<const Index> removed) {
  std::vector<bool> skip(at(net.line_count()), false);
  for (Index l : removed) skip[at(l)] = true;
  std::vector<Index> buses(at(net.bus_count()));
  std::iota(buses.begin(), buses.end(), 0);
  std::vector<Index> kept;
  for (Index l = 0; l < net.line_count(); ++l) {
    if (!skip[at(l)]) kept.push_back(l);
  }
  return induced_subnetwork(net, buses, kept, net.slack());
}

Eigen::MatrixXd incidence_matrix(const Network& net) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(net.bus_count(), net.line_count());
  for (Index l = 0; l < net.line_count(); ++l) {
    c(net.tail(l), l) = 1.0;
    c(net.head(l), l) = -1.0;
  }
  return c;
}

Eigen::DiagonalMatrix<double, Eigen::Dynamic> susceptance_matrix(const Network& net) {
  return Eigen::DiagonalMatrix<double, Eigen::Dynamic>(net.susceptances());
}

CollapsedNetwork collapse_dangling(const Network& net) {
  const Index n = net.bus_count();
  std::vector<bool> bus_alive(at(n), true);
  std::vector<bool> line_alive(at(net.line_count()), true);
  std::vector<Index> degree(at(n), 0);
  for (Index k = 0; k < n; ++k) degree[at(k)] = static_cast<Index>(net.incident_lines(k).size());
  Eigen::VectorXd injection = net.injections();
  Index slack = net.slack();
  Index alive = n;

  CollapsedNetwork result{Subnetwork{net, {}, {}}, {}, {}};
  bool changed = true;
  while (changed && alive > 2) {
    changed = false;
    for (Index k = 0; k < n && alive > 2; ++k) {
      if (!bus_alive[at(k)] || degree[at(k)] != 1) continue;
      Index line = -1;
      for (Index l : net.incident_lines(k)) {
        if (line_alive[at(l)]) line = l;
      }
      Index other = net.tail(line) == k ? net.head(line) : net.tail(line);
      injection[other] += injection[k];
      if (slack == k) slack = other;
      bus_alive[at(k)] = false;
      line_alive[at(line)] = false;
      --degree[at(other)];
      --alive;
      result.removed_lines.push_back(line);
      result.removed_buses.push_back(net.bus_id(k));
      changed = true;
    }
  }

  std::vector<Index> buses;
  std::vector<Index> lines;
  for (Index k = 0; k < n; ++k) {
    if (bus_alive[at(k)]) buses.push_back(k);
  }
  for (Index l = 0; l < net.line_count(); ++l) {
    if (line_alive[at(l)]) lines.push_back(l);
  }
  Network moved = net.with_injections(injection);
  result.kept = induced_subnetwork(moved, buses, lines, slack);
  return result;
}

Network balance_at_slack(const Network& net) {
  Eigen::VectorXd p = net.injections();
  p[net.slack()] -= p.sum();
  return net.with_injections(p);
}

}  // namespace gridlodf
