#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "gridlodf/network.hpp"
#include "gridlodf/topology.hpp"

namespace gridlodf {

struct CutSetOutage {
  std::vector<Index> tripped;  // parent line ids
};

struct TieLine {
  Index parent_line = 0;
  Index inside_bus = 0;  // island bus index of the endpoint inside the island
  double flow = 0.0;     // pre-outage flow, positive when the island imports
};

// One connected component of the parent network after the outage, described
// by its pre-outage graph (N, E) which still contains the tripped internal
// lines F.
struct IslandModel {
  std::vector<Index> parent_buses;      // island bus index -> parent bus index
  std::vector<Index> parent_lines;      // island line id -> parent line id
  std::optional<Network> network;       // absent for an isolated single bus
  std::vector<Index> internal_tripped;  // island line ids forming F
  std::vector<Index> external_tripped;  // parent line ids with no endpoint inside
  std::vector<TieLine> ties;
  Eigen::VectorXd pre_flows;            // over island lines
  ParticipationProfile alpha;
  std::vector<std::string> warnings;

  Index bus_count() const { return static_cast<Index>(parent_buses.size()); }
  // Throws INVALID_ISLAND for a single-bus island.
  const Network& graph() const;
};

// Splits the network along the tripped lines and solves the pre-outage flows
// from the network injections (UNBALANCED_INJECTION if they do not sum to
// zero). `weights` are non-negative participation weights over parent buses,
// normalized within each island; uniform when absent. An island with tie lines
// and zero total weight raises BAD_ALPHA. Tie lines with zero pre-outage flow
// are dropped with a warning. Island slack: the parent slack when inside,
// otherwise the bus with the smallest id.
std::vector<IslandModel> classify_cut(const Network& net, const CutSetOutage& outage,
                                      const std::optional<Eigen::VectorXd>& weights = std::nullopt);

// Same, with pre-outage flows supplied by the caller.
std::vector<IslandModel> classify_cut(const Network& net, const CutSetOutage& outage,
                                      const Eigen::VectorXd& flows,
                                      const std::optional<Eigen::VectorXd>& weights);

// Sum of tie flows placed on their inside endpoints.
Eigen::VectorXd tie_delta(const IslandModel& island);

// Total tie import spread over the island by the participation profile.
Eigen::VectorXd balance_delta(const IslandModel& island);

// sum_k alpha_k D_{l, k -> j} for an island with a single tie at j and F empty,
// i.e. the flow change on island line `line` per unit of tie import.
// Throws USE_CUTSET_OP otherwise.
double bridge_lodf(const IslandModel& island, Index line);
Eigen::VectorXd bridge_lodf_column(const IslandModel& island);

struct FlowChangeReport {
  std::vector<Index> surviving;      // island line ids outside F, ascending
  Eigen::VectorXd delta_f;           // flow change on each surviving line
  Eigen::VectorXd internal_term;     // K^F f_F
  Eigen::VectorXd tie_term;          // tie import spread through the post-outage network
  std::vector<bool> predicted_zero;  // sufficient condition only, never a nonzero claim
  double dual_form_gap = 0.0;        // max |post form - pre form| of the distribution matrix
};

// Flow change on the surviving island lines after tripping F and the tie lines
// under proportional rebalancing. The post-outage distribution matrix is
// computed from the post-outage network and again from pre-outage data; a gap
// above 1e-9 raises DUAL_FORM_MISMATCH. F a cut of the island raises
// INVALID_ISLAND.
FlowChangeReport cutset_flow_change(const IslandModel& island);

enum class PathPrediction { kZero, kNonzeroAlmostSurely };

// NONZERO_AS when a simple path from the inside endpoint of tie `tie` to a
// participating bus runs through `line`.
PathPrediction simple_path_prediction(const IslandModel& island, Index line, std::size_t tie = 0);

// Per surviving line: true when its block holds no line of F and is not on a
// simple path from any tie endpoint to any participating bus.
std::vector<bool> localization_report(const IslandModel& island);

// {"islands":[{"nodes":[...], "tie":[{line, j, flow}], "internal_tripped":[...],
//   "delta_f":[{line, value, internal_term, tie_term, predicted_zero}]}]}
std::string outage_report_json(const Network& parent, const std::vector<IslandModel>& islands,
                               const std::vector<FlowChangeReport>& reports);

const char* to_string(PathPrediction prediction);

}  // namespace gridlodf
