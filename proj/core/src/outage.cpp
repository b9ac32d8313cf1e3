#include "gridlodf/outage.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridlodf/error.hpp"
#include "gridlodf/factors.hpp"
#include "gridlodf/laplacian.hpp"
#include "gridlodf/tolerance.hpp"
#include "json.hpp"

namespace gridlodf {
namespace {

constexpr double kDualFormTolerance = 1e-9;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

void validate_outage(const Network& net, const CutSetOutage& outage) {
  if (outage.tripped.empty()) throw Error(ErrorCode::kInvalidArgument, "no tripped lines given");
  std::vector<bool> seen(at(net.line_count()), false);
  for (Index l : outage.tripped) {
    if (l < 0 || l >= net.line_count()) {
      throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(l) + " does not exist");
    }
    if (seen[at(l)]) {
      throw Error(ErrorCode::kInvalidArgument, "line " + net.line_label(l) + " tripped twice");
    }
    seen[at(l)] = true;
  }
}

Index island_slack(const Network& net, const std::vector<Index>& buses) {
  Index best = buses.front();
  for (Index b : buses) {
    if (b == net.slack()) return b;
    if (net.bus_id(b) < net.bus_id(best)) best = b;
  }
  return best;
}

}  // namespace

const Network& IslandModel::graph() const {
  if (!network) throw Error(ErrorCode::kInvalidIsland, "island consists of a single bus");
  return *network;
}

std::vector<IslandModel> classify_cut(const Network& net, const CutSetOutage& outage,
                                      const std::optional<Eigen::VectorXd>& weights) {
  validate_outage(net, outage);
  const LaplacianSystem sys(net);
  return classify_cut(net, outage, solve_flows(net, sys, net.injections()), weights);
}

std::vector<IslandModel> classify_cut(const Network& net, const CutSetOutage& outage,
                                      const Eigen::VectorXd& flows,
                                      const std::optional<Eigen::VectorXd>& weights) {
  validate_outage(net, outage);
  if (flows.size() != net.line_count()) {
    throw Error(ErrorCode::kInvalidArgument, "flow vector does not match the line count");
  }
  if (weights && weights->size() != net.bus_count()) {
    throw Error(ErrorCode::kBadAlpha, "participation weights do not match the bus count");
  }
  const Eigen::VectorXd w = weights ? *weights : Eigen::VectorXd::Ones(net.bus_count());
  const std::vector<Index> label = component_labels(net, outage.tripped);
  const Index islands = *std::max_element(label.begin(), label.end()) + 1;
  std::vector<bool> tripped(at(net.line_count()), false);
  for (Index l : outage.tripped) tripped[at(l)] = true;
  const double flow_scale = flows.size() ? flows.lpNorm<Eigen::Infinity>() : 0.0;

  std::vector<IslandModel> out;
  out.reserve(at(islands));
  for (Index c = 0; c < islands; ++c) {
    std::vector<Index> buses;
    for (Index b = 0; b < net.bus_count(); ++b) {
      if (label[at(b)] == c) buses.push_back(b);
    }
    std::vector<Index> local(at(net.bus_count()), -1);
    for (std::size_t k = 0; k < buses.size(); ++k) local[at(buses[k])] = static_cast<Index>(k);

    std::vector<Index> lines;
    std::vector<Index> external;
    std::vector<TieLine> ties;
    std::vector<std::string> warnings;
    for (Index l = 0; l < net.line_count(); ++l) {
      const bool tail_in = label[at(net.tail(l))] == c;
      const bool head_in = label[at(net.head(l))] == c;
      if (tail_in && head_in) {
        lines.push_back(l);
      } else if (tail_in || head_in) {
        const double import = head_in ? flows[l] : -flows[l];
        if (is_numerical_zero(flows[l], flow_scale)) {
          warnings.push_back("tie line " + net.line_label(l) +
                             " carries no pre-outage flow and is ignored");
          continue;
        }
        ties.push_back({l, local[at(head_in ? net.head(l) : net.tail(l))], import});
      } else if (tripped[at(l)]) {
        external.push_back(l);
      }
    }

    Eigen::VectorXd island_weights(static_cast<Index>(buses.size()));
    for (std::size_t k = 0; k < buses.size(); ++k) island_weights[static_cast<Index>(k)] = w[buses[k]];
    if (!(island_weights.sum() > 0.0)) {
      if (!ties.empty()) {
        throw Error(ErrorCode::kBadAlpha, "island containing bus " +
                                              std::to_string(net.bus_id(buses.front())) +
                                              " has tie lines but no participating bus");
      }
      island_weights.setOnes();
    }

    std::optional<Network> graph;
    std::vector<Index> internal;
    Eigen::VectorXd pre_flows(static_cast<Index>(lines.size()));
    for (std::size_t k = 0; k < lines.size(); ++k) {
      pre_flows[static_cast<Index>(k)] = flows[lines[k]];
      if (tripped[at(lines[k])]) {
        internal.push_back(static_cast<Index>(k));
        if (is_numerical_zero(flows[lines[k]], flow_scale)) {
          warnings.push_back("tripped line " + net.line_label(lines[k]) +
                             " carries no pre-outage flow");
        }
      }
    }
    if (buses.size() >= 2) {
      graph = induced_subnetwork(net, buses, lines, island_slack(net, buses)).network;
    }

    out.push_back(IslandModel{
        .parent_buses = std::move(buses),
        .parent_lines = std::move(lines),
        .network = std::move(graph),
        .internal_tripped = std::move(internal),
        .external_tripped = std::move(external),
        .ties = std::move(ties),
        .pre_flows = std::move(pre_flows),
        .alpha = ParticipationProfile::normalized(island_weights),
        .warnings = std::move(warnings),
    });
  }
  return out;
}

Eigen::VectorXd tie_delta(const IslandModel& island) {
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(island.bus_count());
  for (const TieLine& t : island.ties) delta[t.inside_bus] += t.flow;
  return delta;
}

Eigen::VectorXd balance_delta(const IslandModel& island) {
  const Eigen::VectorXd& alpha = island.alpha.alpha();
  if (alpha.size() != island.bus_count()) {
    throw Error(ErrorCode::kBadAlpha, "participation profile does not match the island");
  }
  double total = 0.0;
  for (const TieLine& t : island.ties) total += t.flow;
  return total * alpha;
}

Eigen::VectorXd bridge_lodf_column(const IslandModel& island) {
  if (island.ties.size() != 1 || !island.internal_tripped.empty()) {
    throw Error(ErrorCode::kUseCutsetOp,
                "bridge factors need exactly one tie line and no tripped internal line");
  }
  if (!island.network) return Eigen::VectorXd(0);
  const Network& net = *island.network;
  const LaplacianSystem sys(net);
  const Eigen::MatrixXd p = ptdf_matrix(net, sys);
  const Index j = island.ties.front().inside_bus;
  return p * island.alpha.alpha() - p.col(j);
}

double bridge_lodf(const IslandModel& island, Index line) {
  const Eigen::VectorXd column = bridge_lodf_column(island);
  if (line < 0 || line >= column.size()) {
    throw Error(ErrorCode::kInvalidArgument, "line " + std::to_string(line) + " not in island");
  }
  return column[line];
}

FlowChangeReport cutset_flow_change(const IslandModel& island) {
  FlowChangeReport report;
  if (!island.network) return report;
  const Network& net = *island.network;
  const std::vector<Index>& f_set = island.internal_tripped;
  if (!f_set.empty() && !net.connected_without(f_set)) {
    throw Error(ErrorCode::kInvalidIsland, "tripped internal lines disconnect the island");
  }
  const LaplacianSystem sys(net);
  const Glodf g = glodf(net, sys, f_set);
  report.surviving = g.surviving;
  const auto s = static_cast<Index>(g.surviving.size());
  const auto k = static_cast<Index>(f_set.size());

  Eigen::VectorXd f_f(k);
  for (Index c = 0; c < k; ++c) f_f[c] = island.pre_flows[f_set[at(c)]];
  report.internal_term = k ? Eigen::VectorXd(g.factors * f_f) : Eigen::VectorXd::Zero(s);

  // Post-outage form: B_-F C_-F^T A_-F on the network without F.
  const Subnetwork post = remove_lines(net, f_set);
  const LaplacianSystem post_sys(post.network);
  const Eigen::MatrixXd post_form = ptdf_matrix(post.network, post_sys);

  // Pre-outage form: (B_-F C_-F^T + K^F B_F C_F^T) A.
  const Eigen::MatrixXd bct = susceptance_matrix(net) * incidence_matrix(net).transpose();
  Eigen::MatrixXd bct_s(s, net.bus_count());
  Eigen::MatrixXd bct_f(k, net.bus_count());
  for (Index r = 0; r < s; ++r) bct_s.row(r) = bct.row(g.surviving[at(r)]);
  for (Index r = 0; r < k; ++r) bct_f.row(r) = bct.row(f_set[at(r)]);
  Eigen::MatrixXd pre_form = bct_s;
  if (k) pre_form += g.factors * bct_f;
  pre_form = pre_form * sys.reduced_inverse();

  report.dual_form_gap = s ? (post_form - pre_form).cwiseAbs().maxCoeff() : 0.0;
  if (!(report.dual_form_gap <= kDualFormTolerance)) {
    std::ostringstream msg;
    msg << "post- and pre-outage distribution matrices differ by " << report.dual_form_gap;
    throw Error(ErrorCode::kDualFormMismatch, msg.str());
  }

  report.tie_term = Eigen::VectorXd::Zero(s);
  const Eigen::VectorXd spread = post_form * island.alpha.alpha();
  for (const TieLine& t : island.ties) {
    report.tie_term += t.flow * (spread - post_form.col(t.inside_bus));
  }
  report.delta_f = report.internal_term + report.tie_term;
  report.predicted_zero = localization_report(island);
  return report;
}

PathPrediction simple_path_prediction(const IslandModel& island, Index line, std::size_t tie) {
  if (tie >= island.ties.size()) {
    throw Error(ErrorCode::kInvalidArgument, "island has no tie line " + std::to_string(tie));
  }
  const Index single[] = {line};
  return block_on_simple_path(island.graph(), single, island.ties[tie].inside_bus, island.alpha)
             ? PathPrediction::kNonzeroAlmostSurely
             : PathPrediction::kZero;
}

std::vector<bool> localization_report(const IslandModel& island) {
  std::vector<bool> out;
  if (!island.network) return out;
  const Network& net = *island.network;
  const BlockDecomposition dec = block_decomposition(net);
  std::vector<bool> in_f(at(net.line_count()), false);
  for (Index l : island.internal_tripped) in_f[at(l)] = true;

  // Verdict per block, keyed by cell index; bridges are evaluated on their own.
  std::vector<int> cell_verdict(dec.cells.size(), -1);
  auto evaluate = [&](const std::vector<Index>& block) {
    for (Index l : block) {
      if (in_f[at(l)]) return false;
    }
    for (const TieLine& t : island.ties) {
      if (block_on_simple_path(net, block, t.inside_bus, island.alpha)) return false;
    }
    return true;
  };
  for (Index l = 0; l < net.line_count(); ++l) {
    if (in_f[at(l)]) continue;
    const Index cell = dec.cell_of[at(l)];
    if (cell == BlockDecomposition::kBridge) {
      out.push_back(evaluate({l}));
      continue;
    }
    int& v = cell_verdict[at(cell)];
    if (v < 0) v = evaluate(dec.cells[at(cell)]) ? 1 : 0;
    out.push_back(v == 1);
  }
  return out;
}

std::string outage_report_json(const Network& parent, const std::vector<IslandModel>& islands,
                               const std::vector<FlowChangeReport>& reports) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["islands"] = json::array();
  for (std::size_t i = 0; i < islands.size(); ++i) {
    const IslandModel& island = islands[i];
    json entry;
    entry["nodes"] = json::array();
    for (Index b : island.parent_buses) entry["nodes"].push_back(parent.bus_id(b));
    entry["tie"] = json::array();
    for (const TieLine& t : island.ties) {
      entry["tie"].push_back({{"line", parent.line_label(t.parent_line)},
                              {"j", parent.bus_id(island.parent_buses[at(t.inside_bus)])},
                              {"flow", t.flow}});
    }
    entry["internal_tripped"] = json::array();
    for (Index l : island.internal_tripped) {
      entry["internal_tripped"].push_back(parent.line_label(island.parent_lines[at(l)]));
    }
    entry["delta_f"] = json::array();
    if (i < reports.size()) {
      const FlowChangeReport& r = reports[i];
      for (std::size_t k = 0; k < r.surviving.size(); ++k) {
        const auto row = static_cast<Index>(k);
        entry["delta_f"].push_back(
            {{"line", parent.line_label(island.parent_lines[at(r.surviving[k])])},
             {"value", r.delta_f[row]},
             {"internal_term", r.internal_term[row]},
             {"tie_term", r.tie_term[row]},
             {"predicted_zero", static_cast<bool>(r.predicted_zero[k])}});
      }
    }
    if (!island.warnings.empty()) entry["warnings"] = island.warnings;
    doc["islands"].push_back(std::move(entry));
  }
  return doc.dump(2);
}

const char* to_string(PathPrediction prediction) {
  return prediction == PathPrediction::kZero ? "ZERO" : "NONZERO_AS";
}

}  // namespace gridlodf
