#include "gridlodf/lodf_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gridlodf/factors.hpp"
#include "gridlodf/laplacian.hpp"
#include "gridlodf/topology.hpp"

namespace gridlodf {
namespace {

constexpr double kMinOutageDenominator = 1e-10;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  return buf;
}

// Fills the column of bridge `c` for the island holding `inside`.
void fill_bridge_side(const Network& net, Index c, Index inside, const std::vector<Index>& label,
                      const Eigen::VectorXd& weights, FactorSet& out) {
  const Index comp = label[at(inside)];
  std::vector<Index> buses;
  for (Index b = 0; b < net.bus_count(); ++b) {
    if (label[at(b)] == comp) buses.push_back(b);
  }
  if (buses.size() < 2) return;
  std::vector<Index> lines;
  for (Index l = 0; l < net.line_count(); ++l) {
    if (l != c && label[at(net.tail(l))] == comp && label[at(net.head(l))] == comp) {
      lines.push_back(l);
    }
  }
  Index slack = buses.front();
  for (Index b : buses) {
    if (b == net.slack()) {
      slack = b;
      break;
    }
    if (net.bus_id(b) < net.bus_id(slack)) slack = b;
  }
  Eigen::VectorXd w(static_cast<Index>(buses.size()));
  Index j = 0;
  for (std::size_t k = 0; k < buses.size(); ++k) {
    w[static_cast<Index>(k)] = weights[buses[k]];
    if (buses[k] == inside) j = static_cast<Index>(k);
  }
  if (!(w.sum() > 0.0)) {
    out.diagnostics.push_back({c, ErrorCode::kBadAlpha,
                               "no participating bus on the side of bus " +
                                   std::to_string(net.bus_id(inside))});
    return;
  }
  const ParticipationProfile alpha = ParticipationProfile::normalized(w);
  const Subnetwork island = induced_subnetwork(net, buses, lines, slack);
  const LaplacianSystem sys(island.network);
  const Eigen::MatrixXd p = ptdf_matrix(island.network, sys);
  // Per unit of import through the bridge; the import equals +f_c on the head side.
  const double sign = inside == net.head(c) ? 1.0 : -1.0;
  const Eigen::VectorXd column = sign * (p * alpha.alpha() - p.col(j));
  for (std::size_t k = 0; k < lines.size(); ++k) out.lodf(lines[k], c) = column[static_cast<Index>(k)];
}

}  // namespace

Eigen::MatrixXd FactorSet::block_sorted() const {
  const auto m = static_cast<Index>(order.size());
  Eigen::MatrixXd sorted(m, m);
  for (Index c = 0; c < m; ++c) {
    for (Index r = 0; r < m; ++r) sorted(r, c) = lodf(order[at(r)], order[at(c)]);
  }
  return sorted;
}

FactorSet full_lodf_matrix(const Network& net, const std::optional<Eigen::VectorXd>& weights) {
  if (weights && weights->size() != net.bus_count()) {
    throw Error(ErrorCode::kBadAlpha, "participation weights do not match the bus count");
  }
  if (weights && ((weights->array() < 0.0).any() || !weights->allFinite())) {
    throw Error(ErrorCode::kBadAlpha, "participation weights must be finite and non-negative");
  }
  const Eigen::VectorXd w = weights ? *weights : Eigen::VectorXd::Ones(net.bus_count());
  const Index m = net.line_count();
  const LaplacianSystem sys(net);
  const BlockDecomposition dec = block_decomposition(net);

  FactorSet out;
  out.ptdf = ptdf_matrix(net, sys);
  const Eigen::MatrixXd d = out.ptdf * incidence_matrix(net);
  out.lodf = Eigen::MatrixXd::Zero(m, m);
  out.bridge_column.assign(at(m), false);
  out.order = dec.block_order();

  for (Index c = 0; c < m; ++c) {
    if (dec.is_bridge(c)) {
      out.bridge_column[at(c)] = true;
      const Index removed[] = {c};
      const std::vector<Index> label = component_labels(net, removed);
      fill_bridge_side(net, c, net.tail(c), label, w, out);
      fill_bridge_side(net, c, net.head(c), label, w, out);
    } else {
      const double denom = 1.0 - d(c, c);
      if (!(denom > kMinOutageDenominator)) {
        std::ostringstream msg;
        msg << "outage of " << net.line_label(c) << " is singular (1 - D_cc = " << denom << ")";
        out.diagnostics.push_back({c, ErrorCode::kSingularOutage, msg.str()});
        continue;
      }
      out.lodf.col(c) = d.col(c) / denom;
    }
    out.lodf(c, c) = -1.0;
  }
  return out;
}

std::vector<InfluenceEdge> influence_graph(const Eigen::MatrixXd& lodf, double threshold) {
  if (lodf.rows() != lodf.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "influence graph needs a square factor matrix");
  }
  if (!(threshold >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "threshold must be >= 0");
  std::vector<InfluenceEdge> edges;
  for (Index a = 0; a < lodf.rows(); ++a) {
    for (Index b = a + 1; b < lodf.cols(); ++b) {
      const double weight = std::max(std::abs(lodf(a, b)), std::abs(lodf(b, a)));
      if (weight >= threshold) edges.push_back({a, b, weight});
    }
  }
  return edges;
}

std::string lodf_csv(const Network& net, const FactorSet& factors) {
  std::ostringstream os;
  os << "line";
  for (Index c : factors.order) os << ',' << net.line_label(c);
  os << '\n';
  for (Index r : factors.order) {
    os << net.line_label(r);
    for (Index c : factors.order) os << ',' << format_double(std::abs(factors.lodf(r, c)));
    os << '\n';
  }
  return os.str();
}

std::string influence_dot(const Network& net, const std::vector<InfluenceEdge>& edges) {
  std::ostringstream os;
  os << "graph influence {\n";
  for (Index l = 0; l < net.line_count(); ++l) {
    const Line& line = net.lines()[at(l)];
    os << "  \"" << net.line_label(l) << "\" [label=\"" << line.tail << '-' << line.head
       << "\"];\n";
  }
  for (const InfluenceEdge& e : edges) {
    os << "  \"" << net.line_label(e.a) << "\" -- \"" << net.line_label(e.b)
       << "\" [weight=" << format_double(e.weight) << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string matrix_csv(const Eigen::MatrixXd& matrix) {
  std::ostringstream os;
  for (Index r = 0; r < matrix.rows(); ++r) {
    for (Index c = 0; c < matrix.cols(); ++c) {
      if (c) os << ',';
      os << format_double(matrix(r, c));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace gridlodf
