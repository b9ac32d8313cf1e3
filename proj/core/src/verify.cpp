#include "gridlodf/verify.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "gridlodf/factors.hpp"
#include "gridlodf/forests.hpp"
#include "gridlodf/generators.hpp"
#include "gridlodf/laplacian.hpp"
#include "gridlodf/outage.hpp"
#include "gridlodf/topology.hpp"

namespace gridlodf {
namespace {

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

class Check {
 public:
  Check(std::string name, double tolerance) {
    result_.name = std::move(name);
    result_.tolerance = tolerance;
  }

  // Records |a - b| measured against (1 + scale).
  void compare(double a, double b, double scale = 0.0) {
    const double err = std::abs(a - b) / (1.0 + std::abs(scale));
    ++result_.cases;
    if (!(err <= result_.worst)) result_.worst = std::isnan(err) ? INFINITY : err;
    if (!(err <= result_.tolerance)) result_.passed = false;
  }

  // Records a relative error |a - b| / |b|.
  void compare_relative(double a, double b) {
    const double err = std::abs(a - b) / std::max(std::abs(b), 1e-300);
    ++result_.cases;
    if (!(err <= result_.worst)) result_.worst = std::isnan(err) ? INFINITY : err;
    if (!(err <= result_.tolerance)) result_.passed = false;
  }

  void expect(bool ok) {
    ++result_.cases;
    if (!ok) result_.passed = false;
  }

  void skip(std::string why) {
    result_.skipped = true;
    result_.detail = std::move(why);
  }

  void note(std::string detail) { result_.detail = std::move(detail); }

  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

std::vector<Index> non_slack(const Network& net) {
  std::vector<Index> out;
  for (Index b = 0; b < net.bus_count(); ++b) {
    if (b != net.slack()) out.push_back(b);
  }
  return out;
}

Eigen::MatrixXd reduced_laplacian(const Network& net, const LaplacianSystem& sys) {
  const std::vector<Index> keep = non_slack(net);
  const auto r = static_cast<Index>(keep.size());
  Eigen::MatrixXd out(r, r);
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) out(a, b) = sys.laplacian()(keep[at(a)], keep[at(b)]);
  }
  return out;
}

Eigen::MatrixXd drop_row_col(const Eigen::MatrixXd& m, Index row, Index col) {
  Eigen::MatrixXd out(m.rows() - 1, m.cols() - 1);
  for (Index r = 0, rr = 0; r < m.rows(); ++r) {
    if (r == row) continue;
    for (Index c = 0, cc = 0; c < m.cols(); ++c) {
      if (c == col) continue;
      out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

std::vector<Index> sample_lines(const Network& net, Index count, std::mt19937_64& rng) {
  std::vector<Index> all(at(net.line_count()));
  for (Index l = 0; l < net.line_count(); ++l) all[at(l)] = l;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(at(count));
  return all;
}

void forest_checks(const Network& net, const LaplacianSystem& sys, VerifyReport& report) {
  Check tree("matrix_tree", 1e-9);
  Check minors("all_minors", 1e-9);
  Check inverse("graphical_inverse", 1e-9);
  Check cross("cross_product", 1e-9);
  Check split("forest_decomposition", 1e-9);
  Check reactance("effective_reactance", 1e-9);
  Check expansion("signed_expansion", 1e-9);
  Check invariance("signed_expansion_invariance", 1e-9);
  std::vector<Check*> all = {&tree, &minors, &inverse, &cross, &split, &reactance, &expansion,
                             &invariance};
  if (net.bus_count() > kForestMaxBuses || net.line_count() > kForestMaxLines) {
    for (Check* c : all) {
      c->skip("network exceeds the enumeration guard");
      report.checks.push_back(c->take());
    }
    return;
  }

  const ForestEnumerator forests(net);
  const double total = forests.tree_weight();
  const Eigen::MatrixXd lbar = reduced_laplacian(net, sys);
  tree.compare_relative(lbar.determinant(), total);
  tree.note(std::to_string(forests.spanning_trees().edge_sets.size()) + " trees, weight " +
            std::to_string(total));

  const std::vector<Index> buses = non_slack(net);
  const Index slack = net.slack();
  const auto r = static_cast<Index>(buses.size());
  for (Index a = 0; a < r; ++a) {
    for (Index b = 0; b < r; ++b) {
      const double minor = r > 1 ? drop_row_col(lbar, a, b).determinant() : 1.0;
      minors.compare(std::abs(minor) / total,
                     forests.two_forest_weight({buses[at(a)], buses[at(b)]}, {slack}) / total);
      const auto [comb, alg] = verify_A_entry(forests, sys, buses[at(a)], buses[at(b)]);
      inverse.compare(comb, alg);
    }
  }

  for (Index i : buses) {
    for (Index j : buses) {
      for (Index w : buses) {
        for (Index z : buses) {
          const auto [comb, alg] = verify_cross_product(forests, sys, i, j, w, z);
          cross.compare(comb, alg);
        }
        if (i != j && j != w && i != w) {
          split.compare(forests.two_forest_weight({i, w}, {slack}) / total,
                        (forests.two_forest_weight({i, j, w}, {slack}) +
                         forests.two_forest_weight({i, w}, {j, slack})) /
                            total);
        }
      }
    }
  }

  for (Index l = 0; l < net.line_count(); ++l) {
    const double x = net.lines()[at(l)].reactance;
    const double c = forests.trees_through(l) / total;
    reactance.compare(effective_reactance(net, sys, net.tail(l), net.head(l)), x * c, x);
  }

  for (Index ej = 0; ej < net.line_count(); ++ej) {
    Eigen::VectorXd scaled = net.susceptances();
    scaled[ej] *= 10.0;
    const Network heavy = net.with_susceptances(scaled);
    const LaplacianSystem heavy_sys(heavy);
    const double heavy_total = ForestEnumerator(heavy).tree_weight();
    for (Index ei = 0; ei < net.line_count(); ++ei) {
      if (ei == ej) continue;
      const double numerator = ptdf(net, sys, ei, net.tail(ej), net.head(ej)) * total;
      expansion.compare(forests.signed_expansion(ei, ej), numerator, total);
      const double heavy_numerator =
          ptdf(heavy, heavy_sys, ei, heavy.tail(ej), heavy.head(ej)) * heavy_total;
      invariance.compare(heavy_numerator, numerator, total);
    }
  }
  for (Check* c : all) report.checks.push_back(c->take());
}

void algebraic_checks(const Network& net, const LaplacianSystem& sys, VerifyReport& report) {
  Check equiv("pseudoinverse_equivalence", 1e-9);
  Check routes("flow_routes", 1e-9);
  Check sign("nonnegative_inverse", 0.0);
  Check bridges("bridge_reactance", 1e-9);

  const std::vector<Index> buses = non_slack(net);
  for (Index i : buses) {
    for (Index j : buses) {
      const auto [lhs, rhs] = quadratic_form_equiv(sys, i, j);
      equiv.compare(lhs, rhs);
      sign.expect(sys.reduced_inverse()(i, j) >= -1e-12);
    }
  }
  const Eigen::VectorXd p = net.injections();
  if (std::abs(p.sum()) <= 1e-9) {
    const Eigen::VectorXd fa = solve_flows(net, sys, p);
    const Eigen::VectorXd fl = solve_flows_pseudoinverse(net, sys, p);
    const double scale = fa.lpNorm<Eigen::Infinity>();
    for (Index l = 0; l < fa.size(); ++l) routes.compare(fa[l], fl[l], scale);
  } else {
    routes.skip("injections are not balanced");
  }
  const BlockDecomposition dec = block_decomposition(net);
  for (Index l : dec.bridges) {
    const double x = net.lines()[at(l)].reactance;
    bridges.compare(effective_reactance(net, sys, net.tail(l), net.head(l)), x, x);
  }
  for (Check* c : {&equiv, &routes, &sign, &bridges}) report.checks.push_back(c->take());
}

void outage_checks(const Network& net, const LaplacianSystem& sys, std::mt19937_64& rng,
                   VerifyReport& report) {
  Check glodf_check("outage_factors", 1e-8);
  Check cut_check("cut_set_outage", 1e-8);
  Check closure("rebalance_closure", 1e-9);

  Eigen::VectorXd p = net.injections();
  p.array() -= p.mean();
  const Network balanced = net.with_injections(p);
  const Eigen::VectorXd f = solve_flows(balanced, sys, p);
  const double fscale = f.lpNorm<Eigen::Infinity>();

  std::vector<std::vector<Index>> non_cut;
  std::vector<std::vector<Index>> cuts;
  for (Index l = 0; l < net.line_count(); ++l) {
    const Index single[] = {l};
    if (net.connected_without(single)) non_cut.push_back({l});
    else if (cuts.size() < 3) cuts.push_back({l});
  }
  const Index max_size = std::min<Index>(3, net.line_count());
  for (int attempt = 0; attempt < 40 && max_size >= 2; ++attempt) {
    const Index size = std::uniform_int_distribution<Index>(2, max_size)(rng);
    std::vector<Index> set = sample_lines(net, size, rng);
    if (net.connected_without(set)) {
      if (non_cut.size() < at(net.line_count()) + 3) non_cut.push_back(std::move(set));
    } else if (cuts.size() < 6) {
      cuts.push_back(std::move(set));
    }
  }

  for (const auto& set : non_cut) {
    const Glodf g = glodf(balanced, sys, set);
    Eigen::VectorXd f_f(static_cast<Index>(set.size()));
    for (std::size_t k = 0; k < set.size(); ++k) f_f[static_cast<Index>(k)] = f[set[k]];
    const Eigen::VectorXd delta = g.factors * f_f;
    const Subnetwork post = remove_lines(balanced, set);
    const Eigen::VectorXd post_f = solve_flows(post.network, LaplacianSystem(post.network), p);
    for (std::size_t r = 0; r < g.surviving.size(); ++r) {
      glodf_check.compare(f[g.surviving[r]] + delta[static_cast<Index>(r)],
                          post_f[static_cast<Index>(r)], fscale);
    }
  }

  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (const auto& set : cuts) {
    Eigen::VectorXd w(net.bus_count());
    for (Index b = 0; b < w.size(); ++b) w[b] = 0.05 + weight(rng);
    const std::vector<IslandModel> islands = classify_cut(balanced, {set}, f, w);
    for (const IslandModel& island : islands) {
      if (!island.network) continue;
      const FlowChangeReport r = cutset_flow_change(island);
      const Eigen::VectorXd post_p =
          island.network->injections() + balance_delta(island);
      closure.compare(post_p.sum(), 0.0, post_p.lpNorm<Eigen::Infinity>());
      const Subnetwork post = remove_lines(*island.network, island.internal_tripped);
      const Network rebalanced = post.network.with_injections(post_p);
      const Eigen::VectorXd post_f =
          solve_flows(rebalanced, LaplacianSystem(rebalanced), post_p);
      for (std::size_t k = 0; k < r.surviving.size(); ++k) {
        cut_check.compare(island.pre_flows[r.surviving[k]] + r.delta_f[static_cast<Index>(k)],
                          post_f[static_cast<Index>(k)], fscale);
      }
    }
  }
  if (cuts.empty()) {
    cut_check.skip("no cut set of at most three lines found");
    closure.skip("no cut set of at most three lines found");
  }
  for (Check* c : {&glodf_check, &cut_check, &closure}) report.checks.push_back(c->take());
}

std::string format_error(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

}  // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.skipped || c.passed; });
}

std::string VerifyReport::table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-28s %-6s %8s %12s %12s  %s\n", "check", "result", "cases",
                "worst", "tolerance", "detail");
  os << line;
  for (const CheckResult& c : checks) {
    const char* verdict = c.skipped ? "SKIP" : (c.passed ? "PASS" : "FAIL");
    std::snprintf(line, sizeof line, "%-28s %-6s %8zu %12s %12s  %s\n", c.name.c_str(), verdict,
                  c.cases, format_error(c.worst).c_str(), format_error(c.tolerance).c_str(),
                  c.detail.c_str());
    os << line;
  }
  return os.str();
}

void VerifyReport::merge(const VerifyReport& other) {
  for (const CheckResult& c : other.checks) {
    auto it = std::find_if(checks.begin(), checks.end(),
                           [&](const CheckResult& e) { return e.name == c.name; });
    if (it == checks.end()) {
      checks.push_back(c);
      continue;
    }
    if (c.skipped) continue;
    if (it->skipped) {
      *it = c;
      continue;
    }
    it->cases += c.cases;
    it->worst = std::max(it->worst, c.worst);
    it->passed = it->passed && c.passed;
    if (it->detail.empty()) it->detail = c.detail;
  }
}

VerifyReport verify_network(const Network& net, std::mt19937_64& rng) {
  VerifyReport report;
  const LaplacianSystem sys(net);
  forest_checks(net, sys, report);
  algebraic_checks(net, sys, report);
  outage_checks(net, sys, rng, report);
  return report;
}

VerifyReport verify_random(Index buses, Index lines, std::uint64_t seed, int trials) {
  std::mt19937_64 rng(seed);
  VerifyReport total;
  for (int t = 0; t < trials; ++t) {
    const Network net = random_connected_network({.buses = buses, .lines = lines}, rng);
    VerifyReport one = verify_network(net, rng);
    for (CheckResult& c : one.checks) {
      if (c.name == "matrix_tree") c.detail.clear();
    }
    total.merge(one);
  }
  return total;
}

}  // namespace gridlodf
