#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "gridlodf/error.hpp"
#include "gridlodf/factors.hpp"
#include "gridlodf/forests.hpp"
#include "gridlodf/generators.hpp"
#include "gridlodf/topology.hpp"
#include "oracles.hpp"

namespace gridlodf {
namespace {

using testing::make_network;

TEST(Ptdf, SpecExamples) {
  const Network tri = testing::triangle();
  const LaplacianSystem sys(tri);
  EXPECT_NEAR(ptdf(tri, sys, 0, 0, 1), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(ptdf(tri, sys, 1, 2, 2), 0.0);
  const Network path = testing::path_graph(5, 3);
  const LaplacianSystem psys(path);
  for (Index l = 0; l < path.line_count(); ++l) {
    for (Index w = 0; w < 5; ++w) {
      for (Index z = 0; z < 5; ++z) {
        const double d = ptdf(path, psys, l, w, z);
        const double rounded = std::round(d);
        EXPECT_NEAR(d, rounded, 1e-12);
        EXPECT_LE(std::abs(rounded), 1.0);
      }
    }
  }
}

TEST(Ptdf, MatchesDirectSolveAndIgnoresSlack) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = random_connected_network({.buses = 6, .lines = 9}, rng);
    const LaplacianSystem sys(net);
    const Network moved = net.with_slack((net.slack() + 2) % net.bus_count());
    const LaplacianSystem msys(moved);
    for (Index l = 0; l < net.line_count(); ++l) {
      for (Index w = 0; w < net.bus_count(); ++w) {
        for (Index z = 0; z < net.bus_count(); ++z) {
          const double d = ptdf(net, sys, l, w, z);
          EXPECT_NEAR(d, testing::direct_ptdf(net, l, w, z), 1e-10);
          EXPECT_NEAR(d, ptdf(moved, msys, l, w, z), 1e-12);
        }
      }
    }
    const Eigen::MatrixXd full = ptdf_matrix(net, sys);
    EXPECT_NEAR(full(0, 0), ptdf(net, sys, 0, 0, net.slack()), 1e-15);
  }
}

TEST(Glodf, TriangleSingleLine) {
  const Network tri = testing::triangle();
  const LaplacianSystem sys(tri);
  const Index f[] = {0};
  const Glodf g = glodf(tri, sys, f);
  EXPECT_EQ(g.surviving, (std::vector<Index>{1, 2}));
  ASSERT_EQ(g.factors.rows(), 2);
  EXPECT_NEAR(g.factors(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(g.factors(1, 0), 1.0, 1e-14);
  EXPECT_GE(g.condition, 1.0);
}

TEST(Glodf, EmptyOutage) {
  const Network tri = testing::triangle();
  const Glodf g = glodf(tri, LaplacianSystem(tri), {});
  EXPECT_EQ(g.factors.rows(), 3);
  EXPECT_EQ(g.factors.cols(), 0);
}

TEST(Glodf, ParallelTwinTakesEverything) {
  const Network net = make_network(2, {{1, 2}, {1, 2}}, 1);
  const Index f[] = {1};
  const Glodf g = glodf(net, LaplacianSystem(net), f);
  EXPECT_NEAR(g.factors(0, 0), 1.0, 1e-14);
}

TEST(Glodf, RejectsCutSetsAndBadInput) {
  const Network net = testing::two_cell();
  const LaplacianSystem sys(net);
  const Index bridge[] = {3};
  try {
    (void)glodf(net, sys, bridge);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCutSet);
  }
  const Index twice[] = {0, 0};
  EXPECT_THROW((void)glodf(net, sys, twice), Error);
  const Index missing[] = {99};
  EXPECT_THROW((void)glodf(net, sys, missing), Error);
}

TEST(Glodf, MatchesRemovalAndResolve) {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 200 && checked < 100; ++trial) {
    const Network net = random_connected_network({.buses = 8, .lines = 13}, rng);
    const Index k = std::uniform_int_distribution<Index>(1, 3)(rng);
    std::vector<Index> lines(static_cast<std::size_t>(net.line_count()));
    std::iota(lines.begin(), lines.end(), Index{0});
    std::shuffle(lines.begin(), lines.end(), rng);
    lines.resize(static_cast<std::size_t>(k));
    if (!net.connected_without(lines)) continue;
    ++checked;
    const LaplacianSystem sys(net);
    const Eigen::VectorXd f = solve_flows(net, sys, net.injections());
    const Glodf g = glodf(net, sys, lines);
    Eigen::VectorXd f_f(k);
    for (Index c = 0; c < k; ++c) f_f[c] = f[lines[static_cast<std::size_t>(c)]];
    const Eigen::VectorXd delta = g.factors * f_f;
    const Subnetwork post = remove_lines(net, lines);
    const Eigen::VectorXd oracle = testing::direct_flows(post.network, net.injections());
    const double tol = 1e-8 * (1.0 + f.lpNorm<Eigen::Infinity>());
    for (std::size_t r = 0; r < g.surviving.size(); ++r) {
      EXPECT_NEAR(f[g.surviving[r]] + delta[static_cast<Index>(r)], oracle[static_cast<Index>(r)], tol);
    }
  }
  EXPECT_EQ(checked, 100);
}

TEST(EffectiveReactance, SpecExamples) {
  const Network tri = testing::triangle();
  const LaplacianSystem sys(tri);
  EXPECT_NEAR(effective_reactance(tri, sys, 0, 1), 2.0 / 3.0, 1e-12 * 2.0 / 3.0);
  EXPECT_NEAR(effective_reactance(tri, sys, 0, 2), 2.0 / 3.0, 1e-12 * 2.0 / 3.0);
  EXPECT_NEAR(spanning_tree_centrality(tri, sys, 2), 2.0 / 3.0, 1e-12);

  const Network pair = make_network(2, {{1, 2}}, 1);
  EXPECT_NEAR(effective_reactance(pair, LaplacianSystem(pair), 0, 1), 1.0, 1e-15);

  const Network two = testing::two_cell();
  const LaplacianSystem tsys(two);
  EXPECT_NEAR(effective_reactance(two, tsys, 2, 3), two.lines()[3].reactance, 1e-12);
  EXPECT_NEAR(spanning_tree_centrality(two, tsys, 3), 1.0, 1e-12);

  const Network k4 = testing::complete_graph(4);
  const LaplacianSystem ksys(k4);
  const ForestEnumerator forests(k4);
  for (Index l = 0; l < k4.line_count(); ++l) {
    EXPECT_NEAR(spanning_tree_centrality(k4, ksys, l), 0.5, 1e-12);
    EXPECT_NEAR(forests.trees_through(l) / forests.tree_weight(), 0.5, 1e-15);
  }
  EXPECT_THROW((void)effective_reactance(tri, sys, 1, 1), Error);
}

TEST(EffectiveReactance, DominanceAndCentralityComplement) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = random_connected_network({.buses = 6, .lines = 10}, rng);
    const LaplacianSystem sys(net);
    const ForestEnumerator forests(net);
    for (Index l = 0; l < net.line_count(); ++l) {
      const double x = net.lines()[static_cast<std::size_t>(l)].reactance;
      const double r = effective_reactance(net, sys, net.tail(l), net.head(l));
      EXPECT_LE(r, x + 1e-12);
      const double c = spanning_tree_centrality(net, sys, l);
      const double avoiding = forests.tree_weight() - forests.trees_through(l);
      EXPECT_NEAR(c + avoiding / forests.tree_weight(), 1.0, 1e-9);
      const Network moved = net.with_slack(net.tail(l));
      EXPECT_NEAR(r, effective_reactance(moved, LaplacianSystem(moved), net.tail(l), net.head(l)),
                  1e-12);
    }
  }
}

TEST(Perturb, DeterministicAndBounded) {
  const Network k4 = testing::complete_graph(4);
  EXPECT_EQ(perturb(k4, {7, 0.0}).susceptances(), k4.susceptances());
  const Network a = perturb(k4, {7, 0.01});
  const Network b = perturb(k4, {7, 0.01});
  const Network c = perturb(k4, {8, 0.01});
  EXPECT_EQ(a.susceptances(), b.susceptances());
  EXPECT_NE(a.susceptances(), c.susceptances());
  EXPECT_LE((a.susceptances().array() - 1.0).abs().maxCoeff(), 0.01);
  EXPECT_GT((a.susceptances().array() - 1.0).abs().maxCoeff(), 0.0);
  EXPECT_THROW((void)perturb(k4, {1, 0.5}), Error);
  EXPECT_THROW((void)perturb(k4, {1, -0.1}), Error);
}

TEST(Perturb, BreaksCompleteGraphSymmetry) {
  const Network k4 = testing::complete_graph(4);
  // Lines (1,2) and (3,4) share no endpoint.
  const Index e = 0;
  const Index e_hat = 5;
  const Index out[] = {e};
  const Glodf sym = glodf(k4, LaplacianSystem(k4), out);
  EXPECT_LE(std::abs(sym.factors(e_hat - 1, 0)), 1e-12);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Network p = perturb(k4, {seed, 0.01});
    const Glodf g = glodf(p, LaplacianSystem(p), out);
    EXPECT_GT(std::abs(g.factors(e_hat - 1, 0)), 1e-12);
  }
}

}  // namespace
}  // namespace gridlodf
