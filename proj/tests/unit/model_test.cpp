#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "gridlodf/error.hpp"
#include "gridlodf/laplacian.hpp"
#include "gridlodf/network.hpp"

namespace gridlodf {
namespace {

using testing::make_network;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected gridlodf::Error";
  return ErrorCode::kInvalidArgument;
}

TEST(Network, RejectsInvalidConstruction) {
  auto bus = [](int id, bool slack = false) { return Bus{id, 0.0, slack}; };
  EXPECT_EQ(code_of([&] { Network({bus(1, true)}, {}); }), ErrorCode::kTooFewBuses);
  EXPECT_EQ(code_of([&] {
              Network({bus(1, true), bus(1)}, {Line::from_reactance(1, 1, 1.0)});
            }),
            ErrorCode::kDuplicateBus);
  EXPECT_EQ(code_of([&] { Network({bus(1), bus(2)}, {Line::from_reactance(1, 2, 1.0)}); }),
            ErrorCode::kNoSlack);
  EXPECT_EQ(code_of([&] {
              Network({bus(1, true), bus(2, true)}, {Line::from_reactance(1, 2, 1.0)});
            }),
            ErrorCode::kMultipleSlack);
  EXPECT_EQ(code_of([&] { Network({bus(1, true), bus(2)}, {Line::from_reactance(1, 7, 1.0)}); }),
            ErrorCode::kUnknownBus);
  EXPECT_EQ(code_of([&] {
              Network({bus(1, true), bus(2)},
                      {Line::from_reactance(1, 2, 1.0), Line::from_reactance(2, 2, 1.0)});
            }),
            ErrorCode::kSelfLoop);
  EXPECT_EQ(code_of([&] { Network({bus(1, true), bus(2)}, {Line::from_reactance(1, 2, -0.5)}); }),
            ErrorCode::kNonpositiveReactance);
  EXPECT_EQ(code_of([&] { Network({bus(1, true), bus(2), bus(3)}, {Line::from_reactance(1, 2, 1.0)}); }),
            ErrorCode::kDisconnected);
  Line bad = Line::from_reactance(1, 2, 0.5);
  bad.susceptance = 3.0;
  EXPECT_EQ(code_of([&] { Network({bus(1, true), bus(2)}, {bad}); }),
            ErrorCode::kInconsistentSusceptance);
}

TEST(Network, ErrorMessagesCarryTheCode) {
  try {
    Network({Bus{1, 0.0, true}, Bus{1, 0.0, false}}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).rfind("DUPLICATE_BUS", 0), 0u) << e.what();
  }
}

TEST(Network, ReassignsLineIdsAndIndexesBuses) {
  const Network net = make_network(3, {{2, 3}, {1, 2}, {1, 3, 4.0}}, 2, {0.5, 0.0, -0.5});
  ASSERT_EQ(net.line_count(), 3);
  for (Index l = 0; l < 3; ++l) EXPECT_EQ(net.lines()[static_cast<std::size_t>(l)].id, l);
  EXPECT_EQ(net.slack(), 1);
  EXPECT_EQ(net.bus_index(3), 2);
  EXPECT_FALSE(net.find_bus(9).has_value());
  EXPECT_EQ(code_of([&] { (void)net.bus_index(9); }), ErrorCode::kUnknownBus);
  EXPECT_DOUBLE_EQ(net.lines()[2].reactance, 0.25);
  EXPECT_EQ(net.tail(0), 1);
  EXPECT_EQ(net.head(0), 2);
  EXPECT_NEAR(net.injection_imbalance(), 0.0, 1e-15);
}

TEST(Network, ParallelLinesGetDistinctLabels) {
  const Network net = make_network(2, {{1, 2}, {2, 1}, {1, 2}}, 1);
  EXPECT_EQ(net.line_label(0), "1-2#0");
  EXPECT_EQ(net.line_label(1), "2-1#1");
  EXPECT_EQ(net.line_label(2), "1-2#2");
}

TEST(Network, ConnectivityQueries) {
  const Network net = testing::two_cell();
  const Index bridge[] = {3};
  const Index edge[] = {0};
  EXPECT_FALSE(net.connected_without(bridge));
  EXPECT_TRUE(net.connected_without(edge));
  const std::vector<Index> labels = component_labels(net, bridge);
  EXPECT_EQ(labels, (std::vector<Index>{0, 0, 0, 1, 1, 1}));
}

TEST(Network, IncidenceAndSusceptanceMatrices) {
  const Network net = testing::triangle();
  const Eigen::MatrixXd c = incidence_matrix(net);
  EXPECT_EQ(c(0, 0), 1.0);
  EXPECT_EQ(c(1, 0), -1.0);
  EXPECT_EQ(c(2, 2), 1.0);
  EXPECT_EQ(c(1, 2), -1.0);
  for (Index l = 0; l < 3; ++l) EXPECT_EQ(c.col(l).sum(), 0.0);
  EXPECT_EQ(susceptance_matrix(net).diagonal(), Eigen::VectorXd::Ones(3));
}

TEST(Network, InducedSubnetworkKeepsMaps) {
  const Network net = testing::two_cell();
  const Subnetwork sub = induced_subnetwork(net, {3, 4, 5}, {4, 5, 6}, 4);
  EXPECT_EQ(sub.network.bus_count(), 3);
  EXPECT_EQ(sub.network.bus_id(sub.network.slack()), 5);
  EXPECT_EQ(sub.parent_line, (std::vector<Index>{4, 5, 6}));
  EXPECT_EQ(sub.parent_bus, (std::vector<Index>{3, 4, 5}));
  const Index removed[] = {0};
  const Subnetwork rest = remove_lines(net, removed);
  EXPECT_EQ(rest.network.line_count(), 6);
  EXPECT_EQ(rest.parent_line.front(), 1);
}

TEST(Network, CollapseDanglingFoldsChainsIntoNeighbour) {
  // Triangle 1-2-3 with the chain 3-4-5 hanging off bus 3.
  const Network net = make_network(5, {{1, 2}, {2, 3}, {3, 1}, {3, 4}, {4, 5}}, 1,
                                   {0.9, 0.3, -0.2, -0.6, -0.4});
  const CollapsedNetwork c = collapse_dangling(net);
  EXPECT_EQ(c.kept.network.bus_count(), 3);
  EXPECT_EQ(c.removed_buses.size(), 2u);
  EXPECT_EQ(c.removed_lines.size(), 2u);
  const Index bus3 = c.kept.network.bus_index(3);
  EXPECT_NEAR(c.kept.network.injections()[bus3], -1.2, 1e-15);

  // The kept flows match the flows of the full network.
  const LaplacianSystem full(net);
  const LaplacianSystem kept(c.kept.network);
  const Eigen::VectorXd f_full = solve_flows(net, full, net.injections());
  const Eigen::VectorXd f_kept = solve_flows(c.kept.network, kept, c.kept.network.injections());
  for (Index l = 0; l < c.kept.network.line_count(); ++l) {
    EXPECT_NEAR(f_kept[l], f_full[c.kept.parent_line[static_cast<std::size_t>(l)]], 1e-12);
  }
}

TEST(Network, CollapseMovesTheSlackOffRemovedBuses) {
  const Network net = make_network(4, {{1, 2}, {2, 3}, {3, 1}, {3, 4}}, 4, {0.5, 0.5, 0.0, -1.0});
  const CollapsedNetwork c = collapse_dangling(net);
  EXPECT_EQ(c.kept.network.bus_count(), 3);
  EXPECT_EQ(c.kept.network.bus_id(c.kept.network.slack()), 3);
}

TEST(Network, CollapseStopsAtTwoBuses) {
  const CollapsedNetwork c = collapse_dangling(testing::path_graph(5));
  EXPECT_EQ(c.kept.network.bus_count(), 2);
  EXPECT_NEAR(c.kept.network.injection_imbalance(), 0.0, 1e-15);
}

TEST(Network, BalanceAtSlack) {
  const Network net = make_network(3, {{1, 2}, {2, 3}}, 2, {1.0, 0.0, -0.4});
  const Network balanced = balance_at_slack(net);
  EXPECT_NEAR(balanced.injections()[1], -0.6, 1e-15);
  EXPECT_NEAR(balanced.injection_imbalance(), 0.0, 1e-15);
}

TEST(Network, WithSlackAndWithSusceptances) {
  const Network net = testing::triangle();
  EXPECT_EQ(net.with_slack(0).slack(), 0);
  Eigen::VectorXd b(3);
  b << 2.0, 4.0, 0.5;
  const Network scaled = net.with_susceptances(b);
  EXPECT_DOUBLE_EQ(scaled.lines()[1].reactance, 0.25);
  EXPECT_EQ(code_of([&] {
              Eigen::VectorXd neg = b;
              neg[0] = -1.0;
              (void)net.with_susceptances(neg);
            }),
            ErrorCode::kNonpositiveReactance);
}

}  // namespace
}  // namespace gridlodf
