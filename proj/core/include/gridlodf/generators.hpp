#pragma once

#include <Eigen/Core>
#include <random>

#include "gridlodf/network.hpp"

namespace gridlodf {

struct RandomNetworkOptions {
  Index buses = 6;
  Index lines = 9;
  double min_susceptance = 0.5;
  double max_susceptance = 2.0;
  bool random_slack = true;
};

// Connected simple graph with bus ids 1..n: a random spanning tree plus
// distinct extra pairs, random orientation, uniform susceptances and balanced
// injections.
Network random_connected_network(const RandomNetworkOptions& options, std::mt19937_64& rng);

struct MulticellOptions {
  Index min_cells = 2;
  Index max_cells = 4;
  Index min_cycle = 3;
  Index max_cycle = 5;
  Index max_chords = 2;
  double bridge_probability = 0.4;   // attach a cell through a bridge instead of a cut vertex
  double pendant_probability = 0.2;  // hang a single bus off the network by a bridge
  double min_susceptance = 0.5;
  double max_susceptance = 2.0;
};

// Cycles with chords glued together at cut vertices or through bridges.
Network random_multicell_network(const MulticellOptions& options, std::mt19937_64& rng);

// Uniform entries in [-1, 1] shifted to sum to zero.
Eigen::VectorXd random_balanced_injections(Index buses, std::mt19937_64& rng);

}  // namespace gridlodf
