#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gridlodf/network.hpp"

namespace gridlodf::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(GRIDLODF_TEST_DATA_DIR) / name;
}

struct Edge {
  int tail;
  int head;
  double susceptance = 1.0;
};

// Buses 1..n with the given injections (zeros when empty) and slack bus id.
inline Network make_network(int buses, const std::vector<Edge>& edges, int slack,
                            std::vector<double> injections = {}) {
  if (injections.empty()) injections.assign(static_cast<std::size_t>(buses), 0.0);
  std::vector<Bus> b;
  for (int k = 1; k <= buses; ++k) b.push_back({k, injections[static_cast<std::size_t>(k - 1)], k == slack});
  std::vector<Line> l;
  for (const Edge& e : edges) l.push_back(Line::from_susceptance(e.tail, e.head, e.susceptance));
  return Network(std::move(b), std::move(l));
}

// Lines (1,2), (1,3), (3,2); slack 3.
inline Network triangle(std::vector<double> injections = {1.0, -1.0, 0.0}) {
  return make_network(3, {{1, 2}, {1, 3}, {3, 2}}, 3, std::move(injections));
}

inline Network path_graph(int buses, int slack = 1) {
  std::vector<Edge> edges;
  std::vector<double> p(static_cast<std::size_t>(buses), 0.0);
  for (int k = 1; k < buses; ++k) edges.push_back({k, k + 1, 1.0 + 0.25 * k});
  p.front() = 1.0;
  p.back() = -1.0;
  return make_network(buses, edges, slack, p);
}

// Two triangles sharing bus 3: lines 0-2 form wing A {1,2,3}, lines 3-5 wing B {3,4,5}.
inline Network butterfly() {
  return make_network(5, {{1, 2, 2.0}, {2, 3, 1.0}, {3, 1, 1.25}, {3, 4, 2.5}, {4, 5, 0.8}, {5, 3, 1.6}},
                      3, {1.0, 0.5, 0.0, -0.7, -0.8});
}

// Triangles {1,2,3} and {4,5,6} joined by the bridge 3-4 (line 3).
inline Network two_cell() {
  return make_network(6,
                      {{1, 2, 2.0}, {2, 3, 1.0}, {3, 1, 1.25}, {3, 4, 3.0}, {4, 5, 1.4}, {5, 6, 0.9},
                       {6, 4, 1.1}},
                      1, {1.2, 0.3, -0.4, 0.6, -0.9, -0.8});
}

inline Network complete_graph(int n, int slack = 0) {
  std::vector<Edge> edges;
  for (int u = 1; u <= n; ++u) {
    for (int v = u + 1; v <= n; ++v) edges.push_back({u, v});
  }
  return make_network(n, edges, slack == 0 ? n : slack);
}

// Square 1-2-3-4 with diagonal 2-4 (line 4) that carries no flow by symmetry.
inline Network zero_flow_square() {
  return make_network(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {2, 4}}, 3, {1.0, 0.0, -1.0, 0.0});
}

}  // namespace gridlodf::testing
