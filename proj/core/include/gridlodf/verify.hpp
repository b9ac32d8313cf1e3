#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gridlodf/network.hpp"

namespace gridlodf {

struct CheckResult {
  std::string name;
  bool skipped = false;
  bool passed = true;
  std::size_t cases = 0;
  double worst = 0.0;  // largest observed error relative to its scale
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string table() const;
  void merge(const VerifyReport& other);
};

// Runs every closed-form identity against its oracle: tree and 2-forest sums
// (only within the enumeration guard), pseudoinverse routes, effective
// reactance, outage factors against a direct re-solve and cut-set outages
// against island re-solves. `rng` picks the sampled outage sets.
VerifyReport verify_network(const Network& net, std::mt19937_64& rng);

// `trials` random connected networks with the given bus and line counts.
VerifyReport verify_random(Index buses, Index lines, std::uint64_t seed, int trials);

}  // namespace gridlodf
