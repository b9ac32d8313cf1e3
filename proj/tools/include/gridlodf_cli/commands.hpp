#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gridlodf/network.hpp"

namespace gridlodf::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitInputError = 2,
  kExitNumericalError = 3,
};

enum class OutputFormat { kJson, kCsv, kDot };

struct RunConfig {
  std::string subcommand;
  std::string case_path;
  std::optional<std::string> case_format;  // "json" or "matpower"
  std::optional<std::string> out_path;     // stdout when absent
  std::optional<OutputFormat> format;
  double threshold = 0.005;
  std::uint64_t seed = 1;
  std::string alpha = "uniform";           // or a JSON file {"bus id": weight}
  std::vector<std::string> trips;          // "i-j" or "i-j#k"
  bool balance_slack = false;
  bool collapse_dangling = false;
  std::optional<std::pair<Index, Index>> random;  // verify on random (buses, lines)
  int trials = 50;
};

// Parses argv and dispatches. Never throws; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int cmd_blocks(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_lodf(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_outage(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_influence(const RunConfig& config, std::ostream& out, std::ostream& err);

// Resolves "i-j" (must be unambiguous) or "i-j#k" to a line id.
Index resolve_line(const Network& net, const std::string& text);

}  // namespace gridlodf::cli
