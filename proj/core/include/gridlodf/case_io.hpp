#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridlodf/error.hpp"
#include "gridlodf/network.hpp"

namespace gridlodf {

enum class CaseFormat { kNativeJson, kMatpower };

struct CaseIssue {
  ErrorCode code;
  std::string message;
};

struct CaseDiagnostics {
  std::vector<std::string> warnings;
  std::vector<CaseIssue> errors;
};

// `network` is empty whenever diagnostics.errors is non-empty.
struct ParsedCase {
  std::optional<Network> network;
  CaseDiagnostics diagnostics;
};

// Native JSON:
//   {"buses":[{"id":1,"p":0.5,"slack":true}, ...], "lines":[{"from":1,"to":2,"x":0.1}, ...]}
// MATPOWER subset: mpc.baseMVA, and the bus (id, type, Pd), gen (bus, Pg[, status]) and
// branch (from, to, x[, status]) matrices. Out-of-service branches are dropped, the
// type-3 bus is the slack and injections are (Pg - Pd) / baseMVA.
//
// Throws ParseError on malformed text. Validation problems (duplicate ids,
// non-positive reactance, disconnection, ...) are reported in diagnostics.errors.
ParsedCase parse_case(std::string_view text, CaseFormat format);

// Reads and parses a file; the format defaults to the extension (".m" is MATPOWER,
// anything else native JSON).
ParsedCase read_case_file(const std::filesystem::path& path,
                          std::optional<CaseFormat> format = std::nullopt);

CaseFormat format_for_path(const std::filesystem::path& path);

// Returns the network or throws Error carrying the first structured error code.
Network require_network(ParsedCase parsed);

std::string to_native_json(const Network& net);

}  // namespace gridlodf
