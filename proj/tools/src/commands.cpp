#include "gridlodf_cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "gridlodf/case_io.hpp"
#include "gridlodf/error.hpp"
#include "gridlodf/lodf_matrix.hpp"
#include "gridlodf/outage.hpp"
#include "gridlodf/topology.hpp"
#include "gridlodf/verify.hpp"
#include "json.hpp"

namespace gridlodf::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularReduced:
    case ErrorCode::kSingularOutage:
    case ErrorCode::kDualFormMismatch:
      return kExitNumericalError;
    default:
      return kExitInputError;
  }
}

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what();
    if (e.line() != 0) err << " (line " << e.line() << ", column " << e.column() << ")";
    err << '\n';
    return kExitInputError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (!config.out_path) {
    out << text;
    return;
  }
  const fs::path target(*config.out_path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::kInvalidArgument, "cannot write " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw Error(ErrorCode::kInvalidArgument, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kInvalidArgument, "cannot replace " + target.string());
  }
}

Network load_network(const RunConfig& config, std::ostream& err) {
  if (config.case_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--case is required");
  std::optional<CaseFormat> format;
  if (config.case_format) {
    if (*config.case_format == "json") format = CaseFormat::kNativeJson;
    else if (*config.case_format == "matpower") format = CaseFormat::kMatpower;
    else throw Error(ErrorCode::kInvalidArgument, "unknown case format " + *config.case_format);
  }
  ParsedCase parsed = read_case_file(config.case_path, format);
  for (const auto& w : parsed.diagnostics.warnings) err << "warning: " << w << '\n';
  for (const auto& e : parsed.diagnostics.errors) {
    err << "error: " << to_string(e.code) << ": " << e.message << '\n';
  }
  Network net = require_network(std::move(parsed));
  if (config.collapse_dangling) {
    CollapsedNetwork collapsed = collapse_dangling(net);
    if (!collapsed.removed_buses.empty()) {
      err << "note: collapsed " << collapsed.removed_buses.size() << " dangling buses\n";
    }
    net = std::move(collapsed.kept.network);
  }
  if (config.balance_slack) net = balance_at_slack(net);
  return net;
}

std::optional<Eigen::VectorXd> load_weights(const RunConfig& config, const Network& net,
                                            std::ostream& err) {
  if (config.alpha == "uniform") return std::nullopt;
  std::ifstream f(config.alpha);
  if (!f) throw Error(ErrorCode::kBadAlpha, "cannot read participation file " + config.alpha);
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kBadAlpha, std::string("participation file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kBadAlpha, "participation file must be an object");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(net.bus_count());
  for (const auto& [key, value] : doc.items()) {
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kBadAlpha, "participation key '" + key + "' is not a bus id");
    }
    if (!value.is_number()) throw Error(ErrorCode::kBadAlpha, "weight for bus " + key);
    const auto bus = net.find_bus(id);
    if (!bus) {
      err << "warning: participation weight for absent bus " << id << " ignored\n";
      continue;
    }
    w[*bus] = value.get<double>();
  }
  return w;
}

OutputFormat format_or(const RunConfig& config, OutputFormat fallback,
                       std::initializer_list<OutputFormat> allowed) {
  const OutputFormat f = config.format.value_or(fallback);
  for (OutputFormat a : allowed) {
    if (a == f) return f;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "output format not supported by '" + config.subcommand + "'");
}

json diagnostics_json(const Network& net, const FactorSet& factors) {
  json out = json::array();
  for (const auto& d : factors.diagnostics) {
    out.push_back({{"line", net.line_label(d.line)},
                   {"code", std::string(to_string(d.code))},
                   {"message", d.message}});
  }
  return out;
}

void report_diagnostics(const Network& net, const FactorSet& factors, std::ostream& err) {
  for (const auto& d : factors.diagnostics) {
    err << "column " << net.line_label(d.line) << ": " << to_string(d.code) << ": " << d.message
        << '\n';
  }
}

}  // namespace

Index resolve_line(const Network& net, const std::string& text) {
  int a = 0;
  int b = 0;
  int k = -1;
  char tail = 0;
  const bool indexed = std::sscanf(text.c_str(), "%d-%d#%d%c", &a, &b, &k, &tail) == 3;
  if (!indexed && std::sscanf(text.c_str(), "%d-%d%c", &a, &b, &tail) != 2) {
    throw Error(ErrorCode::kInvalidArgument, "cannot parse line '" + text + "', expected i-j or i-j#k");
  }
  std::vector<Index> matches;
  for (const Line& l : net.lines()) {
    if ((l.tail == a && l.head == b) || (l.tail == b && l.head == a)) matches.push_back(l.id);
  }
  if (matches.empty()) throw Error(ErrorCode::kInvalidArgument, "no line joins " + text);
  if (indexed) {
    if (k < 0 || k >= static_cast<int>(matches.size())) {
      throw Error(ErrorCode::kInvalidArgument, "no parallel line " + text);
    }
    return matches[static_cast<std::size_t>(k)];
  }
  if (matches.size() > 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "'" + text + "' matches parallel lines; use " + text + "#k");
  }
  return matches.front();
}

int cmd_blocks(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    format_or(config, OutputFormat::kJson, {OutputFormat::kJson});
    const Network net = load_network(config, err);
    emit(config, to_json(block_decomposition(net)) + "\n", out);
    return kExitOk;
  });
}

int cmd_lodf(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const OutputFormat format =
        format_or(config, OutputFormat::kCsv, {OutputFormat::kCsv, OutputFormat::kJson});
    const Network net = load_network(config, err);
    const FactorSet factors = full_lodf_matrix(net, load_weights(config, net, err));
    report_diagnostics(net, factors, err);
    if (format == OutputFormat::kCsv) {
      emit(config, lodf_csv(net, factors), out);
      return kExitOk;
    }
    json doc;
    doc["orientation"] = factors.orientation;
    doc["order"] = json::array();
    for (Index l : factors.order) doc["order"].push_back(net.line_label(l));
    const Eigen::MatrixXd sorted = factors.block_sorted();
    doc["lodf"] = json::array();
    for (Index r = 0; r < sorted.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < sorted.cols(); ++c) row.push_back(sorted(r, c));
      doc["lodf"].push_back(std::move(row));
    }
    doc["bridges"] = json::array();
    for (Index l : factors.order) {
      if (factors.bridge_column[static_cast<std::size_t>(l)]) {
        doc["bridges"].push_back(net.line_label(l));
      }
    }
    doc["diagnostics"] = diagnostics_json(net, factors);
    emit(config, doc.dump(2) + "\n", out);
    return kExitOk;
  });
}

int cmd_outage(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    format_or(config, OutputFormat::kJson, {OutputFormat::kJson});
    const Network net = load_network(config, err);
    CutSetOutage outage;
    for (const std::string& t : config.trips) outage.tripped.push_back(resolve_line(net, t));
    if (outage.tripped.empty()) throw Error(ErrorCode::kInvalidArgument, "--trip is required");
    const std::vector<IslandModel> islands =
        classify_cut(net, outage, load_weights(config, net, err));
    std::vector<FlowChangeReport> reports;
    for (const IslandModel& island : islands) {
      for (const std::string& w : island.warnings) err << "warning: " << w << '\n';
      reports.push_back(cutset_flow_change(island));
    }
    emit(config, outage_report_json(net, islands, reports) + "\n", out);
    return kExitOk;
  });
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    format_or(config, OutputFormat::kCsv, {OutputFormat::kCsv});
    VerifyReport report;
    if (config.random) {
      if (config.trials < 1) throw Error(ErrorCode::kInvalidArgument, "--trials must be >= 1");
      report = verify_random(config.random->first, config.random->second, config.seed,
                             config.trials);
    } else {
      const Network net = load_network(config, err);
      std::mt19937_64 rng(config.seed);
      report = verify_network(net, rng);
    }
    const bool ok = report.passed();
    emit(config, report.table() + (ok ? "all checks passed\n" : "verification FAILED\n"), out);
    return ok ? kExitOk : kExitVerifyFailed;
  });
}

int cmd_influence(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const OutputFormat format =
        format_or(config, OutputFormat::kDot, {OutputFormat::kDot, OutputFormat::kJson});
    if (!(config.threshold >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "--threshold must be >= 0");
    }
    const Network net = load_network(config, err);
    const FactorSet factors = full_lodf_matrix(net, load_weights(config, net, err));
    report_diagnostics(net, factors, err);
    const std::vector<InfluenceEdge> edges = influence_graph(factors.lodf, config.threshold);
    if (format == OutputFormat::kDot) {
      emit(config, influence_dot(net, edges), out);
      return kExitOk;
    }
    json doc;
    doc["threshold"] = config.threshold;
    doc["edges"] = json::array();
    for (const InfluenceEdge& e : edges) {
      doc["edges"].push_back(
          {{"a", net.line_label(e.a)}, {"b", net.line_label(e.b)}, {"weight", e.weight}});
    }
    emit(config, doc.dump(2) + "\n", out);
    return kExitOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DC power flow outage factors and failure localization"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format;
  std::string trips;
  std::vector<Index> random;

  auto common = [&](CLI::App* sub, bool needs_case) {
    auto* opt = sub->add_option("--case", config.case_path, "case file (.json or MATPOWER .m)");
    if (needs_case) opt->required();
    sub->add_option("--case-format", config.case_format, "json or matpower (default: by extension)");
    sub->add_option("--out", config.out_path, "output file, written atomically (default: stdout)");
    sub->add_option("--format", format, "json, csv or dot");
    sub->add_flag("--balance-slack", config.balance_slack,
                  "set the slack injection so injections sum to zero");
    sub->add_flag("--collapse-dangling", config.collapse_dangling,
                  "fold buses hanging off single lines into their neighbours");
  };
  auto weighted = [&](CLI::App* sub) {
    sub->add_option("--alpha", config.alpha, "'uniform' or a JSON file {\"bus id\": weight}");
  };

  auto* blocks = app.add_subcommand("blocks", "block decomposition as JSON");
  common(blocks, true);
  auto* lodf = app.add_subcommand("lodf", "full LODF matrix, block sorted");
  common(lodf, true);
  weighted(lodf);
  auto* outage = app.add_subcommand("outage", "flow change report for a set of tripped lines");
  common(outage, true);
  weighted(outage);
  outage->add_option("--trip", trips, "comma separated lines \"i-j\" or \"i-j#k\"")->required();
  auto* verify = app.add_subcommand("verify", "run the oracle suite");
  common(verify, false);
  verify->add_option("--random", random, "random networks: BUSES LINES")->expected(2);
  verify->add_option("--seed", config.seed, "random seed");
  verify->add_option("--trials", config.trials, "number of random networks");
  auto* influence = app.add_subcommand("influence", "influence graph over lines");
  common(influence, true);
  weighted(influence);
  influence->add_option("--threshold", config.threshold, "minimum |K| for an edge")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInputError;
  }

  config.subcommand = app.get_subcommands().front()->get_name();
  if (!format.empty()) {
    if (format == "json") config.format = OutputFormat::kJson;
    else if (format == "csv") config.format = OutputFormat::kCsv;
    else if (format == "dot") config.format = OutputFormat::kDot;
    else {
      err << "error: unknown --format " << format << '\n';
      return kExitInputError;
    }
  }
  if (!random.empty()) config.random = std::make_pair(random[0], random[1]);
  std::stringstream ts(trips);
  for (std::string item; std::getline(ts, item, ',');) {
    if (!item.empty()) config.trips.push_back(item);
  }

  if (config.subcommand == "blocks") return cmd_blocks(config, out, err);
  if (config.subcommand == "lodf") return cmd_lodf(config, out, err);
  if (config.subcommand == "outage") return cmd_outage(config, out, err);
  if (config.subcommand == "verify") {
    if (!config.random && config.case_path.empty()) {
      err << "error: verify needs --case or --random BUSES LINES\n";
      return kExitInputError;
    }
    return cmd_verify(config, out, err);
  }
  return cmd_influence(config, out, err);
}

}  // namespace gridlodf::cli
