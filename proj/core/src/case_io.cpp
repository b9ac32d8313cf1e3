#include "gridlodf/case_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace gridlodf {
namespace {

using json = nlohmann::json;

struct Position {
  std::size_t line = 1;
  std::size_t column = 1;
};

Position position_at(std::string_view text, std::size_t offset) {
  Position pos;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++pos.line;
      pos.column = 1;
    } else {
      ++pos.column;
    }
  }
  return pos;
}

// Collects every validation problem before attempting construction.
ParsedCase build_case(std::vector<Bus> buses, std::vector<Line> lines, CaseDiagnostics diag) {
  std::set<int> ids;
  int slack_count = 0;
  for (const Bus& bus : buses) {
    if (!ids.insert(bus.id).second) {
      diag.errors.push_back({ErrorCode::kDuplicateBus,
                             "bus id " + std::to_string(bus.id) + " appears more than once"});
    }
    if (bus.is_slack) ++slack_count;
  }
  if (buses.size() < 2) {
    diag.errors.push_back({ErrorCode::kTooFewBuses, "a network needs at least two buses"});
  }
  if (slack_count == 0 && !buses.empty()) {
    buses.front().is_slack = true;
    diag.warnings.push_back("no slack bus given; using bus " + std::to_string(buses.front().id));
  } else if (slack_count > 1) {
    diag.errors.push_back(
        {ErrorCode::kMultipleSlack, std::to_string(slack_count) + " buses are marked slack"});
  }
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const Line& line = lines[k];
    const std::string name = "line " + std::to_string(k) + " (" + std::to_string(line.tail) + "-" +
                             std::to_string(line.head) + ")";
    if (!ids.contains(line.tail) || !ids.contains(line.head)) {
      diag.errors.push_back({ErrorCode::kUnknownBus, name + " references an unknown bus"});
    }
    if (line.tail == line.head) {
      diag.errors.push_back({ErrorCode::kSelfLoop, name + " is a self loop"});
    }
    if (!(line.reactance > 0.0) || !std::isfinite(line.reactance)) {
      std::ostringstream msg;
      msg << name << " has non-positive reactance " << line.reactance;
      diag.errors.push_back({ErrorCode::kNonpositiveReactance, msg.str()});
    }
  }
  double imbalance = 0.0;
  for (const Bus& bus : buses) imbalance += bus.injection;
  if (std::abs(imbalance) > 1e-9) {
    std::ostringstream msg;
    msg << "injections sum to " << imbalance << " instead of 0; flow solves will need rebalancing";
    diag.warnings.push_back(msg.str());
  }

  ParsedCase result{std::nullopt, std::move(diag)};
  if (!result.diagnostics.errors.empty()) return result;
  try {
    result.network.emplace(std::move(buses), std::move(lines));
  } catch (const Error& e) {
    result.diagnostics.errors.push_back({e.code(), e.what()});
  }
  return result;
}

template <typename T>
T required(const json& object, const char* key, const char* what, std::size_t index) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(std::string(what) + " " + std::to_string(index) + " lacks \"" + key + "\"", 0,
                     0);
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(what) + " " + std::to_string(index) + " has a malformed \"" +
                         key + "\"",
                     0, 0);
  }
}

ParsedCase parse_native_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Position pos = position_at(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError("invalid JSON", pos.line, pos.column);
  }
  if (!doc.is_object() || !doc.contains("buses") || !doc["buses"].is_array() ||
      !doc.contains("lines") || !doc["lines"].is_array()) {
    throw ParseError("expected an object with \"buses\" and \"lines\" arrays", 1, 1);
  }
  std::vector<Bus> buses;
  for (std::size_t k = 0; k < doc["buses"].size(); ++k) {
    const json& b = doc["buses"][k];
    if (!b.is_object()) throw ParseError("bus " + std::to_string(k) + " is not an object", 0, 0);
    Bus bus;
    bus.id = required<int>(b, "id", "bus", k);
    bus.injection = b.contains("p") ? required<double>(b, "p", "bus", k) : 0.0;
    bus.is_slack = b.contains("slack") ? required<bool>(b, "slack", "bus", k) : false;
    buses.push_back(bus);
  }
  std::vector<Line> lines;
  for (std::size_t k = 0; k < doc["lines"].size(); ++k) {
    const json& l = doc["lines"][k];
    if (!l.is_object()) throw ParseError("line " + std::to_string(k) + " is not an object", 0, 0);
    lines.push_back(Line::from_reactance(required<int>(l, "from", "line", k),
                                         required<int>(l, "to", "line", k),
                                         required<double>(l, "x", "line", k)));
  }
  return build_case(std::move(buses), std::move(lines), {});
}

// Minimal scanner for the numeric matrix blocks of a MATPOWER case file.
class MatpowerScanner {
 public:
  explicit MatpowerScanner(std::string_view text) : text_(text) {}

  struct Matrix {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> row_lines;
  };

  void scan() {
    while (skip_space_and_comments()) {
      if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        std::string ident = identifier();
        std::string field;
        if (peek() == '.') {
          advance();
          field = identifier();
        }
        skip_blanks();
        if (peek() == '=' && !field.empty()) {
          advance();
          skip_blanks();
          if (field == "baseMVA") {
            base_mva_ = number();
          } else if (peek() == '[' && (field == "bus" || field == "gen" || field == "branch")) {
            matrices_[field] = matrix();
          }
        }
      }
      skip_statement();
    }
  }

  std::optional<double> base_mva() const { return base_mva_; }
  const Matrix* find(const std::string& name) const {
    auto it = matrices_.find(name);
    return it == matrices_.end() ? nullptr : &it->second;
  }
  std::size_t line() const { return line_; }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_comment() {
    while (!at_end() && peek() != '\n') advance();
  }
  void skip_blanks() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
  }
  bool skip_space_and_comments() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else if (peek() == '%' || peek() == '#') {
        skip_comment();
      } else {
        return true;
      }
    }
    return false;
  }
  // Skips to the end of the current statement; quoted strings may contain ';'.
  void skip_statement() {
    bool quoted = false;
    while (!at_end()) {
      char c = peek();
      if (c == '\'') quoted = !quoted;
      if (!quoted && c == '%') {
        skip_comment();
        continue;
      }
      if (!quoted && (c == ';' || c == '\n')) {
        advance();
        return;
      }
      advance();
    }
  }
  std::string identifier() {
    std::string out;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      out.push_back(peek());
      advance();
    }
    return out;
  }
  double number() {
    const std::size_t start = pos_;
    const std::size_t line = line_;
    const std::size_t column = column_;
    while (!at_end()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' ||
          c == 'e' || c == 'E') {
        advance();
      } else {
        break;
      }
    }
    std::string token(text_.substr(start, pos_ - start));
    if (token.empty()) {
      throw ParseError(std::string("expected a number, found '") + peek() + "'", line, column);
    }
    double value = 0.0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size()) {
      throw ParseError("malformed number '" + token + "'", line, column);
    }
    return value;
  }
  Matrix matrix() {
    const std::size_t open_line = line_;
    const std::size_t open_column = column_;
    advance();  // '['
    Matrix m;
    std::vector<double> row;
    std::size_t row_line = line_;
    auto finish_row = [&] {
      if (!row.empty()) {
        m.rows.push_back(std::move(row));
        m.row_lines.push_back(row_line);
        row.clear();
      }
    };
    while (true) {
      if (at_end()) throw ParseError("unterminated matrix", open_line, open_column);
      char c = peek();
      if (c == ']') {
        advance();
        finish_row();
        return m;
      }
      if (c == ';' || c == '\n') {
        advance();
        finish_row();
        row_line = line_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
        advance();
      } else if (c == '%') {
        skip_comment();
      } else if (c == '.' && pos_ + 2 < text_.size() && text_.substr(pos_, 3) == "...") {
        skip_comment();
        advance();
      } else {
        if (row.empty()) row_line = line_;
        row.push_back(number());
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  std::optional<double> base_mva_;
  std::map<std::string, Matrix> matrices_;
};

void check_width(const MatpowerScanner::Matrix& m, const char* name, std::size_t needed) {
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    if (m.rows[r].size() < needed) {
      throw ParseError(std::string("mpc.") + name + " row has " + std::to_string(m.rows[r].size()) +
                           " columns, need at least " + std::to_string(needed),
                       m.row_lines[r], 1);
    }
  }
}

std::size_t max_width(const MatpowerScanner::Matrix& m) {
  std::size_t width = 0;
  for (const auto& row : m.rows) width = std::max(width, row.size());
  return width;
}

ParsedCase parse_matpower(std::string_view text) {
  MatpowerScanner scanner(text);
  scanner.scan();
  const auto* bus = scanner.find("bus");
  const auto* branch = scanner.find("branch");
  const auto* gen = scanner.find("gen");
  if (bus == nullptr) throw ParseError("missing mpc.bus matrix", scanner.line(), 1);
  if (branch == nullptr) throw ParseError("missing mpc.branch matrix", scanner.line(), 1);
  check_width(*bus, "bus", 3);
  check_width(*branch, "branch", 4);
  if (gen != nullptr) check_width(*gen, "gen", 2);

  CaseDiagnostics diag;
  double base = 1.0;
  if (scanner.base_mva() && *scanner.base_mva() > 0.0) {
    base = *scanner.base_mva();
  } else {
    diag.warnings.push_back("no baseMVA given; power values used as-is");
  }
  auto note_ignored = [&](const MatpowerScanner::Matrix& m, const char* name, std::size_t used) {
    if (max_width(m) > used) {
      diag.warnings.push_back(std::string("mpc.") + name + ": ignoring " +
                              std::to_string(max_width(m) - used) + " column(s) unused by DC flow");
    }
  };
  note_ignored(*bus, "bus", 3);
  note_ignored(*branch, "branch", 11);
  if (gen != nullptr) note_ignored(*gen, "gen", 8);

  std::vector<Bus> buses;
  std::set<int> isolated;
  for (const auto& row : bus->rows) {
    const int id = static_cast<int>(row[0]);
    const int type = static_cast<int>(row[1]);
    if (type == 4) {
      isolated.insert(id);
      diag.warnings.push_back("bus " + std::to_string(id) + " is isolated (type 4); skipped");
      continue;
    }
    buses.push_back(Bus{id, -row[2] / base, type == 3});
  }
  if (gen != nullptr) {
    for (std::size_t r = 0; r < gen->rows.size(); ++r) {
      const auto& row = gen->rows[r];
      if (row.size() >= 8 && row[7] <= 0.0) continue;
      const int id = static_cast<int>(row[0]);
      auto it = std::find_if(buses.begin(), buses.end(), [&](const Bus& b) { return b.id == id; });
      if (it == buses.end()) {
        if (isolated.contains(id)) continue;
        diag.errors.push_back(
            {ErrorCode::kUnknownBus, "generator on line " + std::to_string(gen->row_lines[r]) +
                                         " sits at unknown bus " + std::to_string(id)});
        continue;
      }
      it->injection += row[1] / base;
    }
  }
  std::vector<Line> lines;
  std::size_t dropped = 0;
  for (const auto& row : branch->rows) {
    if (row.size() >= 11 && row[10] == 0.0) {
      ++dropped;
      continue;
    }
    lines.push_back(Line{0, static_cast<int>(row[0]), static_cast<int>(row[1]),
                         row[3] > 0.0 ? 1.0 / row[3] : 0.0, row[3]});
  }
  if (dropped > 0) {
    diag.warnings.push_back(std::to_string(dropped) + " out-of-service branch(es) dropped");
  }
  return build_case(std::move(buses), std::move(lines), std::move(diag));
}

}  // namespace

ParsedCase parse_case(std::string_view text, CaseFormat format) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError("empty case text", 1, 1);
  }
  return format == CaseFormat::kNativeJson ? parse_native_json(text) : parse_matpower(text);
}

CaseFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".m" ? CaseFormat::kMatpower : CaseFormat::kNativeJson;
}

ParsedCase read_case_file(const std::filesystem::path& path, std::optional<CaseFormat> format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidArgument, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_case(buffer.str(), format.value_or(format_for_path(path)));
}

Network require_network(ParsedCase parsed) {
  if (!parsed.diagnostics.errors.empty()) {
    const CaseIssue& first = parsed.diagnostics.errors.front();
    throw Error(first.code, first.message);
  }
  return std::move(*parsed.network);
}

std::string to_native_json(const Network& net) {
  json doc;
  doc["buses"] = json::array();
  for (const Bus& bus : net.buses()) {
    json b = {{"id", bus.id}, {"p", bus.injection}};
    if (bus.is_slack) b["slack"] = true;
    doc["buses"].push_back(std::move(b));
  }
  doc["lines"] = json::array();
  for (const Line& line : net.lines()) {
    doc["lines"].push_back({{"from", line.tail}, {"to", line.head}, {"x", line.reactance}});
  }
  return doc.dump(2);
}

}  // namespace gridlodf
