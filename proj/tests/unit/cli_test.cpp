#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "fixtures.hpp"
#include "gridlodf/error.hpp"
#include "gridlodf_cli/commands.hpp"
#include "json.hpp"

namespace gridlodf::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "gridlodf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return testing::data_path(name).string(); }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("gridlodf_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& content = {}) const {
    const fs::path p = path_ / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

TEST(Cli, BlocksButterfly) {
  const Result r = invoke({"blocks", "--case", data("butterfly.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["cells"].size(), 2u);
  EXPECT_EQ(doc["cells"][0].size(), 3u);
  EXPECT_EQ(doc["cells"][1].size(), 3u);
  EXPECT_EQ(doc["cut_vertices"], json::array({3}));
  EXPECT_TRUE(doc["bridges"].empty());
}

TEST(Cli, BlocksPathIsAllBridges) {
  const Result r = invoke({"blocks", "--case", data("path.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["cells"].empty());
  EXPECT_FALSE(doc["bridges"].empty());
}

TEST(Cli, BlocksCase118) {
  const Result r = invoke({"blocks", "--case", data("case118.m"), "--collapse-dangling"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["cells"].size(), 2u);
  EXPECT_EQ(doc["cells"][0].size(), 13u);
  EXPECT_EQ(doc["cells"][1].size(), 164u);
}

TEST(Cli, LodfTriangleCsv) {
  const Result r = invoke({"lodf", "--case", data("triangle.json")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "line,1-2#0,1-3#0,3-2#0");
  for (std::string row; std::getline(lines, row);) {
    std::istringstream cells(row);
    std::string cell;
    std::getline(cells, cell, ',');
    while (std::getline(cells, cell, ',')) EXPECT_NEAR(std::stod(cell), 1.0, 1e-12);
  }
}

TEST(Cli, LodfTwoCellJsonHasZeroCrossBlocks) {
  const Result r = invoke({"lodf", "--case", data("two_cell.json"), "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["orientation"], "tail->head");
  EXPECT_EQ(doc["bridges"], json::array({"3-4#0"}));
  const auto& k = doc["lodf"];
  ASSERT_EQ(k.size(), 7u);
  // Sorted order: bridge, then the two triangles.
  for (std::size_t r0 = 1; r0 < 4; ++r0) {
    for (std::size_t c0 = 4; c0 < 7; ++c0) {
      EXPECT_LT(std::abs(k[r0][c0].get<double>()), 1e-9);
      EXPECT_LT(std::abs(k[c0][r0].get<double>()), 1e-9);
    }
  }
}

TEST(Cli, OutageBridgeGivesTwoIslands) {
  const Result r = invoke({"outage", "--case", data("two_cell.json"), "--trip", "3-4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["islands"].size(), 2u);
  for (const auto& island : doc["islands"]) {
    EXPECT_EQ(island["tie"].size(), 1u);
    EXPECT_EQ(island["delta_f"].size(), 3u);
  }
}

TEST(Cli, OutageNonCutHasNoTies) {
  const Result r = invoke({"outage", "--case", data("butterfly.json"), "--trip", "1-2,4-5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["islands"].size(), 1u);
  EXPECT_TRUE(doc["islands"][0]["tie"].empty());
  EXPECT_EQ(doc["islands"][0]["internal_tripped"], json::array({"1-2#0", "4-5#0"}));
  for (const auto& d : doc["islands"][0]["delta_f"]) EXPECT_EQ(d["tie_term"].get<double>(), 0.0);
}

TEST(Cli, OutageZeroFlowWarns) {
  const Result r = invoke({"outage", "--case", data("zero_flow_square.json"), "--trip", "2-4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("warning: tripped line 2-4#0 carries no pre-outage flow"), std::string::npos);
  for (const auto& d : json::parse(r.out)["islands"][0]["delta_f"]) {
    EXPECT_LE(std::abs(d["value"].get<double>()), 1e-12);
  }
}

TEST(Cli, OutageUnknownLine) {
  const Result r = invoke({"outage", "--case", data("triangle.json"), "--trip", "1-9"});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("no line joins 1-9"), std::string::npos);
}

TEST(Cli, VerifyTriangle) {
  const Result r = invoke({"verify", "--case", data("triangle.json")});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  EXPECT_NE(r.out.find("matrix_tree"), std::string::npos);
}

TEST(Cli, VerifyRandom) {
  const Result r = invoke({"verify", "--random", "6", "9", "--seed", "1", "--trials", "50"});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, NegativeReactanceIsAnInputError) {
  TempDir tmp;
  const fs::path bad = tmp.file("bad.json", R"({"buses":[{"id":1,"p":1,"slack":true},{"id":2,"p":-1}],
    "lines":[{"from":1,"to":2,"x":-0.5}]})");
  const Result r = invoke({"verify", "--case", bad.string()});
  EXPECT_EQ(r.code, kExitInputError);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(invoke({}).code, kExitInputError);
  EXPECT_EQ(invoke({"blocks", "--case", "/nonexistent/case.json"}).code, kExitInputError);
  EXPECT_EQ(invoke({"blocks", "--case", data("triangle.json"), "--format", "xml"}).code, kExitInputError);
  EXPECT_EQ(invoke({"blocks", "--case", data("triangle.json"), "--format", "dot"}).code, kExitInputError);
  EXPECT_EQ(invoke({"verify"}).code, kExitInputError);
  EXPECT_EQ(invoke({"influence", "--case", data("triangle.json"), "--threshold", "-1"}).code,
            kExitInputError);
  EXPECT_EQ(invoke({"lodf", "--case", data("triangle.json"), "--alpha", "/nonexistent.json"}).code,
            kExitInputError);
}

TEST(Cli, InfluenceDot) {
  const Result empty = invoke({"influence", "--case", data("triangle.json"), "--threshold", "2"});
  ASSERT_EQ(empty.code, kExitOk) << empty.err;
  EXPECT_EQ(empty.out.find("--"), std::string::npos);
  EXPECT_EQ(empty.out.rfind("graph influence {", 0), 0u);

  const Result two = invoke({"influence", "--case", data("two_cell.json")});
  ASSERT_EQ(two.code, kExitOk) << two.err;
  const std::vector<std::string> a{"\"1-2#0\"", "\"2-3#0\"", "\"3-1#0\""};
  const std::vector<std::string> b{"\"4-5#0\"", "\"5-6#0\"", "\"6-4#0\""};
  std::istringstream lines(two.out);
  for (std::string line; std::getline(lines, line);) {
    if (line.find(" -- ") == std::string::npos) continue;
    bool has_a = false;
    bool has_b = false;
    for (const auto& s : a) has_a = has_a || line.find(s) != std::string::npos;
    for (const auto& s : b) has_b = has_b || line.find(s) != std::string::npos;
    EXPECT_FALSE(has_a && has_b) << line;
  }
}

TEST(Cli, OutWritesAtomically) {
  TempDir tmp;
  const fs::path target = tmp.path() / "k.csv";
  const Result r = invoke({"lodf", "--case", data("triangle.json"), "--out", target.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_TRUE(fs::exists(target));
  EXPECT_FALSE(fs::exists(target.string() + ".tmp"));
  std::ifstream f(target);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "line,1-2#0,1-3#0,3-2#0");
}

TEST(Cli, AlphaFile) {
  TempDir tmp;
  const fs::path alpha = tmp.file("alpha.json", R"({"1": 1.0, "2": 0.0, "3": 0.0, "4": 0.0, "5": 0.0, "6": 1.0})");
  const Result r = invoke({"outage", "--case", data("two_cell.json"), "--trip", "3-4", "--alpha", alpha.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["islands"].size(), 2u);

  const fs::path broken = tmp.file("broken.json", R"({"one": 1.0})");
  EXPECT_EQ(invoke({"lodf", "--case", data("two_cell.json"), "--alpha", broken.string()}).code,
            kExitInputError);
}

TEST(ResolveLine, ParallelLines) {
  const Network net = testing::make_network(3, {{1, 2}, {2, 1, 2.0}, {2, 3}}, 1);
  EXPECT_EQ(resolve_line(net, "2-3"), 2);
  EXPECT_EQ(resolve_line(net, "3-2"), 2);
  EXPECT_EQ(resolve_line(net, "1-2#0"), 0);
  EXPECT_EQ(resolve_line(net, "1-2#1"), 1);
  EXPECT_THROW((void)resolve_line(net, "1-2"), Error);
  EXPECT_THROW((void)resolve_line(net, "1-2#2"), Error);
  EXPECT_THROW((void)resolve_line(net, "1_2"), Error);
  EXPECT_THROW((void)resolve_line(net, "1-2x"), Error);
}

}  // namespace
}  // namespace gridlodf::cli
