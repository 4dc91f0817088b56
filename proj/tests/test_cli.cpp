#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "strlogic/cli.hpp"
#include <json.hpp>

namespace {

const std::string source_dir = STRLOGIC_SOURCE_DIR;

struct Outcome {
  int code;
  std::string out, err;
};

// "@name" expands to a file under data/.
Outcome run(std::vector<std::string> args) {
  std::vector<std::string> full{"strlogic"};
  for (auto& a : args) full.push_back(a.rfind('@', 0) == 0 ? source_dir + "/data/" + a.substr(1) : a);
  std::vector<const char*> argv;
  for (const auto& a : full) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = strlogic::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(source_dir + "/tests/golden/" + name + ".txt");
  EXPECT_TRUE(in.good()) << "missing golden file " << name;
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct GoldenCase {
  std::string name;
  std::vector<std::string> args;
  int code;
};

class Golden : public ::testing::TestWithParam<GoldenCase> {};

} // namespace

TEST_P(Golden, MatchesRecordedOutput) {
  const auto& c = GetParam();
  Outcome o = run(c.args);
  EXPECT_EQ(o.code, c.code) << o.err;
  EXPECT_EQ(o.out, golden(c.name));
}

INSTANTIATE_TEST_SUITE_P(
    Cli, Golden,
    ::testing::Values(
        GoldenCase{"eval_true", {"eval", "-f", "@f.fol", "-w", "ab"}, 0},
        GoldenCase{"eval_false_json", {"--json", "eval", "-f", "@f.fol", "-w", "bb"}, 1},
        GoldenCase{"eval_assign", {"eval", "-t", "P_a(x) & x < max", "--sigma", "(a,b)", "-w", "ab", "--assign", "x=1"}, 0},
        GoldenCase{"eval_grammar", {"eval", "-t", "Q[D] x. P_a(x)", "--sigma", "(a,b)", "--grammar", "D=" + source_dir + "/data/dyck1.cfg", "-w", "abab"}, 0},
        GoldenCase{"transform_marks", {"transform", "-f", "@marks.fol", "--target", "(1,2,0)", "-w", "abab"}, 0},
        GoldenCase{"aperiodic_parity", {"aperiodic", "-a", "@parity.dfa"}, 1},
        GoldenCase{"aperiodic_astar_json", {"--json", "aperiodic", "-a", "@astar_bstar.nfa"}, 0},
        GoldenCase{"wp_z3_true", {"wp", "-g", "@z3.gpd", "-w", "abc"}, 0},
        GoldenCase{"wp_z3_false", {"wp", "-g", "@z3.gpd", "-w", "ab"}, 1},
        GoldenCase{"cfl_member", {"cfl", "member", "-g", "@dyck1.cfg", "-w", "(())"}, 0},
        GoldenCase{"cfl_lengths", {"cfl", "lengths", "-g", "@seven_plus_fives.cfg", "--max", "20"}, 0},
        GoldenCase{"cfl_fit", {"cfl", "fit", "-g", "@seven_plus_fives.cfg", "--max", "40"}, 0},
        GoldenCase{"nivat_majority", {"nivat", "-f", "@majority.fol", "--check", "5"}, 0},
        GoldenCase{"nivat_balanced_json", {"--json", "nivat", "-f", "@balanced.fol", "-B", "Eq01", "--check", "5"}, 0},
        GoldenCase{"witness_lm", {"witness", "lm", "-w", "00110", "-l", "3", "-m", "1"}, 0},
        GoldenCase{"witness_ww_json", {"--json", "witness", "ww", "-w", "abba"}, 0},
        GoldenCase{"witness_tphi", {"witness", "tphi", "-f", "@even.fol", "-n", "6"}, 0},
        GoldenCase{"witness_squares", {"witness", "squares", "--max", "60"}, 0}),
    [](const ::testing::TestParamInfo<GoldenCase>& info) { return info.param.name; });

TEST(Cli, CompileThenTransduce) {
  const auto path = (std::filesystem::temp_directory_path() / "strlogic_cli_test_last.nft").string();
  Outcome c = run({"compile-fo", "-t", "P_a(max)", "--sigma", "(a,b)", "--gamma", "(a,b)", "--check", "-o", path});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("single-valued true, aperiodic true"), std::string::npos) << c.out;
  Outcome x = run({"xduce", "-m", path, "-w", "ba"});
  EXPECT_EQ(x.code, 0);
  EXPECT_EQ(x.out, "aa\n");
  Outcome j = run({"--json", "xduce", "-m", path, "-w", "abab"});
  auto doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["schema"], "strlogic/1");
  EXPECT_EQ(doc["outputs"], nlohmann::json::array({"bbbb"}));
  std::filesystem::remove(path);
}

TEST(Cli, JsonDocumentsCarrySchemaAndCommand) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--json", "eval", "-f", "@f.fol", "-w", "ab"},
           {"--json", "wp", "-g", "@z3.gpd", "-w", "abc"},
           {"--json", "witness", "lm", "-w", "000111", "-l", "2", "-m", "1"},
           {"--json", "witness", "squares", "--max", "30"},
           {"--json", "cfl", "member", "-g", "@anbn.cfg", "-w", "aabb"}}) {
    Outcome o = run(args);
    ASSERT_NE(o.code, 3) << o.err;
    auto doc = nlohmann::json::parse(o.out);
    EXPECT_EQ(doc["schema"], "strlogic/1");
    EXPECT_TRUE(doc.contains("command"));
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"eval", "-f", "@f.fol"}).code, 2);
  Outcome bad_symbol = run({"eval", "-f", "@f.fol", "-w", "abc"});
  EXPECT_EQ(bad_symbol.code, 3);
  EXPECT_EQ(bad_symbol.err.rfind("error: ", 0), 0u) << bad_symbol.err;
  EXPECT_EQ(run({"eval", "-f", "@missing.fol", "-w", "ab"}).code, 3);
  EXPECT_EQ(run({"cfl", "fit", "-g", "@dyck1.cfg"}).code, 3);
  EXPECT_EQ(run({"eval", "-t", "E x. (P_a(x) & )", "--sigma", "(a,b)", "-w", "ab"}).code, 3);
}

TEST(Cli, SelftestSubset) {
  Outcome o = run({"selftest", "--only", "10"});
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  EXPECT_NE(o.out.find("PASS  [10]"), std::string::npos) << o.out;
}
