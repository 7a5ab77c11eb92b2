#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "anticanon/io.hpp"
#include "commands.hpp"

using namespace anticanon;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) { return std::string(ANTICANON_FIXTURES) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("anticanon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  void write(const fs::path& p, const std::string& text) { io::write_atomic(p, text); }

  std::ostringstream out_, err_;
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, CheckExitCodes) {
  EXPECT_EQ(cli::cmd_check(fixture("pauli_pair.json"), std::nullopt, out_, err_), 0);
  EXPECT_EQ(cli::cmd_check(fixture("nilpotent.json"), std::nullopt, out_, err_), 2);
  EXPECT_EQ(cli::cmd_check(fixture("mismatched_n.json"), std::nullopt, out_, err_), 3);
  EXPECT_NE(err_.str().find("operators[0].matrix"), std::string::npos);
  EXPECT_EQ(cli::cmd_check(fixture("zero_operator.json"), std::nullopt, out_, err_), 0);
  EXPECT_EQ(cli::cmd_check(path("absent.json"), std::nullopt, out_, err_), 3);
  EXPECT_EQ(cli::cmd_check(fixture("pauli_pair.json"), 2.0, out_, err_), 3);
}

TEST_F(Cli, CheckRejectsCommutingFamily) {
  write(path("commuting.json"), io::dump_family(OperatorFamily::make({Matrix::Identity(2, 2), Matrix::Identity(2, 2)})));
  EXPECT_EQ(cli::cmd_check(path("commuting.json"), std::nullopt, out_, err_), 1);
}

TEST_F(Cli, DecomposeZeroOperator) {
  EXPECT_EQ(cli::cmd_decompose(fixture("zero_operator.json"), path("r.json"), false, std::nullopt, out_, err_), 0);
  const auto r = io::parse_report(io::read_text(path("r.json")));
  ASSERT_EQ(r.report.blocks.size(), 1u);
  EXPECT_EQ(r.report.blocks[0].kind, BlockKind::Kernel);
  EXPECT_EQ(r.report.blocks[0].dim(), 3);
  EXPECT_FALSE(r.canonical.has_value());
}

TEST_F(Cli, DecomposeViolationWritesNothing) {
  write(path("commuting.json"), io::dump_family(OperatorFamily::make({Matrix::Identity(2, 2), Matrix::Identity(2, 2)})));
  EXPECT_EQ(cli::cmd_decompose(path("commuting.json"), path("r.json"), true, std::nullopt, out_, err_), 1);
  EXPECT_FALSE(fs::exists(path("r.json")));
  EXPECT_EQ(cli::cmd_decompose(fixture("mismatched_n.json"), path("r.json"), true, std::nullopt, out_, err_), 3);
  EXPECT_FALSE(fs::exists(path("r.json")));
}

TEST_F(Cli, DecomposeDegenerate) {
  EXPECT_EQ(cli::cmd_decompose(fixture("nilpotent.json"), path("r.json"), true, std::nullopt, out_, err_), 2);
  const auto r = io::parse_report(io::read_text(path("r.json")));
  EXPECT_TRUE(r.report.has_degenerate());
  ASSERT_TRUE(r.canonical.has_value());
  EXPECT_TRUE(r.canonical->forms[0].skipped);
  EXPECT_EQ(r.diagnostics.exit_code, 2);
}

TEST_F(Cli, GenerateWorkedExample) {
  EXPECT_EQ(cli::cmd_generate(fixture("worked_example.spec.json"), path("fam.json"), std::nullopt, out_, err_), 0);
  const auto fam = io::load_family(path("fam.json"));
  EXPECT_EQ(fam.dim(), 20);
  EXPECT_EQ(fam.size(), 5);
  EXPECT_EQ(cli::cmd_check(path("fam.json"), std::nullopt, out_, err_), 0);
  EXPECT_EQ(cli::cmd_decompose(path("fam.json"), path("r.json"), true, std::nullopt, out_, err_), 0);
  const auto r = io::parse_report(io::read_text(path("r.json")));
  std::vector<int> dims;
  for (const auto& b : r.report.blocks) dims.push_back(b.dim());
  EXPECT_EQ(dims, (std::vector<int>{1, 1, 2, 6, 2, 2, 2, 4}));
  EXPECT_EQ(cli::cmd_compare(cli::expected_path(path("fam.json")), path("r.json"), out_, err_), 0);
}

TEST_F(Cli, GenerateIsDeterministic) {
  ASSERT_EQ(cli::cmd_generate(fixture("worked_example.spec.json"), path("a.json"), 7, out_, err_), 0);
  ASSERT_EQ(cli::cmd_generate(fixture("worked_example.spec.json"), path("b.json"), 7, out_, err_), 0);
  ASSERT_EQ(cli::cmd_generate(fixture("worked_example.spec.json"), path("c.json"), 8, out_, err_), 0);
  EXPECT_EQ(io::read_text(path("a.json")), io::read_text(path("b.json")));
  EXPECT_NE(io::read_text(path("a.json")), io::read_text(path("c.json")));
}

TEST_F(Cli, GenerateRejectsBadSpecs) {
  write(path("empty.json"), R"({"format": "anticanon-spec/1", "N": 2, "blocks": []})");
  EXPECT_EQ(cli::cmd_generate(path("empty.json"), path("fam.json"), std::nullopt, out_, err_), 3);
  write(path("odd.json"), R"({"format": "anticanon-spec/1", "N": 2,
      "blocks": [{"kind": "clifford", "dim": 3, "support": [0, 1], "constants": [1, 1]}]})");
  EXPECT_EQ(cli::cmd_generate(path("odd.json"), path("fam.json"), std::nullopt, out_, err_), 3);
  EXPECT_FALSE(fs::exists(path("fam.json")));
}

TEST_F(Cli, GeneratedCorpusPassesCheck) {
  const auto corpus = oracle::sample_corpus(30, 11);
  for (const auto& c : corpus) {
    io::FamilySpec spec;
    spec.N = c.N;
    spec.mode = c.mode;
    spec.blocks = c.specs;
    spec.scramble = c.scramble;
    write(path("spec.json"), io::dump_spec(spec));
    ASSERT_EQ(cli::cmd_generate(path("spec.json"), path("fam.json"), std::nullopt, out_, err_), 0) << c.name;
    const int expected = [&] {
      for (const auto& s : c.specs)
        if (s.kind == BlockKind::Degenerate) return 2;
      return 0;
    }();
    EXPECT_EQ(cli::cmd_check(path("fam.json"), std::nullopt, out_, err_), expected) << c.name << "\n" << out_.str();
  }
}

TEST_F(Cli, TolOverride) {
  EXPECT_EQ(cli::cmd_decompose(fixture("pauli_pair.json"), path("r.json"), false, 1e-11, out_, err_), 0);
  const auto r = io::parse_report(io::read_text(path("r.json")));
  EXPECT_DOUBLE_EQ(r.report.tolerance.rel_zero, 1e-11);
  EXPECT_DOUBLE_EQ(r.report.tolerance.eig_cluster, 1e-9);
}
