#include "robust_hedge/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "robust_hedge/io.hpp"
#include "robust_hedge/saddle_solver.hpp"

namespace robust_hedge::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kInstances = ROBUST_HEDGE_INSTANCES;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("robust_hedge_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> result;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) result.push_back(line);
  return result;
}

TEST_F(CliTest, SolveBothOnFixture) {
  EXPECT_EQ(run_solve(kInstances / "fixture.json", "both", "", out_, err_), kOk);
  const json doc = json::parse(out_.str());
  EXPECT_NEAR(doc["pi_star"].get<double>(), 2.0 / 3, 1e-14);
  EXPECT_NEAR(doc["value"].get<double>(), 2.0 / 9, 1e-14);
  EXPECT_EQ(doc["method"], "saddle");
  EXPECT_EQ(doc["alternate"]["method"], "corner");
  EXPECT_LT(doc["discrepancy"]["value_rel"].get<double>(), 1e-12);
}

TEST_F(CliTest, SolveLineCrossing) {
  EXPECT_EQ(run_solve(kInstances / "line_crossing.json", "saddle", "", out_, err_), kOk);
  const json doc = json::parse(out_.str());
  EXPECT_EQ(doc["pi_star"].get<double>(), 0.0);
  EXPECT_EQ(doc["witness"]["side"], "interior-line");
}

TEST_F(CliTest, SolveRejectsMalformedRectangle) {
  const fs::path p = write("bad.json",
                           R"({"rect": {"mu_min": 2, "mu_max": 1, "sigma_min": 1, "sigma_max": 2},
                               "claim": {"h0": 1, "h1": 1}})");
  EXPECT_EQ(run_solve(p, "both", "", out_, err_), kInputError);
  EXPECT_FALSE(err_.str().empty());
}

TEST_F(CliTest, SolveRejectsSchemaViolations) {
  EXPECT_EQ(run_solve(write("a.json", "{"), "both", "", out_, err_), kInputError);
  EXPECT_EQ(run_solve(write("b.json", R"({"rect": {}})"), "both", "", out_, err_), kInputError);
  EXPECT_EQ(run_solve(write("c.json",
                            R"({"rect": {"mu_min": 1, "mu_max": 2, "sigma_min": 1, "sigma_max": 2},
                                "claim": {"h0": "one", "h1": 1}})"),
                      "both", "", out_, err_),
            kInputError);
  EXPECT_EQ(run_solve(dir_ / "missing.json", "both", "", out_, err_), kInputError);
  EXPECT_EQ(run_solve(kInstances / "fixture.json", "nope", "", out_, err_), kInputError);
}

TEST_F(CliTest, SaddleOnDegenerateRectangleNamesFallback) {
  EXPECT_EQ(run_solve(kInstances / "zero_drift.json", "saddle", "", out_, err_), kPreconditionError);
  EXPECT_NE(err_.str().find("corner"), std::string::npos);
  std::ostringstream out2;
  EXPECT_EQ(run_solve(kInstances / "zero_drift.json", "corner", "", out2, err_), kOk);
  // h1 / sigma_M = 2 / 2.
  EXPECT_NEAR(json::parse(out2.str())["pi_star"].get<double>(), 1.0, 1e-12);
}

TEST_F(CliTest, VerifyFixture) {
  EXPECT_EQ(run_verify(kInstances / "fixture.json", 201, 100, 1, out_, err_), kOk) << err_.str();
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);
  EXPECT_EQ(out_.str().find("FAIL"), std::string::npos);
}

TEST_F(CliTest, VerifyOriginInsideRectangle) {
  EXPECT_EQ(run_verify(kInstances / "origin.json", 201, 100, 1, out_, err_), kOk) << err_.str();
  std::ostringstream solved;
  EXPECT_EQ(run_solve(kInstances / "origin.json", "corner", "", solved, err_), kOk);
  const json doc = json::parse(solved.str());
  EXPECT_EQ(doc["pi_star"].get<double>(), 0.0);
  EXPECT_EQ(doc["value"].get<double>(), 5.0);
}

TEST_F(CliTest, VerifyVerdictIndependentOfSeed) {
  for (std::uint64_t seed : {1u, 2u, 12345u}) {
    std::ostringstream out;
    EXPECT_EQ(run_verify(kInstances / "fixture.json", 101, 50, seed, out, err_), kOk);
  }
}

TEST_F(CliTest, VerifyRejectsBadArguments) {
  EXPECT_EQ(run_verify(kInstances / "fixture.json", 1, 100, 1, out_, err_), kInputError);
  EXPECT_EQ(run_verify(kInstances / "fixture.json", 201, 0, 1, out_, err_), kInputError);
}

TEST_F(CliTest, SweepTwoStepsPlusOptimum) {
  EXPECT_EQ(run_sweep_x0(kInstances / "moments.json", 0.0, 2.0, 2, "", out_, err_), kOk) << err_.str();
  const auto rows = lines(out_.str());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "x0,pi_star,value,value_total,kind");
  EXPECT_EQ(rows[1].rfind("0,", 0), 0u);
  EXPECT_NE(rows[1].find(",scan"), std::string::npos);
  EXPECT_NE(rows[3].find(",optimum"), std::string::npos);
}

TEST_F(CliTest, SweepZeroDriftMinimumAtMean) {
  const fs::path csv = dir_ / "sweep.csv";
  EXPECT_EQ(run_sweep_x0(kInstances / "zero_drift.json", 0.5, 4.5, 201, csv, out_, err_), kOk);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  double best_scan = 1e300;
  double optimum_x0 = 0.0;
  double optimum_value = 0.0;
  for (std::string line; std::getline(in, line);) {
    std::istringstream row(line);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    if (cells[4] == "scan") {
      best_scan = std::min(best_scan, std::stod(cells[2]));
    } else {
      optimum_x0 = std::stod(cells[0]);
      optimum_value = std::stod(cells[2]);
    }
  }
  EXPECT_NEAR(optimum_x0, 2.5, 1e-6);
  EXPECT_LE(optimum_value, best_scan + 1e-10);
}

TEST_F(CliTest, SweepRejectsBadRanges) {
  EXPECT_EQ(run_sweep_x0(kInstances / "moments.json", 2.0, 1.0, 10, "", out_, err_), kInputError);
  EXPECT_EQ(run_sweep_x0(kInstances / "moments.json", 0.0, 1.0, 1, "", out_, err_), kInputError);
  EXPECT_EQ(run_sweep_x0(kInstances / "fixture.json", 0.0, 1.0, 5, "", out_, err_), kInputError);
}

TEST_F(CliTest, DecomposeExamples) {
  EXPECT_EQ(run_decompose(write("two.csv", "w,H\n-1,0\n1,2\n"), 0.0, "", out_, err_), kOk);
  const json a = json::parse(out_.str());
  EXPECT_DOUBLE_EQ(a["h0"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(a["h1"].get<double>(), 1.0);

  std::ostringstream out2;
  EXPECT_EQ(run_decompose(write("const.csv", "0.1,4\n0.5,4\n-2,4\n"), 1.0, "", out2, err_), kOk);
  EXPECT_DOUBLE_EQ(json::parse(out2.str())["h1"].get<double>(), 0.0);

  EXPECT_EQ(run_decompose(write("one.csv", "1,2\n"), 0.0, "", out_, err_), kInputError);
  EXPECT_EQ(run_decompose(write("flat.csv", "1,2\n1,3\n"), 0.0, "", out_, err_), kInputError);
}

TEST_F(CliTest, ResultRoundTripIsBitExact) {
  for (const char* name : {"fixture.json", "negative_claim.json", "moments.json", "constant_claim.json"}) {
    const fs::path out = dir_ / "result.json";
    ASSERT_EQ(run_solve(kInstances / name, "saddle", out, out_, err_), kOk) << name;
    const io::Instance inst = io::read_instance(kInstances / name);
    const HedgeSolution direct = solve_saddle(inst.rect, inst.decomp);
    const json doc = io::read_json(out);
    const HedgeSolution back = io::solution_from_json(doc);
    EXPECT_EQ(back.pi_star, direct.pi_star) << name;
    EXPECT_EQ(back.value, direct.value) << name;
    EXPECT_EQ(back.value_total, direct.value_total) << name;
    ASSERT_TRUE(back.worst_measure);
    ASSERT_EQ(back.worst_measure->atoms().size(), direct.worst_measure->atoms().size());
    for (std::size_t i = 0; i < back.worst_measure->atoms().size(); ++i) {
      EXPECT_EQ(back.worst_measure->atoms()[i].weight, direct.worst_measure->atoms()[i].weight);
    }
    EXPECT_EQ(io::to_json(back), doc) << name;
  }
  EXPECT_EQ(std::stod(io::format_number(0.1 + 0.2)), 0.1 + 0.2);
}

TEST_F(CliTest, CorpusNeverDisagrees) {
  int solved_both = 0;
  for (const auto& entry : fs::directory_iterator(kInstances)) {
    if (entry.path().extension() != ".json") continue;
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_solve(entry.path(), "both", "", out, err);
    EXPECT_NE(code, kVerificationFailed) << entry.path();
    if (code == kOk) {
      ++solved_both;
      EXPECT_LE(json::parse(out.str())["discrepancy"]["value_rel"].get<double>(), 1e-6);
    } else {
      EXPECT_EQ(code, kPreconditionError) << entry.path() << err.str();
      std::ostringstream corner;
      EXPECT_EQ(run_solve(entry.path(), "corner", "", corner, err), kOk);
    }
  }
  EXPECT_GE(solved_both, 4);
}

TEST(RunMain, ParsesSubcommands) {
  std::vector<std::string> args{"robust-hedge", "verify", "--input",
                                (kInstances / "fixture.json").string(), "--grid", "51"};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  EXPECT_EQ(run_main(static_cast<int>(argv.size()), argv.data()), kOk);

  std::vector<std::string> bad{"robust-hedge", "solve"};
  std::vector<char*> bad_argv;
  for (auto& a : bad) bad_argv.push_back(a.data());
  EXPECT_EQ(run_main(static_cast<int>(bad_argv.size()), bad_argv.data()), kInputError);
}

}  // namespace
}  // namespace robust_hedge::cli
