// Black-box tests of the acmatch executable: exit codes, output formats and
// golden files.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "acmatch/bench.hpp"
#include "acmatch/dispatch.hpp"
#include "acmatch/pattern_set.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("acmatch_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(ACMATCH_BIN) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string golden(const std::string& name) { return std::string(GOLDEN_DIR) + "/" + name; }
  std::string tmp(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, NoSubcommandIsUsageError) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(run("--help").exit_code, 0); }

TEST_F(CliTest, GenerateAlphabet) {
  const auto r = run("generate --size 26 --patterns 1 --out-text " + tmp("t") + " --out-patterns " + tmp("p"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(slurp(tmp("t")), "abcdefghijklmnopqrstuvwxyz");
  EXPECT_EQ(slurp(tmp("p")), "abcdefghijklmnopqrstuvwxyz\n");
}

TEST_F(CliTest, GenerateEmpty) {
  EXPECT_EQ(run("generate --size 0 --out-text " + tmp("t") + " --out-patterns " + tmp("p")).exit_code, 0);
  EXPECT_TRUE(fs::exists(tmp("t")));
  EXPECT_EQ(fs::file_size(tmp("t")), 0u);
}

TEST_F(CliTest, GenerateIsDeterministic) {
  const std::string args = "generate --size 671375 --patterns 5 --seed 7";
  ASSERT_EQ(run(args + " --out-text " + tmp("t1") + " --out-patterns " + tmp("p1")).exit_code, 0);
  ASSERT_EQ(run(args + " --out-text " + tmp("t2") + " --out-patterns " + tmp("p2")).exit_code, 0);
  EXPECT_EQ(fs::file_size(tmp("t1")), 671375u);
  EXPECT_EQ(slurp(tmp("t1")), slurp(tmp("t2")));
  EXPECT_EQ(slurp(tmp("p1")), slurp(tmp("p2")));
  EXPECT_EQ(acmatch::PatternSet::load(tmp("p1")).size(), 5u);
}

TEST_F(CliTest, GenerateErrors) {
  EXPECT_EQ(run("generate --size 10").exit_code, 2);
  EXPECT_EQ(run("generate --size -3 --out-text a --out-patterns b").exit_code, 2);
  EXPECT_EQ(run("generate --size 10 --patterns 0 --out-text a --out-patterns b").exit_code, 2);
  EXPECT_EQ(run("generate --size 10 --out-text /nonexistent/x/t --out-patterns " + tmp("p")).exit_code, 1);
}

TEST_F(CliTest, MatchSerialGolden) {
  const auto r = run("match --engine serial --text " + golden("abede.text") + " --patterns " + golden("abede.patterns"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, slurp(golden("abede_all.expected")));
  EXPECT_EQ(r.err, "# matches=3 engine=serial\n");
}

TEST_F(CliTest, MatchParallelAllGolden) {
  const auto r = run("match --engine parallel --semantics all --workers 3 --text " + golden("abede.text") +
                     " --patterns " + golden("abede.patterns"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, slurp(golden("abede_all.expected")));
  EXPECT_EQ(r.err, "# matches=3 engine=parallel\n");
}

TEST_F(CliTest, MatchParallelLongestDropsSubPattern) {
  const auto r = run("match --engine parallel --semantics longest --text " + golden("subpattern.text") +
                     " --patterns " + golden("subpattern.patterns"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, slurp(golden("subpattern_longest.expected")));
  // Parallel defaults to longest-per-start too.
  EXPECT_EQ(run("match --engine parallel --text " + golden("subpattern.text") + " --patterns " +
                golden("subpattern.patterns"))
                .out,
            r.out);
}

TEST_F(CliTest, MatchEmptyText) {
  std::ofstream(tmp("empty")).close();
  const auto r = run("match --text " + tmp("empty") + " --patterns " + golden("abede.patterns"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "");
  EXPECT_EQ(r.err, "# matches=0 engine=serial\n");
}

TEST_F(CliTest, MatchErrors) {
  const std::string inputs = " --text " + golden("abede.text") + " --patterns " + golden("abede.patterns");
  EXPECT_EQ(run("match --engine auto" + inputs).exit_code, 2);
  EXPECT_EQ(run("match --engine gpu" + inputs).exit_code, 2);
  EXPECT_EQ(run("match --workers 0 --engine parallel" + inputs).exit_code, 2);
  EXPECT_EQ(run("match --text /nonexistent --patterns " + golden("abede.patterns")).exit_code, 1);
  EXPECT_EQ(run("match --text " + golden("abede.text") + " --patterns /nonexistent").exit_code, 1);
  std::ofstream(tmp("dup")) << "AB\nAB\n";
  EXPECT_EQ(run("match --text " + golden("abede.text") + " --patterns " + tmp("dup")).exit_code, 1);
  EXPECT_EQ(run("run" + inputs).exit_code, 2);  // run needs --calibration
}

TEST_F(CliTest, AutoDispatchIsEngineTransparent) {
  acmatch::Calibration cal;
  cal.pattern_count = 4;
  cal.workers = 2;
  cal.host_label = "t";
  cal.threshold_bytes = 1;
  acmatch::save_calibration(tmp("low.json"), cal);
  cal.threshold_bytes = 40000;
  acmatch::save_calibration(tmp("high.json"), cal);

  const std::string inputs = " --text " + golden("abede.text") + " --patterns " + golden("abede.patterns");
  const auto low = run("match --engine auto --calibration " + tmp("low.json") + inputs);
  const auto high = run("run --calibration " + tmp("high.json") + inputs);
  EXPECT_EQ(low.exit_code, 0);
  EXPECT_EQ(high.exit_code, 0);
  EXPECT_EQ(low.out, slurp(golden("abede_all.expected")));
  EXPECT_EQ(high.out, low.out);
  EXPECT_EQ(low.err, "# matches=3 engine=parallel\n");
  EXPECT_EQ(high.err, "# matches=3 engine=serial\n");

  std::ofstream(tmp("bad.json")) << "{\"threshold_bytes\": 1}";
  EXPECT_EQ(run("run --calibration " + tmp("bad.json") + inputs).exit_code, 1);
}

TEST_F(CliTest, AutoWarnsOnPatternCountMismatch) {
  acmatch::Calibration cal;
  cal.pattern_count = 5;
  cal.threshold_bytes = 100;
  acmatch::save_calibration(tmp("cal.json"), cal);
  const auto r = run("run --calibration " + tmp("cal.json") + " --text " + golden("abede.text") + " --patterns " +
                     golden("abede.patterns"));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_NE(r.err.find("warning: calibration was made with 5 patterns"), std::string::npos);
}

TEST_F(CliTest, BenchFineWithFakeClock) {
  const auto r = run("bench --mode fine --reps 1 --workers 2 --out " + tmp("fine") + " --fake-clock " +
                     golden("linear_clock.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto series = acmatch::parse_sweep_csv(slurp(tmp("fine") + "/sweep.csv"));
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].points.size(), 41u);
  EXPECT_EQ(series[0].points.back().size, 53710u);
  const auto rows = acmatch::parse_crossover_csv(slurp(tmp("fine") + "/crossover.csv"));
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].crossover_bytes.has_value());
  EXPECT_NEAR(*rows[0].crossover_bytes, 40000.0, 1.0);
  EXPECT_EQ(rows[0].grid_base, 1310u);
  EXPECT_EQ(rows[0].grid_steps, 41u);
  EXPECT_TRUE(fs::exists(tmp("fine") + "/meta.json"));
}

TEST_F(CliTest, BenchCoarseRowCount) {
  const auto r = run("bench --mode coarse --reps 1 --workers 1 --out " + tmp("coarse") + " --fake-clock " +
                     golden("linear_clock.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const std::string csv = slurp(tmp("coarse") + "/sweep.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 82);
  EXPECT_EQ(acmatch::parse_sweep_csv(csv)[0].points.back().size, 671375u);
}

TEST_F(CliTest, BenchPatternsMode) {
  const auto r = run("bench --mode patterns --reps 1 --workers 1 --out " + tmp("pat") + " --fake-clock " +
                     golden("pattern_scaled_clock.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = acmatch::parse_crossover_csv(slurp(tmp("pat") + "/crossover.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].pattern_count, 5u);
  EXPECT_EQ(rows[1].pattern_count, 10u);
  EXPECT_LT(*rows[1].crossover_bytes, *rows[0].crossover_bytes);
  EXPECT_EQ(acmatch::parse_sweep_csv(slurp(tmp("pat") + "/sweep.csv")).size(), 2u);
}

TEST_F(CliTest, BenchErrors) {
  EXPECT_EQ(run("bench --mode sideways --out " + tmp("x")).exit_code, 2);
  EXPECT_EQ(run("bench --mode fine").exit_code, 2);
  EXPECT_EQ(run("bench --mode fine --reps 1 --steps 2 --base 10 --out /proc/nope/x").exit_code, 1);
  EXPECT_EQ(run("bench --mode fine --out " + tmp("x") + " --fake-clock /nonexistent.json").exit_code, 1);
}

TEST_F(CliTest, CalibrateWithFakeClock) {
  const auto r = run("calibrate --reps 1 --workers 2 --seed 3 --host-label box --out " + tmp("cal.json") +
                     " --fake-clock " + golden("linear_clock.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const acmatch::Calibration cal = acmatch::load_calibration(tmp("cal.json"));
  EXPECT_EQ(cal.threshold_bytes, 40000u);
  EXPECT_EQ(cal.workers, 2u);
  EXPECT_EQ(cal.seed, 3u);
  EXPECT_EQ(cal.host_label, "box");
  EXPECT_EQ(acmatch::calibration_from_json(acmatch::calibration_to_json(cal)), cal);
}

TEST_F(CliTest, CalibrateWithoutCrossingWritesInf) {
  std::ofstream(tmp("slow.json")) << R"({"serial": {"per_byte_ns": 1}, "parallel": {"fixed_ns": 1e12}})";
  const auto r = run("calibrate --reps 1 --workers 1 --out " + tmp("cal.json") + " --fake-clock " + tmp("slow.json"));
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_NE(slurp(tmp("cal.json")).find(R"("threshold_bytes": "inf")"), std::string::npos);
  EXPECT_TRUE(acmatch::load_calibration(tmp("cal.json")).always_serial());
}

TEST_F(CliTest, CalibrateErrors) {
  EXPECT_EQ(run("calibrate").exit_code, 2);
  EXPECT_EQ(run("calibrate --reps 1 --steps 2 --base 10 --out /nonexistent/dir/cal.json").exit_code, 1);
}
