#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "radcool/cli.hpp"

namespace radcool {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string config(const std::string& name) { return std::string(RADCOOL_CONFIG_DIR) + "/" + name; }

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("radcool_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, EvalPrintsSystemNoiseAndBudget) {
  const auto r = run({"eval", "--config", config("fig4a.config"), "--t-dev", "1.0K"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("n_sys = 4.581\n", 0), 0u) << r.out;
  EXPECT_NE(r.out.find("plate_loss"), std::string::npos);
  EXPECT_NE(r.out.find("amplifier"), std::string::npos);
  EXPECT_TRUE(r.err.empty());

  const auto hot = run({"eval", "--config", config("fig4a.config"), "--t-dev", "4K"});
  EXPECT_EQ(hot.out.rfind("n_sys = 5.075\n", 0), 0u) << hot.out;
  const auto mk = run({"eval", "--config", config("fig4a.config"), "--t-dev", "1000mK"});
  EXPECT_EQ(mk.out, r.out);
}

TEST_F(CliTest, EvalOtherTargets) {
  const auto d = run({"eval", "--config", config("fig4b.config"), "--precision", "4"});
  EXPECT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.out, "delta_n_add = 0.1556\n");
}

TEST_F(CliTest, BudgetTable) {
  const auto r = run({"budget", "--config", config("itemized_chain.config")});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* label : {"mxc_connectors", "isolator", "circulator", "nkpa", "hemt", "total"})
    EXPECT_NE(r.out.find(label), std::string::npos) << label;
}

TEST_F(CliTest, SweepWritesGridAndContours) {
  const auto r = run({"sweep", "--config", config("fig8b.config"), "--out", path("grid.csv"), "--workers", "2",
                      "--contour-levels", "6,8", "--contour-out", path("contours.csv")});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto csv = read_text_file(path("grid.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 81 * 81 + 1);
  EXPECT_EQ(csv.rfind("lines.alpha1_db,lines.alpha2_db,value\n", 0), 0u);
  const auto contours = read_text_file(path("contours.csv"));
  EXPECT_EQ(contours.rfind("level,line,vertex,closed,lines.alpha1_db,lines.alpha2_db\n", 0), 0u);
  EXPECT_NE(contours.find("\n6,"), std::string::npos);
  EXPECT_NE(contours.find("\n8,"), std::string::npos);
}

TEST_F(CliTest, SweepIsScheduleIndependent) {
  ASSERT_EQ(run({"sweep", "--config", config("fig8b.config"), "--out", path("a.json"), "--workers", "1",
                 "--timestamp", "fixed"})
                .code,
            0);
  ASSERT_EQ(run({"sweep", "--config", config("fig8b.config"), "--out", path("b.json"), "--workers", "5",
                 "--timestamp", "fixed"})
                .code,
            0);
  EXPECT_EQ(read_text_file(path("a.json")), read_text_file(path("b.json")));
  EXPECT_EQ(read_text_file(path("a.json")).front(), '{');
}

TEST_F(CliTest, SweepToStdout) {
  const auto r = run({"sweep", "--config", config("fig4b.config"), "--out", "-"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("amplifier.coupling_ratio,t_dev_k,value\n", 0), 0u);
}

TEST_F(CliTest, NoiseRoundTrip) {
  EXPECT_EQ(run({"calibrate-synth", "--kind", "noise", "--rel-noise", "0", "--out", path("n.csv")}).code, 0);
  const auto fit = run({"fit-noise", path("n.csv")});
  EXPECT_EQ(fit.code, 0) << fit.err;
  EXPECT_NE(fit.out.find("converged      yes"), std::string::npos) << fit.out;
  EXPECT_NE(fit.out.find("n_add          1.1435449"), std::string::npos) << fit.out;

  EXPECT_EQ(run({"calibrate-synth", "--kind", "noise", "--seed", "4", "--out", path("n.json")}).code, 0);
  EXPECT_EQ(run({"fit-noise", path("n.json")}).code, 0);
}

TEST_F(CliTest, SynthIsSeedDeterministic) {
  for (const char* kind : {"noise", "reflection"}) {
    run({"calibrate-synth", "--kind", kind, "--seed", "9", "--out", path("a.csv")});
    run({"calibrate-synth", "--kind", kind, "--seed", "9", "--out", path("b.csv")});
    run({"calibrate-synth", "--kind", kind, "--seed", "10", "--out", path("c.csv")});
    EXPECT_EQ(read_text_file(path("a.csv")), read_text_file(path("b.csv"))) << kind;
    EXPECT_NE(read_text_file(path("a.csv")), read_text_file(path("c.csv"))) << kind;
  }
}

TEST_F(CliTest, ReflectionRoundTrip) {
  EXPECT_EQ(run({"calibrate-synth", "--kind", "reflection", "--rel-noise", "0", "--ripple", "0", "--out",
                 path("r.csv")})
                .code,
            0);
  const auto fit = run({"fit-reflection", path("r.csv")});
  EXPECT_EQ(fit.code, 0) << fit.err;
  EXPECT_NE(fit.out.find("kappa_e/2pi_MHz  65 +/-"), std::string::npos) << fit.out;
  EXPECT_NE(fit.out.find("kappa_e/kappa    0.98\n"), std::string::npos) << fit.out;
}

TEST_F(CliTest, ExitCodes) {
  // Validation: unit, schema, I/O, usage.
  EXPECT_EQ(run({"eval", "--config", config("fig4a.config"), "--t-dev", "1.0"}).code, 1);
  EXPECT_EQ(run({"eval", "--config", path("missing.config")}).code, 1);
  EXPECT_EQ(run({"sweep", "--config", config("fig8b.config"), "--out", "/nonexistent-dir/x.csv"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"sweep", "--config", config("fig4b.config"), "--contour-levels", "0.1",
                 "--contour-out", path("c.csv")})
                .code,
            0);
  EXPECT_EQ(run({"sweep", "--config", config("fig4a.config"), "--contour-levels", "5", "--contour-out",
                 path("c.csv")})
                .code,
            1);
  write_text_file(path("bad.config"), "{\"target\": \"system_noise\",, }");
  const auto parse = run({"eval", "--config", path("bad.config")});
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.err.find("line 1, column"), std::string::npos) << parse.err;
  EXPECT_TRUE(parse.out.empty());

  // Numerical: a degenerate design.
  write_text_file(path("flat.csv"), "t_src_K,psd_quanta\n1e-4,1\n2e-4,1\n3e-4,1\n");
  const auto flat = run({"fit-noise", path("flat.csv")});
  EXPECT_EQ(flat.code, 2) << flat.out << flat.err;
  EXPECT_NE(flat.err.find("degenerate"), std::string::npos);

  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"--version"}).code, 0);
}

TEST_F(CliTest, GridPointDomainErrorIsReported) {
  write_text_file(path("cold.config"), R"({
    "target": "delta_added_noise", "frequency_ghz": 7.151, "t_base_k": 0.13,
    "amplifier": {"coupling_ratio": 0.98},
    "axes": [{"path": "t_dev", "min_k": 0.1, "max_k": 0.2, "points": 3}]
  })");
  const auto r = run({"sweep", "--config", path("cold.config"), "--out", path("x.csv")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("t_dev_k=0.10000000000000001"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace radcool
