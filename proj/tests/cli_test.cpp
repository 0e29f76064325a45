#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "csq/formats.hpp"
#include "csq/retrieval.hpp"

namespace csq {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("csq_cli_" + std::string(
                             ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  Result csq(const std::string& args) {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(CSQ_CLI_PATH) + " " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {rc, ss.str()};
  }

  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, StepByStepWorkflow) {
  ASSERT_EQ(csq("synth --classes 4 --per-class 25 --dim 8 --seed 2 --out-prefix " + p("train")).status, 0);
  ASSERT_EQ(csq("synth --classes 4 --per-class 5 --dim 8 --seed 2 --draw 1 --out-prefix " + p("query")).status, 0);
  ASSERT_EQ(csq("gen-centers --k 16 --m 4 --method hadamard --out " + p("c.csqh")).status, 0);
  ASSERT_EQ(csq("assign --centers " + p("c.csqh") + " --labels " + p("train.csql") +
                " --out " + p("a.csqa")).status, 0);
  ASSERT_EQ(csq("train --features " + p("train.csqf") + " --labels " + p("train.csql") +
                " --centers-map " + p("a.csqa") +
                " --k 16 --lambda1 0.0001 --lr 0.01 --momentum 0.9 --batch 16 --epochs 40"
                " --seed 1 --loss-log " + p("loss.csv") + " --out-model " + p("m.csqm")).status, 0);
  ASSERT_EQ(csq("encode --model " + p("m.csqm") + " --features " + p("train.csqf") +
                " --out-codes " + p("db.csqc")).status, 0);
  ASSERT_EQ(csq("encode --model " + p("m.csqm") + " --features " + p("query.csqf") +
                " --out-codes " + p("q.csqc")).status, 0);
  ASSERT_EQ(csq("eval --db-codes " + p("db.csqc") + " --db-labels " + p("train.csql") +
                " --query-codes " + p("q.csqc") + " --query-labels " + p("query.csql") +
                " --map-n 25 --out-report " + p("report.csv")).status, 0);
  ASSERT_EQ(csq("distmat --codes " + p("db.csqc") + " --assignments " + p("a.csqa") +
                " --centers " + p("c.csqh") + " --out " + p("dm.csv")).status, 0);

  EXPECT_EQ(load_codes(p("db.csqc")).size(), 100u);
  EXPECT_EQ(load_centers(p("c.csqh")).size(), 4u);
  const auto report = read_file(p("report.csv"));
  EXPECT_EQ(std::string(report.begin(), report.begin() + 12), "metric,value");
  const auto dm = read_file(p("dm.csv"));
  EXPECT_EQ(std::count(dm.begin(), dm.end(), '\n'), 17);
  const auto loss = read_file(p("loss.csv"));
  EXPECT_EQ(std::count(loss.begin(), loss.end(), '\n'), 41);
}

TEST_F(CliTest, GenCentersMethods) {
  ASSERT_EQ(csq("gen-centers --k 64 --m 500 --method bernoulli --seed 3 --out " + p("b.csqh")).status, 0);
  EXPECT_EQ(load_centers(p("b.csqh")).method(), CenterMethod::kBernoulli);
  ASSERT_EQ(csq("gen-centers --k 48 --m 10 --method balanced --out " + p("r.csqh")).status, 0);
  const CenterSet balanced = load_centers(p("r.csqh"));
  for (const auto& c : balanced.centers()) EXPECT_EQ(c.popcount(), 24u);
}

TEST_F(CliTest, RunWithConfigAndOverrides) {
  write_text_file(p("run.cfg"),
                  "synth_classes = 3\nsynth_per_class = 20\nsynth_dim = 6\n"
                  "k = 8\nepochs = 50\nmap_n = 20\n");
  ASSERT_EQ(csq("run --config " + p("run.cfg") + " --epochs 5 --out-dir " + p("out")).status, 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "model.csqm"));
  ASSERT_EQ(csq("run --config " + p("run.cfg") + " --set epochs=5 --out-dir " + p("out2")).status, 0);
  EXPECT_EQ(read_file(p("out/report.csv")), read_file(p("out2/report.csv")));
}

TEST_F(CliTest, FailuresAreStageTagged) {
  Result r = csq("encode --model " + p("missing.csqm") + " --features " + p("x.csqf") +
                 " --out-codes " + p("c.csqc"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("[encode]"), std::string::npos) << r.err;

  write_text_file(p("run.cfg"), "train_features = " + p("nope.csqf") +
                                    "\ntrain_labels = " + p("nope.csql") +
                                    "\nquery_features = " + p("nope.csqf") +
                                    "\nquery_labels = " + p("nope.csql") + "\n");
  r = csq("run --config " + p("run.cfg") + " --out-dir " + p("out"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("[load]"), std::string::npos) << r.err;

  write_text_file(p("bad.csqf"), "CSQX garbage");
  r = csq("train --features " + p("bad.csqf") + " --centers-map " + p("a.csqa") +
          " --out-model " + p("m.csqm"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.err.find("format error"), std::string::npos) << r.err;
}

}  // namespace
}  // namespace csq
