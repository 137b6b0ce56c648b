#include <gtest/gtest.h>

#include <filesystem>
#include <json.hpp>
#include <string>

#include "fmpo/report.hpp"
#include "fmpo/tensor_io.hpp"

namespace fs = std::filesystem;
using fmpo::read_file;

namespace {

std::string data(const std::string& name) { return std::string(FMPO_DATA_DIR) + "/" + name; }

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fmpo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI with a report file and returns its exit code.
  int run(const std::string& args) {
    const std::string cmd = std::string(FMPO_CLI) + " --report " + path("report.json") + " " + args + " > " +
                            path("stdout.txt") + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  }

  nlohmann::json report() const {
    const std::string text = read_file(path("report.json"));
    EXPECT_TRUE(fmpo::validate_report_json(text).empty()) << text;
    return nlohmann::json::parse(text);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ClassifyZ2) {
  ASSERT_EQ(run("spt-classify -g Z2"), 0);
  const auto j = report();
  EXPECT_EQ(j["exit_code"], 0);
  EXPECT_EQ(j["results"]["H1(G,Z2)"], "Z2");
  EXPECT_EQ(j["results"]["H2(G,Z2)"], "Z2");
  EXPECT_EQ(j["results"]["Hbar3(G,U(1))"], "Z4");
}

TEST_F(Cli, CohomologyWithU1Coefficients) {
  ASSERT_EQ(run("cohomology -g S3 -d 3 -c U1"), 0);
  report();
}

TEST_F(Cli, PentagonPassesAndFails) {
  EXPECT_EQ(run("pentagon " + data("fibonacci.json")), 0);
  EXPECT_EQ(report()["pass"], true);
  EXPECT_EQ(run("pentagon " + data("guwen_z2_corrupted.json")), 1);
  EXPECT_EQ(report()["pass"], false);
}

TEST_F(Cli, InputErrorsExitTwo) {
  EXPECT_EQ(run("spt-classify -g Z9"), 2);
  EXPECT_FALSE(report()["error"].get<std::string>().empty());
  fmpo::write_file(path("bad.json"), "{\"labels\": 3}");
  EXPECT_EQ(run("pentagon " + path("bad.json")), 2);
  report();
  EXPECT_EQ(std::system((std::string(FMPO_CLI) + " > /dev/null 2>&1").c_str()) >> 8, 2);
}

TEST_F(Cli, StringnetVerifyAllChecks) {
  EXPECT_EQ(run("stringnet-verify " + data("guwen_z2.json") +
                " --checks zipper fmove pullthrough unitarity grouplaw roundtrip"),
            0);
  const auto j = report();
  for (const auto& r : j["residuals"]) EXPECT_EQ(r["pass"], true) << r.dump();
}

TEST_F(Cli, FmpoPipeline) {
  ASSERT_EQ(run("fmpo from-category " + data("guwen_z2.json") + " --out-prefix " + path("gw")), 0);
  ASSERT_TRUE(fs::exists(path("gw_0.json")) && fs::exists(path("gw_1.json")));
  ASSERT_EQ(run("fmpo multiply " + path("gw_1.json") + " " + path("gw_1.json") + " -o " + path("sq.json")), 0);
  ASSERT_EQ(run("fmpo decompose " + path("sq.json")), 0);
  ASSERT_EQ(run("fmpo fuse " + path("gw_1.json") + " " + path("gw_1.json") + " --library " + path("gw_0.json") +
                " " + path("gw_1.json")),
            0);
  EXPECT_EQ(report()["results"]["N[" + path("gw_0.json") + "]"].get<std::string>().substr(0, 1), "1");
  ASSERT_EQ(run("fmpo extract-f " + path("gw_0.json") + " " + path("gw_1.json") + " -o " + path("f.json") +
                " --compare " + data("guwen_z2.json")),
            0);
  EXPECT_EQ(report()["results"]["gauge equivalent to reference"], "yes");
  ASSERT_EQ(run("pentagon " + path("f.json")), 0);
}

TEST_F(Cli, StackGuWenSquareIsBosonic) {
  ASSERT_EQ(run("spt-stack " + data("label_guwen_z2.json") + " " + data("label_guwen_z2.json") + " -o " +
                path("sq.json")),
            0);
  const auto j = nlohmann::json::parse(read_file(path("sq.json")));
  for (const auto& row : j["Z"])
    for (const auto& v : row) EXPECT_EQ(v, 0);
}
