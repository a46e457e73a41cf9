#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  static int counter = 0;
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  const std::string out = ::testing::TempDir() + "/cli_" + info->name() + "_" + std::to_string(counter++) + ".txt";
  const std::string cmd = std::string(YOUNGCONST_CLI) + " " + args + " > " + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

}  // namespace

TEST(Cli, ExactJson) {
  const auto r = run("exact --p1 4/3 --p2 4/3 --group SL2R --format json");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["corollary_bound"].get<double>(), 0.769800358919501, 1e-15);
  EXPECT_TRUE(j["exact_value"].is_null());
}

TEST(Cli, TextNumbersAppearInJson) {
  const auto text = run("exact --p1 5/4 --p2 10/7 --group AffR").out;
  const auto j = nlohmann::json::parse(run("exact --p1 5/4 --p2 10/7 --group AffR --format json").out);
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  while (std::getline(is, line)) {
    const auto eq = line.find(" = ");
    ASSERT_NE(eq, std::string::npos);
    const auto key = line.substr(line.find_first_not_of(' '), eq - line.find_first_not_of(' '));
    const auto val = line.substr(eq + 3);
    ASSERT_TRUE(j.contains(key)) << key;
    if (val == "n/a") EXPECT_TRUE(j[key].is_null()) << key;
    else EXPECT_EQ(std::stod(val), j[key].get<double>()) << key;
  }
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("exact --p1 2 --p2 3").code, 2);
  EXPECT_EQ(run("exact --p1 1/2 --p2 2").code, 2);
  EXPECT_EQ(run("exact --group Nowhere").code, 3);
  EXPECT_EQ(run("estimate --group Zmod:0").code, 4);
  EXPECT_EQ(run("estimate --group Table:/no/such/file.json").code, 4);
  EXPECT_EQ(run("verify --seeds 2 --no-audit --corrupt delta").code, 5);
  EXPECT_EQ(run("verify --seeds 2 --no-audit").code, 0);
}

TEST(Cli, EstimateReportRoundTrip) {
  const std::string path = ::testing::TempDir() + "/est.json";
  ASSERT_EQ(run("estimate --group Rline:h=0.25,L=2 --restarts 2 --iters 50 --format json --out " + path).code, 0);
  const auto r = run("report --in " + path + " --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["agrees"].get<bool>());
}

TEST(Cli, EstimateCsv) {
  const auto r = run("estimate --group Zmod:5 --restarts 3 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("group,p1,p2,p,restart", 0), 0u);
}

TEST(Cli, CatalogCheck) {
  EXPECT_EQ(run("catalog --check --catalog " + std::string(YOUNGCONST_DATA_DIR) + "/catalog.json").code, 0);
}
