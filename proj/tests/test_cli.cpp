// SPDX-License-Identifier: Apache-2.0
// Runs the installed command-line tool end to end in a scratch directory.
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace
{

struct Cli : ::testing::Test
{
  fs::path dir;

  void SetUp() override
  {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / (std::string("adspec_cli_") + info->name());
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  int run(const std::string &args, const std::string &env = "")
  {
    const std::string cmd = "cd '" + dir.string() + "' && " + env + " '" ADSPEC_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string read(const std::string &name) const
  {
    std::ifstream in(dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  nlohmann::json report(const std::string &name) const { return nlohmann::json::parse(read(name)); }
};

const std::string data_dir = ADSPEC_DATA_DIR;

}  // namespace

TEST_F(Cli, SymbolCertifiesMaxwell)
{
  ASSERT_EQ(run("symbol --input " + data_dir + "/maxwell.json --output sym.json --divergence"), 0) << read("stderr.txt");
  const auto r = report("sym.json");
  EXPECT_EQ(r["status"], "PASSED");
  EXPECT_EQ(r["result"]["d0"], 2);
  EXPECT_EQ(r["result"]["d"], 2);
  const std::string csv = read("sym_speeds.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "omega_1 [1],omega_2 [1],omega_3 [1],speed_min [length/time],speed_max [length/time]");
}

TEST_F(Cli, AdsIsReproducible)
{
  ASSERT_EQ(run("ads --lmax 2 --output a.json"), 0) << read("stderr.txt");
  ASSERT_EQ(run("ads --lmax 2 --output b.json"), 0);
  EXPECT_EQ(read("a.json").size() > 0, true);
  EXPECT_EQ(read("a_roots.csv"), read("b_roots.csv"));
  auto a = report("a.json"), b = report("b.json");
  EXPECT_EQ(a["result"], b["result"]);
  EXPECT_EQ(read("a_roots.csv").substr(0, 3), "l [");
}

TEST_F(Cli, FredholmDemoIndependentOfThreads)
{
  ASSERT_EQ(run("fredholm --demo --families 6 --threads 1 --seed 4 --output one.json"), 0) << read("stderr.txt");
  ASSERT_EQ(run("fredholm --demo --families 6 --threads 2 --seed 4 --output two.json"), 0);
  EXPECT_EQ(report("one.json")["result"].dump(), report("two.json")["result"].dump());
  EXPECT_EQ(read("one_demo.csv"), read("two_demo.csv"));
  EXPECT_EQ(report("one.json")["status"], "PASSED");
}

TEST_F(Cli, FredholmFamilyFile)
{
  ASSERT_EQ(run("fredholm --family " + data_dir + "/planted_family.json --output f.json"), 0) << read("stderr.txt");
  const auto r = report("f.json");
  EXPECT_EQ(r["status"], "PASSED");
}

TEST_F(Cli, UnknownKeyIsAConfigError)
{
  {
    std::ofstream(dir / "bad.json") << R"({"epsilon": 1.0, "colour": "blue"})";
  }
  EXPECT_EQ(run("spectrum --input bad.json --output bad_report.json"), 2);
  const auto r = report("bad_report.json");
  EXPECT_EQ(r["status"], "FAILED");
  EXPECT_EQ(r["error"]["kind"], "ConfigError");
  EXPECT_EQ(run("symbol --no-such-flag"), 2);
}

TEST_F(Cli, RankDropIsAComputeError)
{
  {
    std::ofstream(dir / "flat.json") << R"({"n": 3, "r": 3, "A": [[[1,0,0],[0,-1,0],[0,0,0]],
      [[0,0,0],[0,0,0],[0,0,0]], [[0,0,0],[0,0,0],[0,0,0]]]})";
  }
  EXPECT_EQ(run("symbol --input flat.json --output flat_report.json"), 3);
  const auto r = report("flat_report.json");
  EXPECT_EQ(r["status"], "FAILED");
  EXPECT_EQ(r["error"]["kind"], "ConstantRankViolation");
}

TEST_F(Cli, DefaultOutputDirectoryFromEnvironment)
{
  fs::create_directories(dir / "out");
  ASSERT_EQ(run("symbol --samples 200", "ADSPEC_OUTPUT_DIR=out"), 0) << read("stderr.txt");
  EXPECT_TRUE(fs::exists(dir / "out" / "symbol.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "symbol_speeds.csv"));
}

TEST_F(Cli, SetOverridesTheInputDocument)
{
  ASSERT_EQ(run("spectrum --input " + data_dir + "/sphere.json --set N_r=101 --set absorber.sigma_max=1.5 "
                "--count 3 --output s.json"),
            0)
      << read("stderr.txt");
  const auto r = report("s.json");
  EXPECT_EQ(r["status"], "PASSED");
  EXPECT_EQ(run("spectrum --input " + data_dir + "/sphere.json --set N_r=4 --output t.json"), 2);
}
