#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "fdepth/cli.hpp"
#include "oracles.hpp"

using namespace fdepth;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fdepth");
  std::vector<const char*> argv;
  for (auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("fdepth_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  static std::string read(const std::string& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
  }
  static std::string constants(std::initializer_list<double> levels) {
    std::string s = "0,0.25,0.5,0.75,1\n";
    for (double l : levels) {
      for (int i = 0; i < 5; ++i) s += (i ? "," : "") + format_double(l);
      s += "\n";
    }
    return s;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, DepthOfThreeConstants) {
  const auto in = write("c.csv", constants({0, 1, 2}));
  const auto r = run({"depth", "-i", in, "-d", "mhr"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_DOUBLE_EQ(j["values"][0].get<double>(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(j["values"][1].get<double>(), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(j["values"][2].get<double>(), 1.0 / 3.0);
}

TEST_F(CliTest, SingleCurveFile) {
  const auto in = write("one.csv", "0,1,2\n0.5,-1,3\n");
  for (std::string d : {"hr", "mhr", "rt"}) {
    const auto r = run({"depth", "-i", in, "-d", d});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(json::parse(r.out)["values"][0].get<double>(), 1.0) << d;
  }
}

TEST_F(CliTest, RandomFileBandDepthMatchesOracle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::string text = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1\n";
  std::vector<oracle::Vec> X;
  for (int i = 0; i < 10; ++i) {
    oracle::Vec row;
    for (int v = 0; v < 11; ++v) {
      row.push_back(z(rng));
      text += (v ? "," : "") + format_double(row.back());
    }
    text += "\n";
    X.push_back(row);
  }
  const auto r = run({"depth", "-i", write("r.csv", text), "-d", "bd", "--J", "2", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "index,depth");
  for (int i = 0; i < 10; ++i) {
    std::getline(lines, line);
    const double got = std::stod(line.substr(line.find(',') + 1));
    EXPECT_EQ(got, oracle::band_depth(X[static_cast<std::size_t>(i)], X, 2));
  }
}

TEST_F(CliTest, QueryFile) {
  const auto in = write("c.csv", constants({0, 1, 2}));
  const auto q = write("q.csv", constants({1}));
  const auto r = run({"depth", "-i", in, "-q", q, "-d", "hr"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_DOUBLE_EQ(json::parse(r.out)["values"][0].get<double>(), 2.0 / 3.0);
  const auto bad = write("bad.csv", "0,1\n1,2\n");
  EXPECT_EQ(run({"depth", "-i", in, "-q", bad}).code, 2);
}

TEST_F(CliTest, MalformedCsvIsInputError) {
  const auto in = write("bad.csv", "0,1,2\n1,2,3\n4,x,6\n");
  const auto r = run({"depth", "-i", in});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
  EXPECT_EQ(run({"depth", "-i", (dir_ / "missing.csv").string()}).code, 2);
}

TEST_F(CliTest, InvalidParametersExitThree) {
  const auto in = write("c.csv", constants({0, 1, 2}));
  EXPECT_EQ(run({"depth", "-i", in, "-d", "h", "--bandwidth", "0"}).code, 3);
  EXPECT_EQ(run({"depth", "-i", in, "-d", "bd", "--J", "5"}).code, 3);
  EXPECT_EQ(run({"depth", "-i", in, "-d", "nope"}).code, 3);
  EXPECT_EQ(run({"depth", "-i", in, "--format", "xml"}).code, 3);
  EXPECT_EQ(run({"trim", "-i", in, "--alpha", "1"}).code, 3);
  EXPECT_EQ(run({"outliers", "-i", in, "-q", "0"}).code, 3);
  EXPECT_EQ(run({}).code, 3);
}

TEST_F(CliTest, RankMiddleCurveFirst) {
  const auto in = write("c.csv", constants({0, 1, 2}));
  const auto r = run({"rank", "-i", in, "-d", "mhr"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["ranks"], json({2, 1, 3}));
  EXPECT_EQ(j["deepest"], 1);
}

TEST_F(CliTest, TrimWithZeroAlphaKeepsAll) {
  const auto in = write("c.csv", constants({0, 1, 2, 7}));
  const auto r = run({"trim", "-i", in, "--alpha", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["kept"], json({0, 1, 2, 3}));
  EXPECT_TRUE(j["dropped"].empty());
  EXPECT_DOUBLE_EQ(j["trimmed_mean"][0].get<double>(), 2.5);
}

TEST_F(CliTest, TrimCsvWithEnvelope) {
  const auto in = write("c.csv", constants({0, 1, 2, 7}));
  const auto r = run({"--format", "csv", "trim", "-i", in, "--alpha", "0.25", "--with-envelope"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream s(r.out);
  const auto t = read_csv_table(s);
  EXPECT_EQ(t.rows.size(), 3u);
  ASSERT_EQ(t.tagged.size(), 3u);
  EXPECT_EQ(t.tagged[0].tag, "mean");
  EXPECT_EQ(t.tagged[1].tag, "L");
  EXPECT_EQ(t.tagged[2].tag, "U");
  EXPECT_EQ(t.tagged[2].values[0], 2.0);
}

// Curves 0 and 100 tie at depth 1/4, so both sit at the 0.3 quantile.
TEST_F(CliTest, OutliersFlagFarCurve) {
  const auto in = write("c.csv", constants({0, 1, 2, 100}));
  const auto r = run({"outliers", "-i", in, "-d", "mhr", "-q", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  const auto flagged = j["flagged"].get<std::vector<int>>();
  EXPECT_NE(std::find(flagged.begin(), flagged.end(), 3), flagged.end());
  EXPECT_EQ(j["depths"][3].get<double>(), 0.25);
  EXPECT_EQ(flagged, (std::vector<int>{0, 3}));
}

TEST_F(CliTest, SimulateThenDepth) {
  const auto spec = write("gp.json", R"({"kernel": {"type": "squared_exponential", "variance": 1.0, "length_scale": 0.2},
                                          "grid": {"start": 0, "end": 1, "points": 21}})");
  const auto out1 = (dir_ / "a.csv").string(), out2 = (dir_ / "b.csv").string();
  ASSERT_EQ(run({"--seed", "5", "simulate-gp", "-s", spec, "-n", "30", "-o", out1}).code, 0);
  ASSERT_EQ(run({"--seed", "5", "simulate-gp", "-s", spec, "-n", "30", "-o", out2}).code, 0);
  EXPECT_EQ(read(out1), read(out2));
  EXPECT_EQ(run({"depth", "-i", out1, "-d", "mbd"}).code, 0);
}

TEST_F(CliTest, SimulateDegenerateVarianceGivesMean) {
  write("mean.csv", "0,0.5,1\n1,2,3\n");
  const auto spec = write("gp.json", R"({"kernel": {"variance": 1e-18, "length_scale": 0.2},
                                          "grid": {"start": 0, "end": 1, "points": 3}, "mean_csv": "mean.csv"})");
  const auto r = run({"simulate-gp", "-s", spec, "-n", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream s(r.out);
  const auto sample = read_sample(s);
  EXPECT_NEAR(sample.curve(0)[2], 3.0, 1e-6);
}

TEST_F(CliTest, SimulateBadSpec) {
  const auto spec = write("gp.json", R"({"kernel": {"variance": -1}})");
  EXPECT_EQ(run({"simulate-gp", "-s", spec}).code, 3);
  const auto broken = write("broken.json", "{");
  EXPECT_EQ(run({"simulate-gp", "-s", broken}).code, 2);
}

TEST_F(CliTest, ReconstructSparse) {
  const auto in = write("s.csv", "0,0.5,1\n1,,3\n,2,\n");
  const auto r = run({"reconstruct", "-i", in});
  EXPECT_EQ(r.code, 2);  // second row has a single observation
  const auto ok = write("ok.csv", "0,0.5,1\n1,,3\nNaN,2,4\n");
  const auto r2 = run({"reconstruct", "-i", ok});
  ASSERT_EQ(r2.code, 0) << r2.err;
  std::istringstream s(r2.out);
  const auto sample = read_sample(s);
  EXPECT_EQ(sample.curve(0)[1], 2.0);
  EXPECT_EQ(sample.curve(1)[0], 2.0);
}

TEST_F(CliTest, AuditUnderpoweredConfigListsCells) {
  const auto cfg = write("cfg.json", R"({"n": 50, "p6": {"sizes": [50, 100]}, "replicates": 3,
                                         "p1": {"n": 30}, "p3": {"n": 60}, "p4": {"n": 40, "perturbations": 10}})");
  const auto r = run({"audit", "-c", cfg, "-o", (dir_ / "out").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("inapplicable"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("[D_MHR P-2G]"), std::string::npos) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "audit.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "audit.md"));
}

TEST_F(CliTest, AuditBadConfig) {
  const auto cfg = write("cfg.json", R"({"replicates": 1})");
  EXPECT_EQ(run({"audit", "-c", cfg, "-o", (dir_ / "out").string()}).code, 3);
}

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("simulate-gp"), std::string::npos);
}
