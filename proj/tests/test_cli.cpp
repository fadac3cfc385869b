#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"
#include "wqisa/cloud_io.hpp"
#include "wqisa/surface_io.hpp"
#include "wqisa/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = wqisa::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("wqisa_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string cloud(std::size_t n = 600) {
    const auto p = path("cloud.xyz");
    const auto r = run({"synth", "-n", std::to_string(n), "--seed", "4", "--noise", "0.01", "--outliers", "0.02",
                        "--out", p});
    EXPECT_EQ(r.code, 0) << r.err;
    return p;
  }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, wqisa::cli::kExitUsage);
  const auto r = run({"frobnicate"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({"fit", "--bogus"}).code, 1);
  EXPECT_EQ(run({"fit"}).code, 1);
  EXPECT_EQ(run({"sample", "--surface", "x.json", "--nx", "1"}).code, 1);
}

TEST_F(Cli, HelpAndVersion) {
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("compare"), std::string::npos);
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(v.out, std::string(wqisa::cli::tool_version()) + "\n");
}

TEST_F(Cli, DataErrors) {
  EXPECT_EQ(run({"fit", "--cloud", path("missing.xyz")}).code, wqisa::cli::kExitData);
  std::ofstream(path("bad.xyz")) << "1 2 3\n4 five 6\n";
  const auto r = run({"fit", "--cloud", path("bad.xyz")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  std::ofstream(path("bad.cfg")) << "unknown_key = 1\n";
  EXPECT_EQ(run({"fit", "--cloud", cloud(), "--config", path("bad.cfg")}).code, 2);
}

TEST_F(Cli, FitWritesSurfaceAndReport) {
  const auto c = cloud();
  std::ofstream(path("run.cfg")) << "seed = 11\nweight = knn\ngrid = 1,2,3,4,5\n";
  const auto r = run({"fit", "--cloud", c, "--config", path("run.cfg"), "--out", path("s.json"), "--report",
                      path("report.json"), "--grid", path("grid.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(path("report.json")));
  EXPECT_EQ(j["tool"], "wqisa");
  EXPECT_EQ(j["tool_version"], wqisa::cli::tool_version());
  EXPECT_EQ(j["seed"], 11);
  EXPECT_EQ(j["config"]["grid"], "1,2,3,4,5");
  EXPECT_LE(j["report"]["iterations"].size(), 15u);
  EXPECT_TRUE(j["report"]["test_mse"].is_number());
  EXPECT_FALSE(j.dump().find("wall") != std::string::npos);

  const auto s = wqisa::read_surface(path("s.json"));
  const auto grid = wqisa::read_cloud(wqisa::CloudFile{wqisa::CloudFormat::Csv, path("grid.csv"), {}});
  EXPECT_EQ(grid.size(), 101u * 101u);
  EXPECT_EQ(grid[5].z, s.evaluate(grid[5].x, grid[5].y));
}

TEST_F(Cli, FitIsByteIdentical) {
  const auto c = cloud();
  const std::vector<std::string> args{"fit", "--cloud", c, "--seed", "3", "--report", path("r.json"), "--out", path("s.json")};
  ASSERT_EQ(run(args).code, 0);
  const auto report = slurp(path("r.json"));
  const auto surface = slurp(path("s.json"));
  ASSERT_FALSE(report.empty());
  ASSERT_EQ(run(args).code, 0);
  EXPECT_EQ(report, slurp(path("r.json")));
  EXPECT_EQ(surface, slurp(path("s.json")));
}

TEST_F(Cli, EvalPerfectFitHasZeroMse) {
  const auto space = wqisa::TensorSplineSpace::single_element(wqisa::Box2{0, 1, 0, 1}, 2, 2);
  wqisa::write_surface(path("flat.json"), wqisa::SplineSurface(space, wqisa::Grid(3, 3, 1.5)));
  std::ofstream(path("flat.xyz")) << "0 0 1.5\n0.5 0.2 1.5\n1 1 1.5\n";
  const auto r = run({"eval", "--surface", path("flat.json"), "--cloud", path("flat.xyz")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["stats"]["mse"], 0.0);
  EXPECT_EQ(j["stats"]["count"], 3);
  EXPECT_EQ(j["hausdorff_density"], 4);
  EXPECT_TRUE(j["hausdorff"].is_number());
}

TEST_F(Cli, CompareReportsBothMethods) {
  const auto c = cloud(800);
  const auto r = run({"compare", "--cloud", c, "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["methods"].size(), 2u);
  EXPECT_EQ(j["methods"][0]["method"], "wQISA");
  EXPECT_EQ(j["methods"][1]["method"], "MBA");
  for (const auto& m : j["methods"]) {
    ASSERT_TRUE(m["gmse"].is_number());
    EXPECT_TRUE(std::isfinite(m["gmse"].get<double>()));
    EXPECT_TRUE(m["hausdorff"].is_number());
  }
  const auto t = run({"compare", "--cloud", c, "--seed", "2", "--table"});
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("MBA"), std::string::npos);
}

TEST_F(Cli, CompareWithFoldsPoolsResiduals) {
  const auto c = cloud(200);
  std::ofstream(path("kf.cfg")) << "split = kfold\nfolds = 4\ngrid = 1,2,3\nmba_max_levels = 4\n";
  const auto r = run({"compare", "--cloud", c, "--config", path("kf.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["methods"][0]["stats"]["count"], 200);
  EXPECT_EQ(j["wqisa_runs"].size(), 4u);
}

TEST_F(Cli, SplitWritesThreeFiles) {
  const auto c = cloud(400);
  const auto r = run({"split", "--cloud", c, "--seed", "5", "--out-prefix", path("part")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::size_t total = 0;
  for (const char* role : {"training", "validation", "test"}) {
    const auto pts = wqisa::read_cloud(wqisa::CloudFile{wqisa::CloudFormat::Xyz, path(std::string("part_") + role + ".xyz"), {}});
    total += pts.size();
  }
  EXPECT_EQ(total, 400u);
  const auto k = run({"split", "--cloud", c, "--scheme", "kfold", "--folds", "3", "--out-prefix", path("kf")});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_TRUE(fs::exists(path("kf_fold2_holdout.xyz")));
}

TEST_F(Cli, SampleAndCsvInput) {
  const auto space = wqisa::TensorSplineSpace::single_element(wqisa::Box2{0, 1, 0, 1}, 1, 1);
  wqisa::Grid g(2, 2);
  g(1, 0) = g(1, 1) = 1;
  wqisa::write_surface(path("ramp.json"), wqisa::SplineSurface(space, g));
  const auto r = run({"sample", "--surface", path("ramp.json"), "--nx", "3", "--ny", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "x,y,z\n0,0,0\n0.5,0,0.5\n1,0,1\n0,1,0\n0.5,1,0.5\n1,1,1\n");

  std::ofstream(path("pts.csv")) << "h,e,n\n0,0,0\n0.5,0.5,0.5\n1,1,1\n";
  const auto e = run({"eval", "--surface", path("ramp.json"), "--cloud", path("pts.csv"), "--x-col", "e", "--y-col",
                      "n", "--z-col", "h"});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(json::parse(e.out)["stats"]["mse"], 0.0);
}
