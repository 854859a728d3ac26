#include <sstream>

#include <gtest/gtest.h>

#include "cli.hpp"
#include "rpca/dataio.hpp"
#include "test_util.hpp"

namespace rpca {
namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

TEST(CliGenerate, WritesBenchmarkTable) {
  TempDir dir;
  const auto path = (dir.path() / "data.csv").string();
  const auto r = cli({"generate", "--seed", "7", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ds = load_matrix(path, true, "cluster");
  EXPECT_EQ(ds.data.rows(), 2900);
  EXPECT_EQ(ds.data.cols(), 10);
  EXPECT_EQ(slurp(path).substr(0, slurp(path).find('\n')), "x,y,var1,var2,var3,var4,var5,var6,var7,var8,cluster");
}

TEST(CliGenerate, RequiresSeed) {
  TempDir dir;
  const auto r = cli({"generate", "--out", (dir.path() / "d.csv").string()});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("--seed"), std::string::npos);
}

TEST(CliGenerate, SmallN) {
  TempDir dir;
  const auto path = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "1", "--n", "50", "--out", path}).code, 0);
  const auto ds = load_matrix(path, true, "cluster");
  EXPECT_EQ(ds.data.rows(), 50);
  EXPECT_EQ(std::count(ds.labels->begin(), ds.labels->end(), 4), 10);
}

TEST(CliFit, ClustersResolveK) {
  TempDir dir;
  const auto data = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "2", "--n", "200", "--out", data}).code, 0);
  const auto r = cli({"fit", "--input", data, "--clusters", "5", "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("method=rpca k=40 plane_inertia_pct="), std::string::npos) << r.out;
}

TEST(CliFit, DefaultKAndBounds) {
  TempDir dir;
  const auto data = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "2", "--n", "100", "--out", data}).code, 0);
  auto r = cli({"fit", "--input", data, "--out", (dir.path() / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k=15 "), std::string::npos);
  r = cli({"fit", "--input", data, "--k", "3000"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("k must be < n"), std::string::npos);
  r = cli({"fit", "--input", (dir.path() / "missing.csv").string()});
  EXPECT_NE(r.code, 0);
}

TEST(CliFit, TinyTableShapes) {
  TempDir dir;
  const auto data = dir.write("tiny.csv",
                              "a,b,c\n0,1,2\n1,0.5,2.5\n2,2.5,1\n-1,1.5,0.2\n0.5,-2,1.1\n3,0.1,-1\n");
  const auto out = dir.path() / "o";
  const auto r = cli({"fit", "--input", data.string(), "--k", "2", "--components", "2", "--out",
                      out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(slurp(out / "components.csv")), 7u);
  EXPECT_EQ(count_lines(slurp(out / "eigen.csv")), 4u);
}

TEST(CliFit, BaselineAndDump) {
  TempDir dir;
  const auto data = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "3", "--n", "60", "--out", data}).code, 0);
  auto r = cli({"fit", "--input", data, "--baseline", "--out", (dir.path() / "p").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("method=pca k=- plane_inertia_pct=", 0), 0u);

  r = cli({"fit", "--input", data, "--k", "5", "--dump-matrices", "--out",
           (dir.path() / "r").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "r" / "A.coo"));
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "r" / "B.coo"));
  EXPECT_EQ(count_lines(slurp(dir.path() / "r" / "A.coo")), 60u * 5u);
}

TEST(CliCompare, TableAndSubdirectories) {
  TempDir dir;
  const auto data = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "4", "--n", "150", "--out", data}).code, 0);
  const auto out = dir.path() / "cmp";
  const auto r = cli({"compare", "--input", data, "--clusters", "5", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(r.out), 3u);
  EXPECT_NE(r.out.find("\npca "), std::string::npos);
  EXPECT_NE(r.out.find("\nrpca "), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(out / "pca" / "eigen.csv"));
  EXPECT_TRUE(std::filesystem::exists(out / "rpca" / "eigen.csv"));
}

TEST(CliCompare, UnitRhoWithMedoidCenteringAgrees) {
  TempDir dir;
  const auto data = (dir.path() / "d.csv").string();
  ASSERT_EQ(cli({"generate", "--seed", "4", "--n", "150", "--out", data}).code, 0);
  const auto out = dir.path() / "cmp";
  const auto r = cli({"compare", "--input", data, "--rho-one", "--center-medoid", "--out",
                      out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto pca = slurp(out / "pca" / "eigen.csv");
  const auto rpca = slurp(out / "rpca" / "eigen.csv");
  std::istringstream a(pca), b(rpca);
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  while (std::getline(a, la) && std::getline(b, lb)) {
    const double ea = std::stod(la.substr(la.find(',') + 1));
    const double eb = std::stod(lb.substr(lb.find(',') + 1));
    EXPECT_NEAR(ea, eb, 1e-8);
  }
}

TEST(Cli, UnknownCommandFails) {
  EXPECT_NE(cli({"frobnicate"}).code, 0);
  EXPECT_NE(cli({}).code, 0);
}

}  // namespace
}  // namespace rpca
