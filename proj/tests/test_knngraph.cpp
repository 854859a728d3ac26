#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "rpca/knngraph.hpp"
#include "test_util.hpp"

namespace rpca {
namespace {

GraphParams params_k(Index k) {
  GraphParams p;
  p.k = k;
  return p;
}

TEST(KnnNeighbors, ColinearPoints) {
  Eigen::MatrixXd x(4, 1);
  x << 0, 1, 2, 3;
  const auto knn = knn_neighbors(x, params_k(2));
  EXPECT_EQ(knn.neighbors(0)[0], 1);
  EXPECT_EQ(knn.neighbors(0)[1], 2);
  EXPECT_DOUBLE_EQ(knn.dists(0)[0], 1.0);
  EXPECT_DOUBLE_EQ(knn.dists(0)[1], 2.0);
  // Point 1 sees 0 and 2 at distance 1; the lower index comes first.
  EXPECT_EQ(knn.neighbors(1)[0], 0);
  EXPECT_EQ(knn.neighbors(1)[1], 2);
}

TEST(KnnNeighbors, DuplicatesSeeEachOtherAtZero) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0, 0, 0, 1, 1, 5, 5;
  const auto knn = knn_neighbors(x, params_k(2));
  EXPECT_EQ(knn.neighbors(0)[0], 1);
  EXPECT_EQ(knn.dists(0)[0], 0.0);
  EXPECT_EQ(knn.neighbors(1)[0], 0);
  EXPECT_EQ(knn.dists(1)[0], 0.0);
}

TEST(KnnNeighbors, MatchesSortAllOracle) {
  std::mt19937_64 rng(2024);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 50, 5);
  const auto knn = knn_neighbors(x, params_k(5));
  const auto ref = oracle::knn(x, 5);
  for (Index i = 0; i < 50; ++i) {
    for (Index s = 0; s < 5; ++s) {
      EXPECT_EQ(knn.neighbors(i)[s], ref.idx[i][s]);
      EXPECT_NEAR(knn.dists(i)[s], ref.dist[i][s], 1e-12);
    }
  }
}

TEST(KnnNeighbors, SelfExcludedAndSorted) {
  std::mt19937_64 rng(9);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 40, 3);
  const auto knn = knn_neighbors(x, params_k(7));
  for (Index i = 0; i < 40; ++i) {
    for (Index s = 0; s < 7; ++s) {
      EXPECT_NE(knn.neighbors(i)[s], i);
      if (s > 0) EXPECT_LE(knn.dists(i)[s - 1], knn.dists(i)[s]);
    }
  }
}

TEST(KnnNeighbors, ManhattanMetric) {
  Eigen::MatrixXd x(3, 2);
  x << 0, 0, 1, 1, 0, 1.5;
  auto p = params_k(2);
  p.metric = Metric::manhattan;
  const auto knn = knn_neighbors(x, p);
  EXPECT_EQ(knn.neighbors(0)[0], 2);
  EXPECT_DOUBLE_EQ(knn.dists(0)[0], 1.5);
  EXPECT_DOUBLE_EQ(knn.dists(0)[1], 2.0);
}

TEST(KnnNeighbors, RejectsKAtLeastN) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 2);
  EXPECT_THROW(knn_neighbors(x, params_k(5)), std::invalid_argument);
  EXPECT_THROW(knn_neighbors(x, params_k(0)), std::invalid_argument);
}

TEST(LocalConnectivity, Examples) {
  const std::vector<double> a{0.0, 0.5, 0.9};
  EXPECT_DOUBLE_EQ(local_connectivity(a).rho, 0.5);
  EXPECT_FALSE(local_connectivity(a).degenerate);
  const std::vector<double> b{0.2, 0.3};
  EXPECT_DOUBLE_EQ(local_connectivity(b).rho, 0.2);
  const std::vector<double> c{0.0, 0.0, 0.0};
  EXPECT_EQ(local_connectivity(c).rho, 0.0);
  EXPECT_TRUE(local_connectivity(c).degenerate);
}

TEST(SmoothSigma, ClosedFormFourNeighbors) {
  // 1 + 3 exp(-t / sigma) = 2  =>  sigma = t / ln 3
  const double rho = 0.7, t = 0.4;
  const std::vector<double> d{rho, rho + t, rho + t, rho + t};
  auto p = params_k(4);
  p.sigma_tol = 1e-12;
  const auto res = smooth_sigma(d, rho, p);
  EXPECT_FALSE(res.clamped);
  EXPECT_NEAR(res.sigma, t / std::log(3.0), 1e-9);
}

TEST(SmoothSigma, TwoNeighborsClamp) {
  const std::vector<double> d{1.0, 1.5};
  const auto p = params_k(2);
  const auto res = smooth_sigma(d, 1.0, p);
  EXPECT_TRUE(res.clamped);
  EXPECT_DOUBLE_EQ(res.sigma, p.sigma_min_scale * 1.25);
}

TEST(SmoothSigma, AllZeroDistances) {
  const std::vector<double> d{0.0, 0.0, 0.0};
  const auto res = smooth_sigma(d, 0.0, params_k(3));
  EXPECT_TRUE(res.clamped);
  EXPECT_EQ(res.sigma, 1.0);
}

TEST(SmoothSigma, RandomRowsAgainstGrid) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d(10);
    for (auto& v : d) v = u(rng);
    std::sort(d.begin(), d.end());
    const double rho = d[0];
    const auto res = smooth_sigma(d, rho, params_k(10));
    const auto grid = oracle::sigma_grid(d, rho);
    ASSERT_TRUE(grid.found);
    ASSERT_FALSE(res.clamped);
    EXPECT_LT(std::abs(oracle::mass(d, rho, res.sigma) - std::log2(10.0)), 1e-4);
    EXPECT_GE(res.sigma, grid.lo * (1 - 1e-9));
    EXPECT_LE(res.sigma, grid.hi * (1 + 1e-9));
  }
}

TEST(SmoothSigma, MassIsMonotoneInSigma) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> d(15);
  for (auto& v : d) v = u(rng);
  std::sort(d.begin(), d.end());
  double prev = 0.0;
  for (double s = 1e-4; s < 1e4; s *= 1.5) {
    const double m = affinity_mass(d, d[0], s);
    EXPECT_GE(m, prev);
    prev = m;
  }
}

TEST(DirectedWeights, ClosedForms) {
  KnnResult knn;
  knn.n = 4;
  knn.k = 3;
  const double rho = 0.5, sigma = 0.8;
  // Row 0: duplicate at 0, nearest positive at rho, one at rho + sigma ln 2.
  knn.indices = {1, 2, 3, 0, 2, 3, 0, 1, 3, 0, 1, 2};
  knn.distances = {0.0, rho, rho + sigma * std::log(2.0), 1, 2, 3, 1, 2, 3, 1, 2, 3};
  const std::vector<double> rhos{rho, 1, 1, 1};
  const std::vector<double> sigmas{sigma, 1, 1, 1};
  const auto a = directed_weights(knn, rhos, sigmas);
  EXPECT_EQ(a.coeff(0, 1), 1.0);
  EXPECT_EQ(a.coeff(0, 2), 1.0);
  EXPECT_NEAR(a.coeff(0, 3), 0.5, 1e-15);
  EXPECT_EQ(a.nonZeros(), 12);
}

TEST(BuildGraph, Invariants) {
  std::mt19937_64 rng(31);
  Eigen::MatrixXd x = oracle::random_matrix(rng, 60, 4);
  x.row(7) = x.row(3);  // one duplicate pair
  const auto g = build_graph(x, params_k(6));
  EXPECT_LE(g.weights.nonZeros(), 60 * 6);
  for (Index i = 0; i < 60; ++i) {
    double maxw = 0.0;
    for (SparseRows::InnerIterator it(g.weights, i); it; ++it) {
      EXPECT_GE(it.value(), 0.0);
      EXPECT_LE(it.value(), 1.0);
      EXPECT_NE(it.col(), i);
      maxw = std::max(maxw, it.value());
    }
    EXPECT_EQ(maxw, 1.0);
    EXPECT_GT(g.sigma[i], 0.0);
    EXPECT_EQ(g.rho[i], local_connectivity(g.knn.dists(i)).rho);
  }
  EXPECT_EQ(g.degenerate_rows(), 0);
}

TEST(BuildGraph, AllDuplicateRowIsDegenerate) {
  Eigen::MatrixXd x(5, 1);
  x << 0, 0, 0, 4, 9;
  const auto g = build_graph(x, params_k(2));
  EXPECT_TRUE(g.degenerate[0]);
  EXPECT_EQ(g.rho[0], 0.0);
  EXPECT_EQ(g.sigma[0], 1.0);
  EXPECT_EQ(g.weights.coeff(0, 1), 1.0);
  EXPECT_EQ(g.weights.coeff(0, 2), 1.0);
  EXPECT_EQ(g.degenerate_rows(), 3);
}

TEST(BuildGraph, ScaleEquivariance) {
  std::mt19937_64 rng(8);
  const Eigen::MatrixXd x = oracle::random_matrix(rng, 80, 3);
  const auto a = build_graph(x, params_k(8));
  for (double c : {0.5, 3.0, 100.0}) {
    const auto b = build_graph(x * c, params_k(8));
    EXPECT_LT((Eigen::MatrixXd(a.weights) - Eigen::MatrixXd(b.weights)).cwiseAbs().maxCoeff(), 1e-12)
        << "c=" << c;
  }
}

TEST(Symmetrize, Examples) {
  SparseRows a(3, 3);
  a.insert(0, 1) = 1.0;
  a.insert(1, 2) = 0.5;
  a.insert(2, 1) = 0.5;
  a.insert(2, 0) = 1.0;
  a.insert(0, 2) = 1.0;
  a.makeCompressed();
  const auto b = symmetrize(a);
  EXPECT_EQ(b.values(0, 1), 1.0);  // one-sided
  EXPECT_EQ(b.values(1, 0), 1.0);
  EXPECT_EQ(b.values(1, 2), 0.75);
  EXPECT_EQ(b.values(0, 2), 1.0);  // union cap
  for (Index i = 0; i < 3; ++i) EXPECT_EQ(b.values(i, i), 0.0);
}

TEST(Symmetrize, RejectsInvalidInput) {
  SparseRows a(2, 2);
  a.insert(0, 1) = 1.5;
  EXPECT_THROW(symmetrize(a), std::invalid_argument);
  SparseRows neg(2, 2);
  neg.insert(1, 0) = -0.1;
  EXPECT_THROW(symmetrize(neg), std::invalid_argument);
  SparseRows loop(2, 2);
  loop.insert(1, 1) = 0.5;
  EXPECT_THROW(symmetrize(loop), std::invalid_argument);
  SparseRows big(5, 5);
  EXPECT_THROW(symmetrize(big, 4), std::invalid_argument);
}

TEST(WriteCoordinate, SortedTriplets) {
  TempDir dir;
  SparseRows a(3, 3);
  a.insert(2, 0) = 0.25;
  a.insert(0, 2) = 1.0;
  a.insert(0, 1) = 0.5;
  a.makeCompressed();
  write_coordinate(a, dir.path() / "a.coo");
  EXPECT_EQ(slurp(dir.path() / "a.coo"), "0 1 0.5\n0 2 1\n2 0 0.25\n");
  write_coordinate(symmetrize(a).values, dir.path() / "b.coo");
  EXPECT_EQ(slurp(dir.path() / "b.coo"),
            "0 1 0.5\n0 2 1\n1 0 0.5\n2 0 1\n");
}

}  // namespace
}  // namespace rpca
