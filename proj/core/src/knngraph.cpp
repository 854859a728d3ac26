#include "rpca/knngraph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rpca/results_io.hpp"

namespace rpca {

void GraphParams::validate(Index n) const {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (k >= n)
    throw std::invalid_argument("k must be < n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  if (!(sigma_tol > 0.0)) throw std::invalid_argument("sigma_tol must be positive");
  if (sigma_max_iter < 1) throw std::invalid_argument("sigma_max_iter must be at least 1");
  if (!(sigma_min_scale > 0.0)) throw std::invalid_argument("sigma_min_scale must be positive");
}

double distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, Metric metric) {
  switch (metric) {
    case Metric::manhattan:
      return (a - b).cwiseAbs().sum();
    case Metric::euclidean:
    default:
      return (a - b).norm();
  }
}

KnnResult knn_neighbors(const Eigen::MatrixXd& x, const GraphParams& params) {
  const Index n = x.rows();
  params.validate(n);
  const Index k = params.k;

  // Rows as contiguous columns for the inner distance loop.
  const Eigen::MatrixXd xt = x.transpose();

  KnnResult out;
  out.n = n;
  out.k = k;
  out.indices.resize(n * k);
  out.distances.resize(n * k);

#pragma omp parallel
  {
    std::vector<std::pair<double, Index>> cand(n - 1);
#pragma omp for schedule(static)
    for (Index i = 0; i < n; ++i) {
      Index c = 0;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        cand[c++] = {distance(xt.col(i), xt.col(j), params.metric), j};
      }
      // pair ordering is (distance, index): ties resolve to the lower row.
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
      for (Index s = 0; s < k; ++s) {
        out.distances[i * k + s] = cand[s].first;
        out.indices[i * k + s] = cand[s].second;
      }
    }
  }
  return out;
}

Connectivity local_connectivity(std::span<const double> dists) {
  Connectivity c;
  for (double d : dists) {
    if (d > 0.0 && (c.rho == 0.0 || d < c.rho)) c.rho = d;
  }
  c.degenerate = (c.rho == 0.0);
  return c;
}

double affinity_mass(std::span<const double> dists, double rho, double sigma) {
  double sum = 0.0;
  for (double d : dists) sum += std::exp(-std::max(0.0, d - rho) / sigma);
  return sum;
}

SigmaResult smooth_sigma(std::span<const double> dists, double rho, const GraphParams& params) {
  SigmaResult res;
  if (dists.empty()) return res;
  const double scale = std::accumulate(dists.begin(), dists.end(), 0.0) /
                       static_cast<double>(dists.size());
  const double target = std::log2(static_cast<double>(dists.size()));

  if (!(scale > 0.0)) {
    // Every neighbor coincides with the point.
    res.sigma = 1.0;
    res.clamped = true;
    res.residual = static_cast<double>(dists.size()) - target;
    return res;
  }

  std::vector<double> offsets(dists.size());
  std::size_t zero_offsets = 0;
  for (std::size_t j = 0; j < dists.size(); ++j) {
    offsets[j] = std::max(0.0, dists[j] - rho) / scale;
    if (offsets[j] == 0.0) ++zero_offsets;
  }
  auto mass = [&](double s) {
    double sum = 0.0;
    for (double o : offsets) sum += std::exp(-o / s);
    return sum;
  };

  if (static_cast<double>(zero_offsets) >= target) {
    res.sigma = params.sigma_min_scale * scale;
    res.clamped = true;
    res.residual = static_cast<double>(zero_offsets) - target;
    return res;
  }

  double lo = 1e-12;
  double hi = 1.0;
  constexpr double kHiCap = 0x1.0p64;
  while (mass(hi) < target && hi < kHiCap) {
    lo = hi;
    hi *= 2.0;
  }

  double mid = hi;
  double resid = mass(hi) - target;
  for (int it = 0; it < params.sigma_max_iter; ++it) {
    mid = 0.5 * (lo + hi);
    resid = mass(mid) - target;
    res.iterations = it + 1;
    if (std::abs(resid) <= params.sigma_tol) break;
    if (resid > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  res.sigma = mid * scale;
  res.residual = resid;
  return res;
}

SparseRows directed_weights(const KnnResult& knn, std::span<const double> rho,
                            std::span<const double> sigma) {
  const Index n = knn.n;
  if (static_cast<Index>(rho.size()) != n || static_cast<Index>(sigma.size()) != n)
    throw std::invalid_argument("rho/sigma size does not match the neighbor graph");
  SparseRows a(n, n);
  a.reserve(Eigen::VectorXi::Constant(n, static_cast<int>(knn.k)));
  for (Index i = 0; i < n; ++i) {
    auto nb = knn.neighbors(i);
    auto ds = knn.dists(i);
    for (Index s = 0; s < knn.k; ++s) {
      a.insert(i, nb[s]) = std::exp(-std::max(0.0, ds[s] - rho[i]) / sigma[i]);
    }
  }
  a.makeCompressed();
  return a;
}

Index NeighborGraph::degenerate_rows() const {
  return std::count(degenerate.begin(), degenerate.end(), 1);
}

NeighborGraph build_graph(const Eigen::MatrixXd& x, const GraphParams& params) {
  NeighborGraph g;
  g.knn = knn_neighbors(x, params);
  const Index n = x.rows();
  g.rho.resize(n);
  g.sigma.resize(n);
  g.degenerate.assign(n, 0);
  g.sigma_clamped.assign(n, 0);
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const auto conn = local_connectivity(g.knn.dists(i));
    const auto sig = smooth_sigma(g.knn.dists(i), conn.rho, params);
    g.rho[i] = conn.rho;
    g.degenerate[i] = conn.degenerate ? 1 : 0;
    g.sigma[i] = sig.sigma;
    g.sigma_clamped[i] = sig.clamped ? 1 : 0;
  }
  g.weights = directed_weights(g.knn, g.rho, g.sigma);
  return g;
}

SimilarityMatrix SimilarityMatrix::zero(Index n) {
  return {Eigen::MatrixXd::Zero(n, n)};
}

SimilarityMatrix symmetrize(const SparseRows& a, Index dense_cap) {
  if (a.rows() != a.cols()) throw std::invalid_argument("adjacency matrix must be square");
  const Index n = a.rows();
  if (n > dense_cap)
    throw std::invalid_argument("n=" + std::to_string(n) + " exceeds the dense similarity cap " +
                                std::to_string(dense_cap));

  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseRows::InnerIterator it(a, i); it; ++it) {
      const double v = it.value();
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("adjacency entry (" + std::to_string(it.row()) + ", " +
                                    std::to_string(it.col()) + ") = " + format_double(v) +
                                    " outside [0, 1]");
      if (it.row() == it.col() && v != 0.0)
        throw std::invalid_argument("adjacency matrix has a self-loop at row " +
                                    std::to_string(it.row()));
    }
  }

  SimilarityMatrix b{Eigen::MatrixXd::Zero(n, n)};
  for (Index i = 0; i < a.outerSize(); ++i) {
    for (SparseRows::InnerIterator it(a, i); it; ++it) {
      const Index lo = std::min(it.row(), it.col());
      const Index hi = std::max(it.row(), it.col());
      if (lo == hi) continue;
      const double fwd = a.coeff(lo, hi);
      const double bwd = a.coeff(hi, lo);
      const double v = fwd + bwd - fwd * bwd;
      b.values(lo, hi) = v;
      b.values(hi, lo) = v;
    }
  }
  return b;
}

void write_coordinate(const SparseRows& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Index i = 0; i < m.outerSize(); ++i) {
    // Row-major inner indices are sorted once compressed.
    for (SparseRows::InnerIterator it(m, i); it; ++it) {
      if (it.value() != 0.0)
        out << it.row() << ' ' << it.col() << ' ' << format_double(it.value()) << '\n';
    }
  }
}

void write_coordinate(const Eigen::MatrixXd& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out << i << ' ' << j << ' ' << format_double(m(i, j)) << '\n';
}

}  // namespace rpca
