#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace rpca {

using Index = Eigen::Index;

/// Row-indexed sparse matrix; used for the directed affinities A.
using SparseRows = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class Metric { euclidean, manhattan };

struct GraphParams {
  Index k = 15;
  Metric metric = Metric::euclidean;
  double sigma_tol = 1e-5;
  int sigma_max_iter = 64;
  // sigma_min = sigma_min_scale * mean(neighbor distances of the row)
  double sigma_min_scale = 1e-3;
  // Largest n for which the n x n similarity matrix is materialized.
  Index dense_cap = 10000;

  void validate(Index n) const;
};

/// Exact k nearest neighbors of every row, self excluded. Row i's entries
/// live at [i*k, (i+1)*k) and are sorted by (distance, index).
struct KnnResult {
  Index n = 0;
  Index k = 0;
  std::vector<Index> indices;
  std::vector<double> distances;

  std::span<const Index> neighbors(Index i) const {
    return {indices.data() + i * k, static_cast<std::size_t>(k)};
  }
  std::span<const double> dists(Index i) const {
    return {distances.data() + i * k, static_cast<std::size_t>(k)};
  }
};

double distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                const Eigen::Ref<const Eigen::VectorXd>& b, Metric metric);

/// Brute-force exact search. Ties at the cut are broken by row index.
KnnResult knn_neighbors(const Eigen::MatrixXd& x, const GraphParams& params);

struct Connectivity {
  double rho = 0.0;
  // All neighbor distances are zero; rho is undefined and reported as 0.
  bool degenerate = false;
};

/// Smallest strictly positive entry of `dists`.
Connectivity local_connectivity(std::span<const double> dists);

struct SigmaResult {
  double sigma = 1.0;
  // The target mass log2(k) is not attainable for any sigma > 0.
  bool clamped = false;
  int iterations = 0;
  double residual = 0.0;
};

/// Affinity mass sum_j exp(-max(0, d_j - rho) / sigma).
double affinity_mass(std::span<const double> dists, double rho, double sigma);

/// Solves affinity_mass(dists, rho, sigma) = log2(k) for sigma by bisection.
///
/// The solve runs on distances divided by their mean so that the iterates
/// (and therefore the weights) are invariant to a global rescaling of the
/// data. In those units the bracket starts at [1e-12, 1] and the upper end
/// doubles until the mass reaches the target; then at most sigma_max_iter
/// halvings, stopping early once |mass - target| <= sigma_tol.
///
/// The target is unattainable when the number of zero offsets is already at
/// least log2(k) (the mass never drops below that count). The result is then
/// clamped to sigma_min_scale * mean(dists). A row whose distances are all
/// zero gets sigma = 1.
SigmaResult smooth_sigma(std::span<const double> dists, double rho,
                         const GraphParams& params);

/// A(i, j) = exp(-max(0, d(i, j) - rho_i) / sigma_i) for j in neighbors(i).
SparseRows directed_weights(const KnnResult& knn, std::span<const double> rho,
                            std::span<const double> sigma);

struct NeighborGraph {
  KnnResult knn;
  std::vector<double> rho;
  std::vector<double> sigma;
  std::vector<char> degenerate;
  std::vector<char> sigma_clamped;
  SparseRows weights;

  Index degenerate_rows() const;
};

NeighborGraph build_graph(const Eigen::MatrixXd& x, const GraphParams& params);

/// Symmetric fuzzy-union similarity B with zero diagonal.
struct SimilarityMatrix {
  Eigen::MatrixXd values;

  Index size() const { return values.rows(); }
  static SimilarityMatrix zero(Index n);
};

/// B = A + A^T - A o A^T, evaluated pairwise as a + b - a*b with the operands
/// ordered by (min(i,j), max(i,j)) so that B is exactly symmetric.
/// Throws if an entry of A lies outside [0, 1], if A has a diagonal entry,
/// or if n exceeds `dense_cap`.
SimilarityMatrix symmetrize(const SparseRows& a, Index dense_cap = 10000);

/// Coordinate-format dump: "i j value" per line, sorted by (i, j), zeros
/// skipped.
void write_coordinate(const SparseRows& m, const std::filesystem::path& path);
void write_coordinate(const Eigen::MatrixXd& m,
                      const std::filesystem::path& path);

}  // namespace rpca
