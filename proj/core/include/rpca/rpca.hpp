#pragma once

#include <optional>

#include <Eigen/Core>

#include "rpca/knngraph.hpp"
#include "rpca/riemann.hpp"

namespace rpca {

/// Eigenpairs of a symmetric matrix, eigenvalues descending. Each
/// eigenvector is signed so that its largest-magnitude entry is positive
/// (first such entry on ties).
struct EigenSystem {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

EigenSystem eigen_sym_desc(const Eigen::MatrixXd& matrix);

struct RpcaResult {
  Eigen::MatrixXd scores;   // n x m
  Eigen::MatrixXd circle;   // p x m
  Eigen::VectorXd inertia;  // p fractions, sum 1
  EigenSystem eigen;
  std::optional<Index> mean_index;

  Index components() const { return scores.cols(); }
};

/// Scores C * V[:, 0..m) with C(i, j) = P(i, l) (x_ij - g_j) / sqrt(S_jj).
Eigen::MatrixXd rpca_scores(const Eigen::MatrixXd& x,
                            const RiemannianMean& mean, const RhoMatrix& rho,
                            const Eigen::MatrixXd& covariance,
                            const Eigen::MatrixXd& eigenvectors, Index m);

/// circle(j, s) = sqrt(lambda_s) * V(j, s).
Eigen::MatrixXd correlation_circle(const EigenSystem& eigen, Index m);

/// lambda_s / sum_t lambda_t after clamping roundoff negatives to zero.
Eigen::VectorXd explained_inertia(const Eigen::VectorXd& eigenvalues);

/// Percentage of inertia carried by the first two components (first
/// component only when p == 1).
double plane_inertia_pct(const RpcaResult& result);

enum class Centering { mean, medoid };

/// Correlation-matrix PCA. With Centering::medoid the columns are centered
/// at the Euclidean medoid row instead of the arithmetic mean and the spread
/// is measured about that row.
RpcaResult classical_pca(const Eigen::MatrixXd& x, Index m,
                         Centering centering = Centering::mean);

/// Euclidean medoid: argmin_i sum_j ||x_i - x_j||^2, lowest index on ties.
Index euclidean_medoid(const Eigen::MatrixXd& x);

struct FitOptions {
  Index components = 2;
  // Skip the graph and use B = 0 (P = 1).
  bool unit_rho = false;
};

struct RpcaFit {
  std::optional<NeighborGraph> graph;
  RiemannianModel model;
  RpcaResult result;
};

/// Completes a fit from an existing similarity matrix.
RpcaFit fit_from_similarity(const Eigen::MatrixXd& x,
                            SimilarityMatrix similarity, Index m);

/// Graph -> B -> P -> D -> g -> S -> R -> eigenpairs -> scores -> circle.
RpcaFit fit_rpca(const Eigen::MatrixXd& x, const GraphParams& params,
                 const FitOptions& options = {});

}  // namespace rpca
