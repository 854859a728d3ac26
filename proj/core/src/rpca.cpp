#include "rpca/rpca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "rpca/dataio.hpp"

namespace rpca {

namespace {

constexpr double kNegativeEigenTol = 1e-10;
constexpr double kSignTieTol = 1e-12;

void check_components(Index m, Index p) {
  if (m < 1 || m > p)
    throw std::invalid_argument("number of components must be in [1, " + std::to_string(p) +
                                "], got " + std::to_string(m));
}

}  // namespace

EigenSystem eigen_sym_desc(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("matrix must be square");
  if (!matrix.allFinite()) throw std::invalid_argument("matrix has non-finite entries");
  const Index p = matrix.rows();
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

  // Eigen returns ascending order.
  EigenSystem es;
  es.values = solver.eigenvalues().reverse();
  es.vectors = solver.eigenvectors().rowwise().reverse();
  // Magnitudes within roundoff of the maximum count as tied; the lowest index wins.
  for (Index s = 0; s < p; ++s) {
    const double best = es.vectors.col(s).cwiseAbs().maxCoeff();
    Index arg = 0;
    while (std::abs(es.vectors(arg, s)) < best * (1.0 - kSignTieTol)) ++arg;
    if (es.vectors(arg, s) < 0.0) es.vectors.col(s) *= -1.0;
  }
  return es;
}

Eigen::MatrixXd rpca_scores(const Eigen::MatrixXd& x, const RiemannianMean& mean,
                            const RhoMatrix& rho, const Eigen::MatrixXd& covariance,
                            const Eigen::MatrixXd& eigenvectors, Index m) {
  const Index n = x.rows();
  const Index p = x.cols();
  check_components(m, p);
  if (rho.size() != n || covariance.rows() != p || eigenvectors.rows() != p)
    throw std::invalid_argument("rpca_scores: inconsistent sizes");

  Eigen::MatrixXd c = x.rowwise() - mean.g.transpose();
  c.array().colwise() *= rho.values.col(mean.index).array();
  for (Index j = 0; j < p; ++j) {
    if (!(covariance(j, j) > 0.0))
      throw DegenerateVariable(j, "variable " + std::to_string(j) +
                                      " has zero Riemannian variance");
    c.col(j) /= std::sqrt(covariance(j, j));
  }
  return c * eigenvectors.leftCols(m);
}

Eigen::MatrixXd correlation_circle(const EigenSystem& eigen, Index m) {
  const Index p = eigen.vectors.rows();
  check_components(m, p);
  Eigen::MatrixXd circle(p, m);
  for (Index s = 0; s < m; ++s) {
    const double lambda = eigen.values(s);
    if (lambda < -kNegativeEigenTol)
      throw std::invalid_argument("negative eigenvalue " + std::to_string(lambda));
    circle.col(s) = std::sqrt(std::max(0.0, lambda)) * eigen.vectors.col(s);
  }
  return circle;
}

Eigen::VectorXd explained_inertia(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) throw std::invalid_argument("empty spectrum");
  if (eigenvalues.minCoeff() < -kNegativeEigenTol)
    throw std::invalid_argument("negative eigenvalue " + std::to_string(eigenvalues.minCoeff()));
  const Eigen::VectorXd clamped = eigenvalues.cwiseMax(0.0);
  const double total = clamped.sum();
  if (!(total > 0.0)) throw std::invalid_argument("all-zero spectrum");
  return clamped / total;
}

double plane_inertia_pct(const RpcaResult& result) {
  const Index m = std::min<Index>(2, result.inertia.size());
  return 100.0 * result.inertia.head(m).sum();
}

Index euclidean_medoid(const Eigen::MatrixXd& x) {
  const Index n = x.rows();
  if (n < 1) throw std::invalid_argument("medoid of an empty table");
  Index best = 0;
  double best_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double sum = (x.rowwise() - x.row(i)).rowwise().squaredNorm().sum();
    if (i == 0 || sum < best_sum) {
      best = i;
      best_sum = sum;
    }
  }
  return best;
}

RpcaResult classical_pca(const Eigen::MatrixXd& x, Index m, Centering centering) {
  const Index n = x.rows();
  const Index p = x.cols();
  check_components(m, p);

  RpcaResult res;
  Eigen::RowVectorXd center;
  if (centering == Centering::medoid) {
    res.mean_index = euclidean_medoid(x);
    center = x.row(*res.mean_index);
  } else {
    center = x.colwise().mean();
  }

  Eigen::MatrixXd z = x.rowwise() - center;
  for (Index j = 0; j < p; ++j) {
    const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
    if (!(sd > 0.0))
      throw DegenerateVariable(j, "variable " + std::to_string(j) + " has zero variance");
    z.col(j) /= sd;
  }
  const Eigen::MatrixXd r = (z.transpose() * z) / static_cast<double>(n);

  res.eigen = eigen_sym_desc(r);
  res.scores = z * res.eigen.vectors.leftCols(m);
  res.circle = correlation_circle(res.eigen, m);
  res.inertia = explained_inertia(res.eigen.values);
  return res;
}

RpcaFit fit_from_similarity(const Eigen::MatrixXd& x, SimilarityMatrix similarity, Index m) {
  check_components(m, x.cols());
  RpcaFit fit;
  fit.model = build_model(x, std::move(similarity));
  auto& res = fit.result;
  res.eigen = eigen_sym_desc(fit.model.correlation);
  res.scores = rpca_scores(x, fit.model.mean, fit.model.rho, fit.model.covariance,
                           res.eigen.vectors, m);
  res.circle = correlation_circle(res.eigen, m);
  res.inertia = explained_inertia(res.eigen.values);
  res.mean_index = fit.model.mean.index;
  return fit;
}

RpcaFit fit_rpca(const Eigen::MatrixXd& x, const GraphParams& params, const FitOptions& options) {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("empty data matrix");
  if (!x.allFinite()) throw std::invalid_argument("data matrix has non-finite entries");
  check_components(options.components, x.cols());

  if (options.unit_rho) return fit_from_similarity(x, SimilarityMatrix::zero(x.rows()), options.components);

  params.validate(x.rows());
  NeighborGraph graph = build_graph(x, params);
  SimilarityMatrix b = symmetrize(graph.weights, params.dense_cap);
  RpcaFit fit = fit_from_similarity(x, std::move(b), options.components);
  fit.graph = std::move(graph);
  return fit;
}

}  // namespace rpca
