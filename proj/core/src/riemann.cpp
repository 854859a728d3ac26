#include "rpca/riemann.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rpca/dataio.hpp"

namespace rpca {

RhoMatrix rho_coefficients(const SimilarityMatrix& similarity) {
  RhoMatrix p;
  p.values = (1.0 - similarity.values.array()).matrix();
  return p;
}

Eigen::VectorXd riemann_subtract(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b, double rho_ab) {
  if (a.size() != b.size()) throw std::invalid_argument("riemann_subtract: size mismatch");
  return rho_ab * (a - b);
}

Eigen::MatrixXd riemann_distance_matrix(const Eigen::MatrixXd& x, const RhoMatrix& rho) {
  const Index n = x.rows();
  if (rho.size() != n || rho.values.cols() != n)
    throw std::invalid_argument("rho matrix does not match the data");
  const Eigen::MatrixXd xt = x.transpose();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 16)
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const double v = rho.values(a, b) * (xt.col(a) - xt.col(b)).norm();
      d(a, b) = v;
      d(b, a) = v;
    }
  }
  return d;
}

RiemannianMean riemann_mean(const Eigen::MatrixXd& x, const Eigen::MatrixXd& distances,
                            const RhoMatrix& rho) {
  const Index n = distances.rows();
  if (n < 1 || distances.cols() != n || x.rows() != n || rho.size() != n)
    throw std::invalid_argument("riemann_mean: inconsistent sizes");

  RiemannianMean m;
  m.objective = 0.0;
  for (Index i = 0; i < n; ++i) {
    double sum = 0.0;
    for (Index j = 0; j < n; ++j) sum += distances(j, i) * distances(j, i);
    if (i == 0 || sum < m.objective) {
      m.index = i;
      m.objective = sum;
    }
  }
  m.g = x.row(m.index).transpose();
  m.rho_to_mean = rho.values.col(m.index);
  return m;
}

Eigen::MatrixXd riemann_covariance(const Eigen::MatrixXd& x, const RiemannianMean& mean,
                                   const RhoMatrix& rho) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (mean.index < 0 || mean.index >= n || rho.size() != n)
    throw std::invalid_argument("riemann_covariance: inconsistent sizes");

  // Rows of c are x_i (-) g.
  Eigen::MatrixXd c = x.rowwise() - mean.g.transpose();
  c.array().colwise() *= rho.values.col(mean.index).array();

  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(p, p);
  s.selfadjointView<Eigen::Lower>().rankUpdate(c.transpose(), 1.0 / static_cast<double>(n));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

Eigen::MatrixXd riemann_correlation(const Eigen::MatrixXd& covariance) {
  const Index p = covariance.rows();
  if (covariance.cols() != p) throw std::invalid_argument("covariance must be square");
  Eigen::VectorXd sd(p);
  for (Index j = 0; j < p; ++j) {
    if (!(covariance(j, j) > 0.0))
      throw DegenerateVariable(j, "variable " + std::to_string(j) +
                                      " has zero Riemannian variance");
    sd(j) = std::sqrt(covariance(j, j));
  }
  Eigen::MatrixXd r(p, p);
  for (Index i = 0; i < p; ++i) {
    r(i, i) = 1.0;
    for (Index j = 0; j < i; ++j) {
      const double v = covariance(i, j) / (sd(i) * sd(j));
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

RiemannianModel build_model(const Eigen::MatrixXd& x, SimilarityMatrix similarity) {
  if (similarity.size() != x.rows())
    throw std::invalid_argument("similarity matrix does not match the data");
  RiemannianModel m;
  m.rho = rho_coefficients(similarity);
  m.similarity = std::move(similarity);
  m.distances = riemann_distance_matrix(x, m.rho);
  m.mean = riemann_mean(x, m.distances, m.rho);
  m.covariance = riemann_covariance(x, m.mean, m.rho);
  m.correlation = riemann_correlation(m.covariance);
  return m;
}

}  // namespace rpca
