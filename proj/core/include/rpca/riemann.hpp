#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "rpca/knngraph.hpp"

namespace rpca {

/// P(a, b) = 1 - B(a, b): the scale applied to x_a - x_b by the local
/// subtraction. P is symmetric with unit diagonal.
struct RhoMatrix {
  Eigen::MatrixXd values;

  Index size() const { return values.rows(); }
};

RhoMatrix rho_coefficients(const SimilarityMatrix& similarity);

/// x_a (-) x_b = rho_ab * (x_a - x_b).
Eigen::VectorXd riemann_subtract(const Eigen::Ref<const Eigen::VectorXd>& a,
                                 const Eigen::Ref<const Eigen::VectorXd>& b,
                                 double rho_ab);

/// D(a, b) = P(a, b) * ||x_a - x_b||_2. Exactly symmetric, zero diagonal.
Eigen::MatrixXd riemann_distance_matrix(const Eigen::MatrixXd& x,
                                        const RhoMatrix& rho);

struct RiemannianMean {
  Index index = 0;
  Eigen::VectorXd g;
  // P(i, index) for every row i.
  Eigen::VectorXd rho_to_mean;
  // sum_j D(index, j)^2
  double objective = 0.0;
};

/// Row minimizing sum_j D(i, j)^2; ties go to the lowest index.
RiemannianMean riemann_mean(const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& distances,
                            const RhoMatrix& rho);

/// S = (1/n) sum_i P(i, l)^2 (x_i - g)(x_i - g)^T with g = x_l.
Eigen::MatrixXd riemann_covariance(const Eigen::MatrixXd& x,
                                   const RiemannianMean& mean,
                                   const RhoMatrix& rho);

/// R(i, j) = S(i, j) / sqrt(S(i, i) S(j, j)). Throws DegenerateVariable when
/// some S(j, j) is zero.
Eigen::MatrixXd riemann_correlation(const Eigen::MatrixXd& covariance);

struct RiemannianModel {
  SimilarityMatrix similarity;
  RhoMatrix rho;
  Eigen::MatrixXd distances;
  RiemannianMean mean;
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd correlation;
};

/// Runs P -> D -> mean -> S -> R on a given similarity matrix.
RiemannianModel build_model(const Eigen::MatrixXd& x,
                            SimilarityMatrix similarity);

}  // namespace rpca
