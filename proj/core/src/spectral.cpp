#include "rssloc/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace rssloc {

bool psd_check(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("psd_check: non-square input");
  }
  if (matrix.rows() == 0) return true;
  const Eigen::MatrixXd sym = 0.5 * (matrix + matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Eigen::Matrix2d factor_covariance(const Eigen::Matrix2d& C) {
  const Eigen::Matrix2d sym = 0.5 * (C + C.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sym);
  const Eigen::Vector2d clipped = es.eigenvalues().cwiseMax(0.0);
  // V = Lambda^{1/2} Q^T so that V^T V = Q Lambda Q^T.
  return clipped.cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

std::pair<double, Eigen::VectorXd> rank_one_extract(const Eigen::MatrixXd& X) {
  if (!psd_check(X, 1e-8)) {
    throw std::invalid_argument("rank_one_extract: input is not PSD within 1e-8");
  }
  const Eigen::MatrixXd sym = 0.5 * (X + X.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const int last = static_cast<int>(sym.rows()) - 1;
  double lambda = es.eigenvalues()[last];
  Eigen::VectorXd q = es.eigenvectors().col(last);
  for (int i = 0; i < q.size(); ++i) {
    if (std::abs(q[i]) > 1e-12) {
      if (q[i] < 0.0) q = -q;
      break;
    }
  }
  return {std::max(lambda, 0.0), q};
}

Point2 gaussian_sample(const Point2& mean, const Eigen::Matrix2d& C, Rng& rng) {
  const Eigen::Matrix2d V = factor_covariance(C);
  Eigen::Vector2d u(rng.normal(), rng.normal());
  return mean + V.transpose() * u;
}

}  // namespace rssloc
