#pragma once

#include <Eigen/Core>
#include <utility>

#include "rssloc/model.hpp"
#include "rssloc/rng.hpp"

namespace rssloc {

/// True iff the smallest eigenvalue of the symmetrized input is >= -tol.
bool psd_check(const Eigen::MatrixXd& matrix, double tol);

/// Factor V with V^T V equal to the PSD projection of C (negative eigenvalues
/// clipped to zero after symmetrization). ||V^T V - clip(C)|| <= 1e-10.
Eigen::Matrix2d factor_covariance(const Eigen::Matrix2d& C);

/// Largest eigenvalue and a corresponding unit eigenvector of a PSD matrix.
/// The eigenvector sign is fixed so its first component of magnitude > 1e-12
/// is nonnegative. Throws std::invalid_argument if X fails psd_check at 1e-8.
std::pair<double, Eigen::VectorXd> rank_one_extract(const Eigen::MatrixXd& X);

/// mean + V^T u with u a pair of independent standard normals and V from
/// factor_covariance. Always consumes exactly two normals.
Point2 gaussian_sample(const Point2& mean, const Eigen::Matrix2d& C, Rng& rng);

}  // namespace rssloc
