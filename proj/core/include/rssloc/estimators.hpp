#pragma once

#include <Eigen/Core>
#include <optional>
#include <string_view>
#include <vector>

#include "rssloc/model.hpp"
#include "rssloc/rng.hpp"
#include "rssloc/solver.hpp"

namespace rssloc {

/// Method labels used throughout reports, matching the benchmark legend:
/// ro (robust SDP), r-r / r-g / r-p (robust SDP plus a rounding step),
/// rss (non-robust SDP on RSS), ml, p-d (SDP on ranges), so (SOCP on RSS),
/// so-d (SOCP on ranges).
enum class Method { Ro, RR, RG, RP, Rss, Ml, Pd, So, SoD };

inline constexpr Method kAllMethods[] = {Method::Ro, Method::RR, Method::RG,
                                         Method::RP, Method::Rss, Method::Ml,
                                         Method::Pd, Method::So, Method::SoD};

std::string_view method_label(Method m);
std::optional<Method> method_from_label(std::string_view label);

/// Full variable set of the worst-case SDP relaxation.
struct RobustSolution {
  Point2 x_star = Point2::Zero();
  Eigen::Matrix2d X_star = Eigen::Matrix2d::Zero();
  Eigen::VectorXd l_star;
  Eigen::MatrixXd L_star;
  double k_star = 0.0;
  SolveStatus status = SolveStatus::NumericalFailure;
  double duality_gap = 0.0;
  int iterations = 0;

  /// X* - x* x*^T, the covariance used by the rounding stage (not clipped).
  Eigen::Matrix2d covariance() const {
    return X_star - x_star * x_star.transpose();
  }
};

struct EstimatorOutput {
  Point2 x_hat = Point2::Zero();
  Method method = Method::Ml;
  double objective = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  int iterations = 0;
  bool degraded = false;  ///< ML only: no restart reached a stationary point
};

/// Worst-case min-max SDP on RSS with anchor error bound zeta.
/// `literal_plus_sign` reproduces the sign misprint of the published
/// constraint families (regression/testing aid); the default uses the sign
/// consistent with the squared-norm expansion.
RobustSolution estimate_robust_sdp(const std::vector<Point2>& reported_anchors,
                                   const std::vector<double>& betas, double zeta,
                                   const SolverSettings& settings = {},
                                   bool literal_plus_sign = false);

/// Independent re-check of every constraint of the worst-case SDP at the
/// returned variables; returns the maximum violation (0 when feasible).
double robust_constraint_violation(const RobustSolution& sol,
                                   const std::vector<Point2>& reported_anchors,
                                   const std::vector<double>& betas, double zeta);

/// Nonlinear least squares on the log-distance residuals, solved by
/// Levenberg-Marquardt with analytic Jacobian from `restarts` uniform random
/// starts in the unit square.
EstimatorOutput estimate_ml(const std::vector<Point2>& reported_anchors,
                            const std::vector<double>& betas, double gamma,
                            int restarts, Rng& rng);

/// ML objective value at x: sum of squared log-distance residuals.
double ml_objective(const Point2& x, const std::vector<Point2>& anchors,
                    const std::vector<double>& betas, double gamma);

/// Non-robust SDP baseline: the worst-case SDP specialized to zeta = 0.
EstimatorOutput estimate_sdp_rss(const std::vector<Point2>& reported_anchors,
                                 const std::vector<double>& betas,
                                 const SolverSettings& settings = {});

/// SDP on squared-range residuals: min k s.t. |tr(X) - 2 z_i.x + |z_i|^2 -
/// s_i^2| <= k with the Schur lift of X.
EstimatorOutput estimate_sdp_distance(const std::vector<Point2>& reported_anchors,
                                      const std::vector<double>& ranges,
                                      const SolverSettings& settings = {});

/// SOCP relaxation on RSS. Requires zeta > 0.
EstimatorOutput estimate_socp_rss(const std::vector<Point2>& reported_anchors,
                                  const std::vector<double>& betas, double zeta,
                                  const SolverSettings& settings = {});

/// SOCP on ranges: min k s.t. |t_i - s_i| <= k, t_i >= ||x - z_i||, t_i >= 0.
EstimatorOutput estimate_socp_distance(const std::vector<Point2>& reported_anchors,
                                       const std::vector<double>& ranges,
                                       const SolverSettings& settings = {});

}  // namespace rssloc
