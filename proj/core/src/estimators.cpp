#include "rssloc/estimators.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rssloc/conic.hpp"

namespace rssloc {

namespace {

constexpr double kMlDistanceFloor = 1e-9;
const double kSqrt2 = std::sqrt(2.0);

void check_geometry(const std::vector<Point2>& anchors,
                    const std::vector<double>& measurements, const char* who) {
  if (anchors.size() < 3) {
    throw std::invalid_argument(std::string(who) + ": need at least 3 anchors");
  }
  if (anchors.size() != measurements.size()) {
    throw std::invalid_argument(std::string(who) +
                                ": measurement count != anchor count");
  }
}

// Variable layout of the robust SDP:
//   y = [x (2), k, l (M), svec X (3), svec L (M(M+1)/2)]
struct RobustLayout {
  int M;
  int x0 = 0, k = 2, l0 = 3;
  int X0;  // base of svec X, side 2
  int L0;  // base of svec L, side M
  int total;

  explicit RobustLayout(int anchors)
      : M(anchors), X0(3 + anchors), L0(3 + anchors + 3),
        total(3 + anchors + 3 + svec_size(anchors)) {}

  int l(int i) const { return l0 + i; }
  int X(int i, int j) const { return X0 + svec_index(i, j, 2); }
  int L(int i, int j) const { return L0 + svec_index(i, j, M); }
};

EstimatorOutput wrap(const SolverSolution& sol, Method m, double objective,
                     const Point2& x_hat) {
  EstimatorOutput out;
  out.method = m;
  out.x_hat = x_hat;
  out.objective = objective;
  out.status = sol.status;
  out.iterations = sol.iterations;
  return out;
}

}  // namespace

std::string_view method_label(Method m) {
  switch (m) {
    case Method::Ro: return "ro";
    case Method::RR: return "r-r";
    case Method::RG: return "r-g";
    case Method::RP: return "r-p";
    case Method::Rss: return "rss";
    case Method::Ml: return "ml";
    case Method::Pd: return "p-d";
    case Method::So: return "so";
    case Method::SoD: return "so-d";
  }
  return "?";
}

std::optional<Method> method_from_label(std::string_view label) {
  for (Method m : kAllMethods) {
    if (method_label(m) == label) return m;
  }
  return std::nullopt;
}

RobustSolution estimate_robust_sdp(const std::vector<Point2>& anchors,
                                   const std::vector<double>& betas, double zeta,
                                   const SolverSettings& settings,
                                   bool literal_plus_sign) {
  check_geometry(anchors, betas, "estimate_robust_sdp");
  if (!(zeta >= 0.0)) throw std::invalid_argument("estimate_robust_sdp: zeta < 0");
  for (double b : betas) {
    if (!(b > 0.0)) throw std::invalid_argument("estimate_robust_sdp: betas must be > 0");
  }
  const int M = static_cast<int>(anchors.size());
  const RobustLayout L(M);
  // Sign of the x term in the two worst-case constraint families. The
  // expansion of ||x - z||^2 gives -2 x.z; the flag flips it to match the
  // published misprint.
  const double xsign = literal_plus_sign ? +1.0 : -1.0;

  ConicProgram prog;
  prog.num_vars = L.total;
  prog.objective = Eigen::VectorXd::Zero(L.total);
  prog.objective[L.k] = 1.0;

  // Family 1: k b_i^2 - (tr X + xsign 2 x.z_i + |z_i|^2) - 2 zeta l_i - zeta^2 >= 0,
  // plus k >= 0.
  {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M + 1, L.total);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(M + 1);
    for (int i = 0; i < M; ++i) {
      const Point2& z = anchors[i];
      A(i, L.k) = betas[i] * betas[i];
      A(i, L.X(0, 0)) = -1.0;
      A(i, L.X(1, 1)) = -1.0;
      A(i, L.x0) = -xsign * 2.0 * z.x();
      A(i, L.x0 + 1) = -xsign * 2.0 * z.y();
      A(i, L.l(i)) = -2.0 * zeta;
      b[i] = -z.squaredNorm() - zeta * zeta;
    }
    A(M, L.k) = 1.0;
    prog.blocks.push_back({Cone::Nonnegative, 0, std::move(A), std::move(b)});
  }

  // Family 2 as 2x2 LMI: [[q_i - 2 zeta l_i + zeta^2, b_i], [b_i, k]] >= 0.
  for (int i = 0; i < M; ++i) {
    const Point2& z = anchors[i];
    LmiBuilder lmi(2, L.total);
    lmi.coeff(0, 0, L.X(0, 0), 1.0)
        .coeff(0, 0, L.X(1, 1), 1.0)
        .coeff(0, 0, L.x0, xsign * 2.0 * z.x())
        .coeff(0, 0, L.x0 + 1, xsign * 2.0 * z.y())
        .coeff(0, 0, L.l(i), -2.0 * zeta)
        .constant(0, 0, z.squaredNorm() + zeta * zeta)
        .constant(0, 1, betas[i])
        .coeff(1, 1, L.k, 1.0);
    prog.blocks.push_back(lmi.build());
  }

  // L(i,i) = tr X - 2 x.z_i + |z_i|^2 (always the expansion sign).
  {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, L.total);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(M);
    for (int i = 0; i < M; ++i) {
      const Point2& z = anchors[i];
      A(i, L.L(i, i)) = 1.0;
      A(i, L.X(0, 0)) = -1.0;
      A(i, L.X(1, 1)) = -1.0;
      A(i, L.x0) = 2.0 * z.x();
      A(i, L.x0 + 1) = 2.0 * z.y();
      b[i] = -z.squaredNorm();
    }
    prog.blocks.push_back({Cone::Zero, 0, std::move(A), std::move(b)});
  }

  // Elementwise L >= 0. Off-diagonal svec entries carry a sqrt(2) factor,
  // which does not change the sign constraint.
  {
    const int rows = svec_size(M);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, L.total);
    for (int r = 0; r < rows; ++r) A(r, L.L0 + r) = 1.0;
    prog.blocks.push_back({Cone::Nonnegative, 0, std::move(A),
                           Eigen::VectorXd::Zero(rows)});
  }

  // Schur lift of X: [[X, x], [x^T, 1]] >= 0.
  {
    LmiBuilder lmi(3, L.total);
    lmi.coeff(0, 0, L.X(0, 0), 1.0)
        .coeff(1, 0, L.X(1, 0), 1.0 / kSqrt2)
        .coeff(1, 1, L.X(1, 1), 1.0)
        .coeff(2, 0, L.x0, 1.0)
        .coeff(2, 1, L.x0 + 1, 1.0)
        .constant(2, 2, 1.0);
    prog.blocks.push_back(lmi.build());
  }

  // Schur lift of L: [[L, l], [l^T, 1]] >= 0.
  {
    LmiBuilder lmi(M + 1, L.total);
    for (int j = 0; j < M; ++j) {
      for (int i = j; i < M; ++i) {
        lmi.coeff(i, j, L.L(i, j), i == j ? 1.0 : 1.0 / kSqrt2);
      }
      lmi.coeff(M, j, L.l(j), 1.0);
    }
    lmi.constant(M, M, 1.0);
    prog.blocks.push_back(lmi.build());
  }

  const SolverSolution sol = solve(prog, settings);

  RobustSolution out;
  out.status = sol.status;
  out.duality_gap = sol.duality_gap;
  out.iterations = sol.iterations;
  if (sol.y.size() == L.total) {
    out.x_star = Point2(sol.y[L.x0], sol.y[L.x0 + 1]);
    out.k_star = sol.y[L.k];
    out.l_star = sol.y.segment(L.l0, M);
    out.X_star = smat(sol.y.segment(L.X0, 3));
    out.L_star = smat(sol.y.segment(L.L0, svec_size(M)));
  }
  return out;
}

double robust_constraint_violation(const RobustSolution& sol,
                                   const std::vector<Point2>& anchors,
                                   const std::vector<double>& betas, double zeta) {
  const int M = static_cast<int>(anchors.size());
  double worst = std::max(0.0, -sol.k_star);
  const double trX = sol.X_star.trace();
  for (int i = 0; i < M; ++i) {
    const Point2& z = anchors[i];
    const double q = trX - 2.0 * sol.x_star.dot(z) + z.squaredNorm();
    const double b2 = betas[i] * betas[i];
    worst = std::max(worst, q + 2.0 * zeta * sol.l_star[i] + zeta * zeta -
                                sol.k_star * b2);
    Eigen::Matrix2d lmi;
    lmi << q - 2.0 * zeta * sol.l_star[i] + zeta * zeta, betas[i], betas[i],
        sol.k_star;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(lmi, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
    worst = std::max(worst, std::abs(sol.L_star(i, i) - q));
    for (int j = 0; j < M; ++j) worst = std::max(worst, -sol.L_star(i, j));
  }
  Eigen::Matrix3d schur_x;
  schur_x << sol.X_star(0, 0), sol.X_star(0, 1), sol.x_star.x(),
      sol.X_star(1, 0), sol.X_star(1, 1), sol.x_star.y(), sol.x_star.x(),
      sol.x_star.y(), 1.0;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(schur_x, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  Eigen::MatrixXd schur_l(M + 1, M + 1);
  schur_l.topLeftCorner(M, M) = sol.L_star;
  schur_l.topRightCorner(M, 1) = sol.l_star;
  schur_l.bottomLeftCorner(1, M) = sol.l_star.transpose();
  schur_l(M, M) = 1.0;
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(schur_l, Eigen::EigenvaluesOnly);
    worst = std::max(worst, -es.eigenvalues().minCoeff());
  }
  return worst;
}

double ml_objective(const Point2& x, const std::vector<Point2>& anchors,
                    const std::vector<double>& betas, double gamma) {
  const double scale = 10.0 * gamma / std::log(10.0);
  double obj = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double d = std::max((x - anchors[i]).norm(), kMlDistanceFloor);
    const double r = scale * (std::log(d) - std::log(betas[i]));
    obj += r * r;
  }
  return obj;
}

EstimatorOutput estimate_ml(const std::vector<Point2>& anchors,
                            const std::vector<double>& betas, double gamma,
                            int restarts, Rng& rng) {
  check_geometry(anchors, betas, "estimate_ml");
  if (restarts < 1) throw std::invalid_argument("estimate_ml: restarts must be >= 1");
  const int M = static_cast<int>(anchors.size());
  const double scale = 10.0 * gamma / std::log(10.0);

  auto residuals = [&](const Point2& x, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
    for (int i = 0; i < M; ++i) {
      Point2 diff = x - anchors[i];
      double d = diff.norm();
      if (d < kMlDistanceFloor) {
        d = kMlDistanceFloor;
        diff = Point2(kMlDistanceFloor, 0.0);
      }
      r[i] = scale * (std::log(d) - std::log(betas[i]));
      if (J) J->row(i) = (scale / (d * d)) * diff.transpose();
    }
  };

  Point2 best = Point2::Zero();
  double best_cost = std::numeric_limits<double>::infinity();
  bool any_converged = false;
  int total_iters = 0;

  Eigen::VectorXd r(M), r_trial(M);
  Eigen::MatrixXd J(M, 2);
  for (int start = 0; start < restarts; ++start) {
    Point2 x(rng.uniform(), rng.uniform());
    residuals(x, r, &J);
    double cost = r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      ++total_iters;
      const Eigen::Matrix2d JtJ = J.transpose() * J;
      const Eigen::Vector2d g = J.transpose() * r;
      if (g.norm() < 1e-12) {
        converged = true;
        break;
      }
      Eigen::Matrix2d H = JtJ;
      H.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
      const Eigen::Vector2d step = H.ldlt().solve(-g);
      if (!step.allFinite() || step.norm() < 1e-14) {
        converged = step.norm() < 1e-14;
        break;
      }
      const Point2 x_trial = x + step;
      residuals(x_trial, r_trial, nullptr);
      const double cost_trial = r_trial.squaredNorm();
      if (cost_trial < cost) {
        x = x_trial;
        cost = cost_trial;
        residuals(x, r, &J);
        lambda = std::max(lambda * 0.3, 1e-12);
      } else {
        lambda *= 4.0;
        if (lambda > 1e12) break;
      }
    }
    any_converged = any_converged || converged;
    if (cost < best_cost) {
      best_cost = cost;
      best = x;
    }
  }

  EstimatorOutput out;
  out.method = Method::Ml;
  out.x_hat = best;
  out.objective = best_cost;
  out.iterations = total_iters;
  out.status = SolveStatus::Optimal;
  out.degraded = !any_converged;
  return out;
}

EstimatorOutput estimate_sdp_rss(const std::vector<Point2>& anchors,
                                 const std::vector<double>& betas,
                                 const SolverSettings& settings) {
  RobustSolution sol = estimate_robust_sdp(anchors, betas, 0.0, settings);
  EstimatorOutput out;
  out.method = Method::Rss;
  out.x_hat = sol.x_star;
  out.objective = sol.k_star;
  out.status = sol.status;
  out.iterations = sol.iterations;
  return out;
}

EstimatorOutput estimate_sdp_distance(const std::vector<Point2>& anchors,
                                      const std::vector<double>& ranges,
                                      const SolverSettings& settings) {
  check_geometry(anchors, ranges, "estimate_sdp_distance");
  const int M = static_cast<int>(anchors.size());
  // y = [x (2), k, svec X (3)]
  const int kVar = 2, X0 = 3, total = 6;
  ConicProgram prog;
  prog.num_vars = total;
  prog.objective = Eigen::VectorXd::Zero(total);
  prog.objective[kVar] = 1.0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * M, total);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * M);
  for (int i = 0; i < M; ++i) {
    const Point2& z = anchors[i];
    const double s2 = ranges[i] * ranges[i];
    // k - (q_i - s_i^2) >= 0
    A(2 * i, kVar) = 1.0;
    A(2 * i, X0 + svec_index(0, 0, 2)) = -1.0;
    A(2 * i, X0 + svec_index(1, 1, 2)) = -1.0;
    A(2 * i, 0) = 2.0 * z.x();
    A(2 * i, 1) = 2.0 * z.y();
    b[2 * i] = s2 - z.squaredNorm();
    // k + (q_i - s_i^2) >= 0
    A(2 * i + 1, kVar) = 1.0;
    A(2 * i + 1, X0 + svec_index(0, 0, 2)) = 1.0;
    A(2 * i + 1, X0 + svec_index(1, 1, 2)) = 1.0;
    A(2 * i + 1, 0) = -2.0 * z.x();
    A(2 * i + 1, 1) = -2.0 * z.y();
    b[2 * i + 1] = z.squaredNorm() - s2;
  }
  prog.blocks.push_back({Cone::Nonnegative, 0, std::move(A), std::move(b)});

  LmiBuilder lmi(3, total);
  lmi.coeff(0, 0, X0 + svec_index(0, 0, 2), 1.0)
      .coeff(1, 0, X0 + svec_index(1, 0, 2), 1.0 / kSqrt2)
      .coeff(1, 1, X0 + svec_index(1, 1, 2), 1.0)
      .coeff(2, 0, 0, 1.0)
      .coeff(2, 1, 1, 1.0)
      .constant(2, 2, 1.0);
  prog.blocks.push_back(lmi.build());

  const SolverSolution sol = solve(prog, settings);
  Point2 x_hat = sol.y.size() == total ? Point2(sol.y[0], sol.y[1]) : Point2::Zero();
  EstimatorOutput out = wrap(sol, Method::Pd, sol.y.size() == total ? sol.y[kVar] : 0.0, x_hat);
  return out;
}

EstimatorOutput estimate_socp_rss(const std::vector<Point2>& anchors,
                                  const std::vector<double>& betas, double zeta,
                                  const SolverSettings& settings) {
  check_geometry(anchors, betas, "estimate_socp_rss");
  if (!(zeta > 0.0)) {
    throw std::invalid_argument("estimate_socp_rss: zeta must be > 0");
  }
  const int M = static_cast<int>(anchors.size());
  // y = [x (2), k, t_0..t_{M-1}]
  const int kVar = 2, t0 = 3, total = 3 + M;
  ConicProgram prog;
  prog.num_vars = total;
  prog.objective = Eigen::VectorXd::Zero(total);
  prog.objective[kVar] = 1.0;

  for (int i = 0; i < M; ++i) {
    const Point2& z = anchors[i];
    const double b2 = betas[i] * betas[i];
    {
      // ||x - z_i|| <= (k b_i^2 - zeta^2) / zeta
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, total);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
      A(0, kVar) = b2 / zeta;
      b[0] = -zeta;
      A(1, 0) = 1.0;
      b[1] = -z.x();
      A(2, 1) = 1.0;
      b[2] = -z.y();
      prog.blocks.push_back({Cone::SecondOrder, 0, std::move(A), std::move(b)});
    }
    {
      // [[k, b_i], [b_i, t_i]] >= 0
      LmiBuilder lmi(2, total);
      lmi.coeff(0, 0, kVar, 1.0).constant(0, 1, betas[i]).coeff(1, 1, t0 + i, 1.0);
      prog.blocks.push_back(lmi.build());
    }
    {
      // ||x - z_i|| <= t_i
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, total);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(3);
      A(0, t0 + i) = 1.0;
      A(1, 0) = 1.0;
      b[1] = -z.x();
      A(2, 1) = 1.0;
      b[2] = -z.y();
      prog.blocks.push_back({Cone::SecondOrder, 0, std::move(A), std::move(b)});
    }
  }

  const SolverSolution sol = solve(prog, settings);
  Point2 x_hat = sol.y.size() == total ? Point2(sol.y[0], sol.y[1]) : Point2::Zero();
  return wrap(sol, Method::So, sol.y.size() == total ? sol.y[kVar] : 0.0, x_hat);
}

EstimatorOutput estimate_socp_distance(const std::vector<Point2>& anchors,
                                       const std::vector<double>& ranges,
                                       const SolverSettings& settings) {
  check_geometry(anchors, ranges, "estimate_socp_distance");
  const int M = static_cast<int>(anchors.size());
  const int kVar = 2, t0 = 3, total = 3 + M;
  ConicProgram prog;
  prog.num_vars = total;
  prog.objective = Eigen::VectorXd::Zero(total);
  prog.objective[kVar] = 1.0;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3 * M, total);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * M);
  for (int i = 0; i < M; ++i) {
    // k - (t_i - s_i) >= 0
    A(3 * i, kVar) = 1.0;
    A(3 * i, t0 + i) = -1.0;
    b[3 * i] = ranges[i];
    // k + (t_i - s_i) >= 0
    A(3 * i + 1, kVar) = 1.0;
    A(3 * i + 1, t0 + i) = 1.0;
    b[3 * i + 1] = -ranges[i];
    // t_i >= 0
    A(3 * i + 2, t0 + i) = 1.0;
  }
  prog.blocks.push_back({Cone::Nonnegative, 0, std::move(A), std::move(b)});

  for (int i = 0; i < M; ++i) {
    // t_i >= ||x - z_i||, the cone coupling omitted by the printed baseline.
    const Point2& z = anchors[i];
    Eigen::MatrixXd As = Eigen::MatrixXd::Zero(3, total);
    Eigen::VectorXd bs = Eigen::VectorXd::Zero(3);
    As(0, t0 + i) = 1.0;
    As(1, 0) = 1.0;
    bs[1] = -z.x();
    As(2, 1) = 1.0;
    bs[2] = -z.y();
    prog.blocks.push_back({Cone::SecondOrder, 0, std::move(As), std::move(bs)});
  }

  const SolverSolution sol = solve(prog, settings);
  Point2 x_hat = sol.y.size() == total ? Point2(sol.y[0], sol.y[1]) : Point2::Zero();
  return wrap(sol, Method::SoD, sol.y.size() == total ? sol.y[kVar] : 0.0, x_hat);
}

}  // namespace rssloc
