#include "rssloc/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <vector>

namespace rssloc {

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

constexpr double kUnboundedObjective = -1e12;

struct BarrierBlock {
  Cone cone;
  int side;
  Eigen::MatrixXd A;  // rows x dim(z)
  Eigen::VectorXd b;
  double nu;          // barrier parameter of the block
};

struct BlockEval {
  bool feasible = false;
  double phi = 0.0;
  Eigen::VectorXd grad;   // d phi / d s
  Eigen::MatrixXd hess;   // d^2 phi / d s^2
};

// Barrier value/derivatives of one cone at the point s (s-coordinates).
// want_derivs=false only checks membership and computes phi.
BlockEval eval_cone(const BarrierBlock& blk, const Eigen::VectorXd& s,
                    bool want_derivs) {
  BlockEval ev;
  const int m = static_cast<int>(s.size());
  switch (blk.cone) {
    case Cone::Nonnegative: {
      if ((s.array() <= 0.0).any()) return ev;
      ev.feasible = true;
      ev.phi = -s.array().log().sum();
      if (want_derivs) {
        ev.grad = -s.cwiseInverse();
        ev.hess = s.cwiseProduct(s).cwiseInverse().asDiagonal();
      }
      return ev;
    }
    case Cone::SecondOrder: {
      const double s0 = s[0];
      const Eigen::VectorXd sbar = s.tail(m - 1);
      const double f = s0 * s0 - sbar.squaredNorm();
      if (s0 <= 0.0 || f <= 0.0) return ev;
      ev.feasible = true;
      ev.phi = -std::log(f);
      if (want_derivs) {
        Eigen::VectorXd js(m);  // (s0, -sbar)
        js[0] = s0;
        js.tail(m - 1) = -sbar;
        ev.grad = -(2.0 / f) * js;
        Eigen::MatrixXd j = Eigen::MatrixXd::Identity(m, m);
        j.diagonal().tail(m - 1).setConstant(-1.0);
        ev.hess = -(2.0 / f) * j + (4.0 / (f * f)) * (js * js.transpose());
      }
      return ev;
    }
    case Cone::PsdTriangle: {
      const Eigen::MatrixXd S = smat(s);
      Eigen::LLT<Eigen::MatrixXd> llt(S);
      if (llt.info() != Eigen::Success) return ev;
      ev.feasible = true;
      ev.phi = -2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      if (want_derivs) {
        const int n = blk.side;
        const Eigen::MatrixXd Sinv =
            llt.solve(Eigen::MatrixXd::Identity(n, n));
        ev.grad = -svec(Sinv);
        // Hessian columns: svec(Sinv E_a Sinv) over the svec basis.
        const int dim = svec_size(n);
        ev.hess.resize(dim, dim);
        int a = 0;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (int j = 0; j < n; ++j) {
          for (int i = j; i < n; ++i) {
            Eigen::MatrixXd E = Eigen::MatrixXd::Zero(n, n);
            if (i == j) {
              E(i, j) = 1.0;
            } else {
              E(i, j) = inv_sqrt2;
              E(j, i) = inv_sqrt2;
            }
            ev.hess.col(a++) = svec(Sinv * E * Sinv);
          }
        }
        ev.hess = 0.5 * (ev.hess + ev.hess.transpose().eval());
      }
      return ev;
    }
    case Cone::Zero:
      break;  // eliminated before the barrier stage
  }
  return ev;
}

struct PointEval {
  bool feasible = false;
  double phi = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
};

PointEval eval_point(const std::vector<BarrierBlock>& blocks,
                     const Eigen::VectorXd& z, bool want_derivs) {
  PointEval ev;
  const int dim = static_cast<int>(z.size());
  if (want_derivs) {
    ev.grad = Eigen::VectorXd::Zero(dim);
    ev.hess = Eigen::MatrixXd::Zero(dim, dim);
  }
  for (const BarrierBlock& blk : blocks) {
    const Eigen::VectorXd s = blk.A * z + blk.b;
    BlockEval be = eval_cone(blk, s, want_derivs);
    if (!be.feasible) return ev;
    ev.phi += be.phi;
    if (want_derivs) {
      ev.grad.noalias() += blk.A.transpose() * be.grad;
      ev.hess.noalias() += blk.A.transpose() * be.hess * blk.A;
    }
  }
  ev.feasible = true;
  return ev;
}

enum class CenterResult { Converged, IterLimit, EarlyStop, Stuck, Unbounded };

// Damped Newton minimization of t_bar * c.z + phi(z). `z` must enter strictly
// feasible and stays so. `early_stop`, when set, is checked after every
// accepted step (used by phase I).
template <typename EarlyStop>
CenterResult center(const Eigen::VectorXd& c, double t_bar,
                    const std::vector<BarrierBlock>& blocks,
                    Eigen::VectorXd& z, int iter_budget, int& iters_used,
                    double& last_decrement2, EarlyStop early_stop) {
  const int dim = static_cast<int>(z.size());
  for (int it = 0; it < iter_budget; ++it) {
    PointEval ev = eval_point(blocks, z, true);
    if (!ev.feasible) return CenterResult::Stuck;  // should not happen
    Eigen::VectorXd g = t_bar * c + ev.grad;

    // Regularized Newton solve; escalate regularization on breakdown.
    double reg = 1e-12 * (1.0 + ev.hess.diagonal().cwiseAbs().maxCoeff());
    Eigen::VectorXd dz;
    double dec2 = -1.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      Eigen::MatrixXd H = ev.hess;
      H.diagonal().array() += reg;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
      if (ldlt.info() == Eigen::Success) {
        dz = -ldlt.solve(g);
        dec2 = -g.dot(dz);
        if (std::isfinite(dec2) && dec2 >= 0.0) break;
      }
      reg *= 100.0;
      dec2 = -1.0;
    }
    ++iters_used;
    if (dec2 < 0.0) return CenterResult::Stuck;
    last_decrement2 = dec2;
    const double f0 = t_bar * c.dot(z) + ev.phi;
    // Centering quality only needs to beat the gap resolution at this
    // barrier weight, so the threshold scales with the potential.
    if (0.5 * dec2 < 1e-10 * (1.0 + std::abs(f0))) return CenterResult::Converged;

    const double slope = g.dot(dz);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      Eigen::VectorXd zn = z + alpha * dz;
      PointEval evn = eval_point(blocks, zn, false);
      if (evn.feasible &&
          t_bar * c.dot(zn) + evn.phi <= f0 + 0.25 * alpha * slope) {
        z = zn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) return CenterResult::Stuck;
    if (early_stop(z)) return CenterResult::EarlyStop;
    if (c.dot(z) < kUnboundedObjective) return CenterResult::Unbounded;
  }
  (void)dim;
  return CenterResult::IterLimit;
}

// Margin needed to push the image of one block strictly inside its cone along
// the canonical interior direction.
double interior_margin(const BarrierBlock& blk, const Eigen::VectorXd& s) {
  switch (blk.cone) {
    case Cone::Nonnegative:
      return -s.minCoeff();
    case Cone::SecondOrder:
      return s.tail(s.size() - 1).norm() - s[0];
    case Cone::PsdTriangle: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(s));
      return -es.eigenvalues().minCoeff();
    }
    case Cone::Zero:
      break;
  }
  return 0.0;
}

// Canonical interior direction of the block in svec coordinates.
Eigen::VectorXd interior_direction(const BarrierBlock& blk) {
  const int m = static_cast<int>(blk.b.size());
  Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
  switch (blk.cone) {
    case Cone::Nonnegative:
      e.setOnes();
      break;
    case Cone::SecondOrder:
      e[0] = 1.0;
      break;
    case Cone::PsdTriangle:
      e = svec(Eigen::MatrixXd::Identity(blk.side, blk.side));
      break;
    case Cone::Zero:
      break;
  }
  return e;
}

double block_nu(const ConeBlock& blk) {
  switch (blk.cone) {
    case Cone::Nonnegative: return static_cast<double>(blk.rows());
    case Cone::SecondOrder: return 2.0;
    case Cone::PsdTriangle: return static_cast<double>(blk.side);
    case Cone::Zero: return 0.0;
  }
  return 0.0;
}

int rows_of(const ConeBlock& b) { return static_cast<int>(b.b.size()); }

}  // namespace

SolverSolution solve(const ConicProgram& program, const SolverSettings& settings) {
  program.validate();
  if (!(settings.tolerance > 0.0)) {
    throw std::invalid_argument("SolverSettings: tolerance must be > 0");
  }

  SolverSolution out;
  const int n = program.num_vars;

  // Split off equality blocks: E y + f = 0.
  std::vector<const ConeBlock*> cone_blocks;
  int eq_rows = 0;
  for (const ConeBlock& blk : program.blocks) {
    if (blk.cone == Cone::Zero) {
      eq_rows += rows_of(blk);
    } else {
      cone_blocks.push_back(&blk);
    }
  }

  Eigen::VectorXd y0 = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd null_basis = Eigen::MatrixXd::Identity(n, n);
  if (eq_rows > 0) {
    Eigen::MatrixXd E(eq_rows, n);
    Eigen::VectorXd f(eq_rows);
    int r = 0;
    for (const ConeBlock& blk : program.blocks) {
      if (blk.cone != Cone::Zero) continue;
      E.middleRows(r, rows_of(blk)) = blk.A;
      f.segment(r, rows_of(blk)) = blk.b;
      r += rows_of(blk);
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(E);
    y0 = cod.solve(-f);
    const double scale = 1.0 + f.cwiseAbs().maxCoeff();
    if ((E * y0 + f).cwiseAbs().maxCoeff() > 1e-9 * scale) {
      out.status = SolveStatus::Infeasible;
      out.y = y0;
      return out;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(E);
    lu.setThreshold(1e-10);
    null_basis = lu.kernel();
    if (lu.dimensionOfKernel() == 0) null_basis.resize(n, 0);
  }
  const int dim = static_cast<int>(null_basis.cols());

  // Reduced data.
  Eigen::VectorXd c_z = null_basis.transpose() * program.objective;
  std::vector<BarrierBlock> blocks;
  double nu_total = 0.0;
  blocks.reserve(cone_blocks.size());
  for (const ConeBlock* blk : cone_blocks) {
    BarrierBlock bb;
    bb.cone = blk->cone;
    bb.side = blk->side;
    bb.A = blk->A * null_basis;
    bb.b = blk->A * y0 + blk->b;
    bb.nu = block_nu(*blk);
    nu_total += bb.nu;
    blocks.push_back(std::move(bb));
  }

  int iters = 0;
  auto finish = [&](const Eigen::VectorXd& z, SolveStatus status, double gap,
                    double dual_res) {
    out.y = y0 + null_basis * z;
    out.status = status;
    out.duality_gap = gap;
    out.dual_residual = dual_res;
    out.primal_residual = max_violation(program, out.y);
    out.iterations = iters;
    return out;
  };

  // Fully determined by equalities: just check cone membership.
  if (dim == 0) {
    Eigen::VectorXd z(0);
    const double viol = max_violation(program, y0);
    return finish(z, viol <= 10.0 * settings.tolerance ? SolveStatus::Optimal
                                                       : SolveStatus::Infeasible,
                  0.0, 0.0);
  }
  if (blocks.empty()) {
    Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
    if (c_z.cwiseAbs().maxCoeff() > 1e-12) {
      return finish(z, SolveStatus::Unbounded, 0.0, 0.0);
    }
    return finish(z, SolveStatus::Optimal, 0.0, 0.0);
  }

  // Directions with zero objective slope that only grow slacks make the
  // barrier subproblems unbounded below, so the feasible set is intersected
  // with a generous norm ball; solutions that touch it signal unboundedness.
  double data_scale = 1.0;
  for (const BarrierBlock& blk : blocks) {
    data_scale = std::max(data_scale, blk.b.cwiseAbs().maxCoeff());
  }
  const double radius = 1e6 * data_scale;
  {
    BarrierBlock ball;
    ball.cone = Cone::SecondOrder;
    ball.side = 0;
    ball.A = Eigen::MatrixXd::Zero(dim + 1, dim);
    ball.A.bottomRows(dim) = -Eigen::MatrixXd::Identity(dim, dim);
    ball.b = Eigen::VectorXd::Zero(dim + 1);
    ball.b[0] = radius;
    ball.nu = 2.0;
    nu_total += ball.nu;
    blocks.push_back(std::move(ball));
  }

  const int budget = std::max(settings.max_iterations, 40);

  // Phase I: minimize the uniform interior margin t over (z, t).
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  {
    double t0 = 0.0;
    for (const BarrierBlock& blk : blocks) {
      t0 = std::max(t0, interior_margin(blk, blk.b));
    }
    t0 += 1.0;

    std::vector<BarrierBlock> aug;
    aug.reserve(blocks.size());
    for (const BarrierBlock& blk : blocks) {
      BarrierBlock ab = blk;
      ab.A.conservativeResize(Eigen::NoChange, dim + 1);
      ab.A.col(dim) = interior_direction(blk);
      aug.push_back(std::move(ab));
    }
    Eigen::VectorXd c_aug = Eigen::VectorXd::Zero(dim + 1);
    c_aug[dim] = 1.0;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(dim + 1);
    w[dim] = t0;

    const double target = -1e-6;
    bool interior_found = false;
    double t_bar = 1.0;
    double dec2 = 0.0;
    for (int outer = 0; outer < 60 && iters < budget; ++outer) {
      CenterResult res =
          center(c_aug, t_bar, aug, w, budget - iters, iters, dec2,
                 [&](const Eigen::VectorXd& v) { return v[dim] < target; });
      if (res == CenterResult::EarlyStop || res == CenterResult::Unbounded ||
          w[dim] < target) {
        interior_found = true;
        break;
      }
      if (res == CenterResult::Stuck || res == CenterResult::IterLimit) break;
      // Converged at this barrier weight; tighten.
      if ((nu_total + 1.0) / t_bar < 1e-9 * (1.0 + std::abs(w[dim]))) break;
      t_bar *= 20.0;
    }
    if (!interior_found) {
      if (w[dim] < 0.0) {
        interior_found = true;  // weakly interior, still usable
      } else {
        Eigen::VectorXd zf = w.head(dim);
        return finish(zf, SolveStatus::Infeasible, 0.0, 0.0);
      }
    }
    z = w.head(dim);
  }

  // Phase II: follow the central path on the original objective.
  const double tol = settings.tolerance;
  double t_bar = 1.0;
  double gap = nu_total / t_bar;
  double dec2 = 0.0;
  auto no_stop = [](const Eigen::VectorXd&) { return false; };
  for (int outer = 0; outer < 80; ++outer) {
    if (iters >= budget) {
      return finish(z, SolveStatus::NumericalFailure, gap,
                    std::sqrt(std::max(dec2, 0.0)) / t_bar);
    }
    CenterResult res =
        center(c_z, t_bar, blocks, z, budget - iters, iters, dec2, no_stop);
    if (res == CenterResult::Unbounded) {
      return finish(z, SolveStatus::Unbounded, gap, 0.0);
    }
    if (res == CenterResult::Stuck) {
      // Accept if already within tolerance, else report failure.
      gap = nu_total / t_bar;
      if (gap <= tol) break;
      return finish(z, SolveStatus::NumericalFailure, gap,
                    std::sqrt(std::max(dec2, 0.0)) / t_bar);
    }
    if (res == CenterResult::IterLimit) {
      gap = nu_total / t_bar;
      if (gap <= tol) break;
      return finish(z, SolveStatus::NumericalFailure, gap,
                    std::sqrt(std::max(dec2, 0.0)) / t_bar);
    }
    gap = nu_total / t_bar;
    if (gap <= tol) break;
    t_bar *= 20.0;
  }

  // With the ball in place a truly unbounded objective ends up proportional
  // to the radius; slacks parked at the boundary are fine.
  const double c_norm = c_z.norm();
  if (c_norm > 0.0 && c_z.dot(z) <= -1e-2 * radius * c_norm) {
    return finish(z, SolveStatus::Unbounded, gap, 0.0);
  }
  return finish(z, SolveStatus::Optimal, gap,
                std::sqrt(std::max(dec2, 0.0)) / t_bar);
}

}  // namespace rssloc
