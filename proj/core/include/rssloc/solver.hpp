#pragma once

#include <Eigen/Core>

#include "rssloc/conic.hpp"

namespace rssloc {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NumericalFailure };

const char* to_string(SolveStatus status);

struct SolverSettings {
  double tolerance = 1e-8;  ///< target duality gap (and residual bound)
  int max_iterations = 4000; ///< total Newton iteration budget
};

struct SolverSolution {
  Eigen::VectorXd y;
  SolveStatus status = SolveStatus::NumericalFailure;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

/// Dense path-following barrier method specialized for the small block sizes
/// this project produces. Equality (Zero) blocks are eliminated up front via
/// a null-space basis; the remaining cones are handled with standard
/// logarithmic barriers. Deterministic for identical inputs.
SolverSolution solve(const ConicProgram& program, const SolverSettings& settings = {});

}  // namespace rssloc
