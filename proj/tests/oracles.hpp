// Brute-force reference implementations used to validate the estimators
// independently of the conic machinery.
#pragma once

#include <vector>

#include "rssloc/estimators.hpp"
#include "rssloc/model.hpp"

namespace rssloc::oracles {

// Exhaustive minimization of a scalar field over the unit square on an
// n x n lattice (cell centers). Accuracy is one lattice cell.
template <typename F>
Point2 grid_minimize(F&& objective, int n = 400) {
  Point2 best(0.5, 0.5);
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Point2 p((i + 0.5) / n, (j + 0.5) / n);
      const double v = objective(p);
      if (v < best_value) {
        best_value = v;
        best = p;
      }
    }
  }
  return best;
}

// Grid minimizer of the squared-log RSS objective.
inline Point2 grid_ml(const std::vector<Point2>& anchors,
                      const std::vector<double>& betas, double gamma,
                      int n = 400) {
  return grid_minimize(
      [&](const Point2& p) { return ml_objective(p, anchors, betas, gamma); },
      n);
}

// Grid minimizer of the squared-range residual sum.
inline Point2 grid_range_ls(const std::vector<Point2>& anchors,
                            const std::vector<double>& ranges, int n = 400) {
  return grid_minimize(
      [&](const Point2& p) {
        double total = 0.0;
        for (std::size_t i = 0; i < anchors.size(); ++i) {
          const double r = (p - anchors[i]).norm() - ranges[i];
          total += r * r;
        }
        return total;
      },
      n);
}

}  // namespace rssloc::oracles
