#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "rssloc/estimators.hpp"
#include "rssloc/rounding.hpp"
#include "rssloc/scenario.hpp"

using namespace rssloc;

namespace {

const PathLossModel kModel{0.025, 8.0, 3.0, 0.0};

std::vector<double> true_betas(const Point2& source,
                               const std::vector<Point2>& anchors) {
  std::vector<double> betas;
  for (const Point2& z : anchors) betas.push_back((source - z).norm());
  return betas;
}

RobustSolution solved(const std::vector<Point2>& anchors,
                      const std::vector<double>& betas, double zeta) {
  const RobustSolution sol = estimate_robust_sdp(anchors, betas, zeta);
  REQUIRE(sol.status == SolveStatus::Optimal);
  return sol;
}

}  // namespace

TEST_CASE("compute_k closed-form values") {
  const std::vector<Point2> one = {{0.0, 0.0}};

  // Exact betas and no uncertainty: both ratio bounds are 1.
  auto k = compute_k({0.5, 0.0}, one, {0.5}, 0.0);
  REQUIRE(k.has_value());
  CHECK(*k == doctest::Approx(1.0));

  // d = 0.5, beta = 0.5, zeta = 0.1:
  // max((0.6/0.5)^2, (0.5/0.4)^2) = max(1.44, 1.5625).
  k = compute_k({0.5, 0.0}, one, {0.5}, 0.1);
  REQUIRE(k.has_value());
  CHECK(*k == doctest::Approx(1.5625));

  // Multiple anchors take the worst one.
  const std::vector<Point2> two = {{0.0, 0.0}, {1.0, 0.0}};
  k = compute_k({0.5, 0.0}, two, {0.5, 0.25}, 0.1);
  REQUIRE(k.has_value());
  CHECK(*k == doctest::Approx((0.6 * 0.6) / (0.25 * 0.25)));
}

TEST_CASE("compute_k is at least 1 and rejects near-anchor candidates") {
  Rng rng(3);
  const auto anchors = place_random(3, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  const auto betas = true_betas(truth, anchors);
  for (int rep = 0; rep < 200; ++rep) {
    const Point2 cand(rng.uniform(), rng.uniform());
    const auto k = compute_k(cand, anchors, betas, 0.05);
    if (k) CHECK(*k >= 1.0);
  }
  // A candidate within zeta of an anchor is rejected.
  CHECK_FALSE(compute_k(anchors[0], anchors, betas, 0.05).has_value());
  const Point2 close = anchors[0] + Point2(0.01, 0.0);
  CHECK_FALSE(compute_k(close, anchors, betas, 0.05).has_value());
}

TEST_CASE("refine_randomization returns the best-scored candidate") {
  Rng rng(7);
  const auto anchors = place_random(3, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  const auto betas = true_betas(truth, anchors);
  const double zeta = 0.1;
  const RobustSolution sol = solved(anchors, betas, zeta);

  std::vector<ScoredCandidate> scored;
  Rng rounder(99);
  const Point2 out =
      refine_randomization(sol, anchors, betas, zeta, 100, rounder, &scored);
  REQUIRE_FALSE(scored.empty());
  CHECK(static_cast<int>(scored.size()) <= 100);

  double best = std::numeric_limits<double>::infinity();
  Point2 argmin = sol.x_star;
  for (const ScoredCandidate& c : scored) {
    if (c.score < best) {
      best = c.score;
      argmin = c.x;
    }
  }
  CHECK(out.x() == argmin.x());
  CHECK(out.y() == argmin.y());

  // The accepted candidate can never score worse than any scored one.
  const auto k_out = compute_k(out, anchors, betas, zeta);
  REQUIRE(k_out.has_value());
  CHECK(*k_out == doctest::Approx(best));
}

TEST_CASE("refine_randomization degenerates to x* at zero covariance") {
  RobustSolution sol;
  sol.x_star = Point2(0.4, 0.6);
  sol.X_star = sol.x_star * sol.x_star.transpose();  // rank one, zero covariance
  sol.status = SolveStatus::Optimal;

  const std::vector<Point2> anchors = {{0.1, 0.1}, {0.9, 0.2}, {0.5, 0.9}};
  const auto betas = true_betas(sol.x_star, anchors);
  Rng rng(1);
  const Point2 out = refine_randomization(sol, anchors, betas, 0.05, 50, rng);
  CHECK(out.x() == sol.x_star.x());
  CHECK(out.y() == sol.x_star.y());
  CHECK_THROWS_AS(refine_randomization(sol, anchors, betas, 0.05, 0, rng),
                  std::invalid_argument);
}

TEST_CASE("refine_grid never scores worse than x*") {
  Rng rng(17);
  for (int rep = 0; rep < 5; ++rep) {
    const auto anchors = place_random(3, rng);
    const Point2 truth = sample_source(anchors, 0.025, rng);
    const auto betas = true_betas(truth, anchors);
    const double zeta = 0.08;
    const RobustSolution sol = solved(anchors, betas, zeta);

    const Point2 out = refine_grid(sol, anchors, betas, zeta);
    const auto k_out = compute_k(out, anchors, betas, zeta);
    const auto k_star = compute_k(sol.x_star, anchors, betas, zeta);
    if (k_star) {
      REQUIRE(k_out.has_value());
      CHECK(*k_out <= *k_star + 1e-12);
    }
  }
}

TEST_CASE("refine_grid search radius follows the relaxation spread") {
  RobustSolution sol;
  sol.x_star = Point2(0.5, 0.5);
  const double var = 0.01;  // sigma_d = 0.1
  sol.X_star = sol.x_star * sol.x_star.transpose() +
               var * Eigen::Matrix2d::Identity();
  sol.status = SolveStatus::Optimal;

  const std::vector<Point2> anchors = {{0.1, 0.1}, {0.9, 0.2}, {0.5, 0.9}};
  const auto betas = true_betas(Point2(0.45, 0.55), anchors);
  std::vector<ScoredCandidate> scored;
  refine_grid(sol, anchors, betas, 0.05, {}, &scored);
  REQUIRE_FALSE(scored.empty());
  const double max_radius = 3.0 * std::sqrt(var);
  for (const ScoredCandidate& c : scored) {
    CHECK((c.x - sol.x_star).norm() <= max_radius + 1e-9);
  }

  // Zero spread means there is nothing to search.
  sol.X_star = sol.x_star * sol.x_star.transpose();
  const Point2 out = refine_grid(sol, anchors, betas, 0.05);
  CHECK(out.x() == sol.x_star.x());
  CHECK(out.y() == sol.x_star.y());
}

TEST_CASE("permutation_row_count") {
  CHECK(permutation_row_count(4, 3) == 24);
  CHECK(permutation_row_count(4, 4) == 24);
  CHECK(permutation_row_count(5, 3) == 60);
  CHECK(permutation_row_count(3, 3) == 6);
}

TEST_CASE("refine_anchor_aware validates the budget and is deterministic") {
  Rng rng(23);
  const auto anchors = place_random(3, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  const auto rss = [&] {
    Rng r(5);
    return measure_rss(kModel, truth, anchors, r);
  }();
  const auto betas = rss.betas;
  const double zeta = 0.08;
  const RobustSolution sol = solved(anchors, betas, zeta);

  RoundingBudget budget;
  budget.tt = 50;
  budget.anchor_candidates = 2;  // fewer candidates than anchors
  Rng r1(9);
  CHECK_THROWS_AS(
      refine_anchor_aware(sol, anchors, rss.losses, kModel, zeta, budget, r1),
      std::invalid_argument);

  budget.anchor_candidates = 4;
  Rng r2(9), r3(9);
  const Point2 a =
      refine_anchor_aware(sol, anchors, rss.losses, kModel, zeta, budget, r2);
  const Point2 b =
      refine_anchor_aware(sol, anchors, rss.losses, kModel, zeta, budget, r3);
  CHECK(a.x() == b.x());
  CHECK(a.y() == b.y());
  CHECK(a.x() >= 0.0);
  CHECK(a.x() <= 1.0);
  CHECK(a.y() >= 0.0);
  CHECK(a.y() <= 1.0);
}

TEST_CASE("refine_anchor_aware returns the lowest-residual source candidate") {
  Rng rng(29);
  const auto anchors = place_random(3, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  Rng meas(31);
  const auto rss = measure_rss(kModel, truth, anchors, meas);
  const double zeta = 0.1;
  const RobustSolution sol = solved(anchors, rss.betas, zeta);

  RoundingBudget budget;
  std::vector<ScoredCandidate> scored;
  Rng rounder(41);
  const Point2 out = refine_anchor_aware(sol, anchors, rss.losses, kModel, zeta,
                                         budget, rounder, {}, &scored);
  REQUIRE_FALSE(scored.empty());
  double best = std::numeric_limits<double>::infinity();
  Point2 argmin = sol.x_star;
  for (const ScoredCandidate& c : scored) {
    if (c.score < best) {
      best = c.score;
      argmin = c.x;
    }
  }
  CHECK(out.x() == argmin.x());
  CHECK(out.y() == argmin.y());
}

TEST_CASE("cartesian variant accepts fewer candidates than anchors") {
  Rng rng(43);
  const auto anchors = place_random(4, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  Rng meas(44);
  const auto rss = measure_rss(kModel, truth, anchors, meas);
  const RobustSolution sol = solved(anchors, rss.betas, 0.06);

  RoundingBudget budget;
  budget.tt = 20;
  budget.anchor_candidates = 2;
  VariantFlags variants;
  variants.cartesian_anchors = true;
  Rng rounder(45);
  const Point2 out = refine_anchor_aware(sol, anchors, rss.losses, kModel, 0.06,
                                         budget, rounder, variants);
  CHECK(std::isfinite(out.x()));
  CHECK(std::isfinite(out.y()));
}

TEST_CASE("rank_one_round inverts an exactly rank-one lift") {
  RobustSolution sol;
  sol.x_star = Point2(0.3, 0.7);
  sol.X_star = sol.x_star * sol.x_star.transpose();
  const Point2 out = rank_one_round(sol);
  CHECK(out.x() == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(out.y() == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("rank_one_round picks the eigenvector sign closest to x*") {
  RobustSolution sol;
  sol.x_star = Point2(-0.3, -0.7);
  const Point2 v(0.3, 0.7);
  sol.X_star = v * v.transpose();
  const Point2 out = rank_one_round(sol);
  CHECK(out.x() == doctest::Approx(-0.3).epsilon(1e-10));
  CHECK(out.y() == doctest::Approx(-0.7).epsilon(1e-10));
}

TEST_CASE("rank_one_round stays within the spectral spread of x*") {
  Rng rng(51);
  const auto anchors = place_random(3, rng);
  const Point2 truth = sample_source(anchors, 0.025, rng);
  const auto betas = true_betas(truth, anchors);
  const RobustSolution sol = solved(anchors, betas, 0.1);
  const Point2 out = rank_one_round(sol);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(sol.covariance());
  const double spread = std::sqrt(std::max(0.0, es.eigenvalues()[1]));
  // x* is the lift's mean; the rank-one point deviates by at most a few
  // standard deviations of the relaxation.
  CHECK((out - sol.x_star).norm() <= 4.0 * spread + 1e-6);
}
