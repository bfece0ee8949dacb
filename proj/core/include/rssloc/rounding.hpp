#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rssloc/estimators.hpp"
#include "rssloc/model.hpp"
#include "rssloc/rng.hpp"

namespace rssloc {

struct RoundingBudget {
  int tt = 100;                 ///< source candidates
  int anchor_candidates = 4;    ///< N, candidate positions per anchor (>= M for permutation rows)
  int max_combinations = 10000; ///< cap on anchor index rows
};

/// Alternative published-form behaviors kept behind flags for comparison runs.
struct VariantFlags {
  bool literal_plus_sign = false;   ///< published sign in the worst-case SDP
  bool literal_score_noise = false;   ///< fresh noise inside the anchor-aware score
  bool literal_sigma_d = false;     ///< grid radius from diag(X*) instead of the covariance
  bool cartesian_anchors = false;   ///< independent anchor choices (N^M) instead of permutations
};

struct ScoredCandidate {
  Point2 x;
  double score;
};

/// Smallest k for which x_cand satisfies the worst-case constraint pair at
/// every anchor: max_i max((d_i + zeta)^2 / b_i^2, b_i^2 / (d_i - zeta)^2).
/// Returns nullopt when x_cand is within zeta of some anchor (the caller
/// discards such candidates).
std::optional<double> compute_k(const Point2& x_cand,
                                const std::vector<Point2>& reported_anchors,
                                const std::vector<double>& betas, double zeta);

/// Draws tt candidates from N(x*, X* - x* x*^T), scores each with compute_k,
/// returns the argmin; falls back to x* when every candidate is rejected.
Point2 refine_randomization(const RobustSolution& sol,
                            const std::vector<Point2>& reported_anchors,
                            const std::vector<double>& betas, double zeta,
                            int tt, Rng& rng,
                            std::vector<ScoredCandidate>* scored = nullptr);

/// Variable-step ring search around x*, radius bounded by three standard
/// deviations of the relaxation covariance.
Point2 refine_grid(const RobustSolution& sol,
                   const std::vector<Point2>& reported_anchors,
                   const std::vector<double>& betas, double zeta,
                   const VariantFlags& variants = {},
                   std::vector<ScoredCandidate>* scored = nullptr);

/// Joint source/anchor hypothesis search: tt source candidates, N anchor
/// candidates per anchor, rows of distinct candidate indices (capped by
/// uniform subsampling), scored by the sum of squared RSS residuals against
/// the measured losses.
Point2 refine_anchor_aware(const RobustSolution& sol,
                           const std::vector<Point2>& reported_anchors,
                           const std::vector<double>& losses,
                           const PathLossModel& model, double zeta,
                           const RoundingBudget& budget, Rng& rng,
                           const VariantFlags& variants = {},
                           std::vector<ScoredCandidate>* scored = nullptr);

/// sqrt(lambda_max) times the top eigenvector of X*, sign chosen by proximity
/// to x*.
Point2 rank_one_round(const RobustSolution& sol);

/// N!/(N-M)! as used by the anchor-aware search row count.
std::uint64_t permutation_row_count(int candidates, int anchors);

}  // namespace rssloc
