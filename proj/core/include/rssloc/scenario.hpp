#pragma once

#include <cstdint>
#include <vector>

#include "rssloc/model.hpp"
#include "rssloc/rng.hpp"

namespace rssloc {

enum class PlacementKind { Random, Designed };

/// How the bounded anchor offsets are drawn. The estimator only assumes the
/// bound, not the law, so this is a scenario knob.
enum class AnchorPerturbation { UniformDisk, DiskBoundary, TruncatedGaussian };

struct Placement {
  PlacementKind kind = PlacementKind::Random;
  int num_anchors = 3;  ///< >= 3
};

/// One sweep grid point.
struct SweepPoint {
  PlacementKind placement = PlacementKind::Random;
  int num_anchors = 3;
  double zeta = 0.0;            ///< anchor error bound
  double sigma = 0.0;           ///< RSS noise std, dB
  double range_variance = 0.15; ///< range noise variance for distance baselines
};

/// One Monte Carlo instance. Immutable after construction; RSS is generated
/// from the true anchors, estimators only ever see the reported ones.
struct Trial {
  Point2 true_source;
  std::vector<Point2> true_anchors;
  std::vector<Point2> reported_anchors;
  double zeta = 0.0;
  RssMeasurements rss;
  DistanceMeasurements ranges;
  int trial_index = 0;
  std::uint64_t seed = 0;
};

/// M i.i.d. uniform points in the unit square. M >= 3.
std::vector<Point2> place_random(int num_anchors, Rng& rng);

/// M points evenly spaced along the boundary of [0.05, 0.95]^2, starting at
/// the lower-left corner and walking counterclockwise. 3 <= M <= 8.
std::vector<Point2> place_designed(int num_anchors);

/// Adds an offset of norm <= zeta to every anchor.
std::vector<Point2> perturb_anchors(const std::vector<Point2>& anchors,
                                    double zeta, Rng& rng,
                                    AnchorPerturbation law = AnchorPerturbation::UniformDisk);

/// Uniform in the unit square, resampled until at least `min_separation`
/// away from every anchor.
Point2 sample_source(const std::vector<Point2>& anchors, double min_separation,
                     Rng& rng);

/// Hash of the geometry-relevant part of a sweep point (placement, M, zeta).
/// sigma and range_variance are deliberately excluded so that trials at
/// different noise levels share geometry and noise substreams.
std::uint64_t sweep_point_hash(const SweepPoint& point);

/// Deterministically builds trial `trial_index` of a sweep point. The channel
/// supplies d0/L0/gamma; its sigma is overridden by the sweep point.
Trial make_trial(const SweepPoint& point, const PathLossModel& channel,
                 std::uint64_t master_seed, int trial_index,
                 AnchorPerturbation law = AnchorPerturbation::UniformDisk);

}  // namespace rssloc
