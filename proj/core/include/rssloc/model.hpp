#pragma once

#include <Eigen/Core>
#include <vector>

#include "rssloc/rng.hpp"

namespace rssloc {

using Point2 = Eigen::Vector2d;

/// Log-distance path loss channel with log-normal shadowing.
/// Losses are in dB, coordinates in normalized unit lengths.
struct PathLossModel {
  double d0 = 0.025;    ///< reference distance, > 0
  double L0 = 8.0;      ///< path loss at d0, dB
  double gamma = 3.0;   ///< path loss exponent, > 0
  double sigma = 0.0;   ///< shadowing standard deviation, dB

  void validate() const;
};

/// Per-anchor path losses and the equivalent distance observations.
struct RssMeasurements {
  std::vector<double> losses;  ///< L_i, dB
  std::vector<double> betas;   ///< d0 * 10^((L_i - L0) / (10 gamma)), unit lengths
};

struct DistanceMeasurements {
  std::vector<double> s;  ///< noisy ranges, unit lengths
  double variance = 0.0;  ///< range noise variance
};

/// Floor applied to noisy ranges so downstream estimators never see a
/// nonpositive distance.
inline constexpr double kRangeFloor = 1e-6;

/// Path loss observed at `anchor` for a transmitter at `source`, plus the
/// given shadowing term. Throws std::domain_error if the two coincide.
double path_loss(const PathLossModel& model, const Point2& source,
                 const Point2& anchor, double noise_db);

/// Inverts the noiseless path loss model: the distance at which `loss`
/// would be observed. Always strictly positive.
double beta_from_loss(const PathLossModel& model, double loss);

/// Draws one shadowed loss per anchor (independent N(0, sigma^2) terms) and
/// the derived betas. With sigma == 0 the rng is not consumed.
RssMeasurements measure_rss(const PathLossModel& model, const Point2& source,
                            const std::vector<Point2>& anchors, Rng& rng);

/// Noisy ranges: true distance plus N(0, variance) noise, floored at
/// kRangeFloor. With variance == 0 the rng is not consumed.
DistanceMeasurements measure_distances(const Point2& source,
                                       const std::vector<Point2>& anchors,
                                       double variance, Rng& rng);

}  // namespace rssloc
