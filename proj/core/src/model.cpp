#include "rssloc/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rssloc {

void PathLossModel::validate() const {
  if (!(d0 > 0.0)) throw std::invalid_argument("PathLossModel: d0 must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("PathLossModel: gamma must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("PathLossModel: sigma must be >= 0");
  if (!std::isfinite(L0)) throw std::invalid_argument("PathLossModel: L0 must be finite");
}

double path_loss(const PathLossModel& model, const Point2& source,
                 const Point2& anchor, double noise_db) {
  model.validate();
  const double d = (source - anchor).norm();
  if (d <= 0.0) {
    throw std::domain_error("path_loss: source coincides with anchor");
  }
  return model.L0 + 10.0 * model.gamma * std::log10(d / model.d0) + noise_db;
}

double beta_from_loss(const PathLossModel& model, double loss) {
  model.validate();
  return model.d0 * std::pow(10.0, (loss - model.L0) / (10.0 * model.gamma));
}

RssMeasurements measure_rss(const PathLossModel& model, const Point2& source,
                            const std::vector<Point2>& anchors, Rng& rng) {
  model.validate();
  if (anchors.empty()) {
    throw std::invalid_argument("measure_rss: anchor list is empty");
  }
  RssMeasurements out;
  out.losses.reserve(anchors.size());
  out.betas.reserve(anchors.size());
  for (const Point2& z : anchors) {
    const double noise = model.sigma > 0.0 ? model.sigma * rng.normal() : 0.0;
    const double loss = path_loss(model, source, z, noise);
    out.losses.push_back(loss);
    out.betas.push_back(beta_from_loss(model, loss));
  }
  return out;
}

DistanceMeasurements measure_distances(const Point2& source,
                                       const std::vector<Point2>& anchors,
                                       double variance, Rng& rng) {
  if (!(variance >= 0.0)) {
    throw std::invalid_argument("measure_distances: variance must be >= 0");
  }
  if (anchors.empty()) {
    throw std::invalid_argument("measure_distances: anchor list is empty");
  }
  DistanceMeasurements out;
  out.variance = variance;
  out.s.reserve(anchors.size());
  const double sd = std::sqrt(variance);
  for (const Point2& z : anchors) {
    double d = (source - z).norm();
    if (variance > 0.0) d += sd * rng.normal();
    out.s.push_back(std::max(d, kRangeFloor));
  }
  return out;
}

}  // namespace rssloc
