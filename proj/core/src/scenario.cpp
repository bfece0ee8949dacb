#include "rssloc/scenario.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace rssloc {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

std::uint64_t double_bits(double v) {
  std::uint64_t bits;
  static_assert(sizeof(bits) == sizeof(v));
  std::memcpy(&bits, &v, sizeof(bits));
  return bits;
}

// Fixed substream ids within one trial.
enum Stream : std::uint64_t {
  kStreamPlace = 1,
  kStreamSource = 2,
  kStreamPerturb = 3,
  kStreamRss = 4,
  kStreamRange = 5,
};

}  // namespace

std::vector<Point2> place_random(int num_anchors, Rng& rng) {
  if (num_anchors < 3) {
    throw std::invalid_argument("place_random: need at least 3 anchors");
  }
  std::vector<Point2> out;
  out.reserve(num_anchors);
  for (int i = 0; i < num_anchors; ++i) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<Point2> place_designed(int num_anchors) {
  if (num_anchors < 3 || num_anchors > 8) {
    throw std::invalid_argument("place_designed: M must be in [3, 8]");
  }
  constexpr double lo = 0.05, hi = 0.95;
  const double side = hi - lo;
  const double perimeter = 4.0 * side;
  const double step = perimeter / num_anchors;
  std::vector<Point2> out;
  out.reserve(num_anchors);
  for (int i = 0; i < num_anchors; ++i) {
    double t = i * step;  // arc length from (lo, lo), counterclockwise
    double x, y;
    if (t < side) {
      x = lo + t;
      y = lo;
    } else if (t < 2.0 * side) {
      x = hi;
      y = lo + (t - side);
    } else if (t < 3.0 * side) {
      x = hi - (t - 2.0 * side);
      y = hi;
    } else {
      x = lo;
      y = hi - (t - 3.0 * side);
    }
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<Point2> perturb_anchors(const std::vector<Point2>& anchors,
                                    double zeta, Rng& rng,
                                    AnchorPerturbation law) {
  if (!(zeta >= 0.0)) {
    throw std::invalid_argument("perturb_anchors: zeta must be >= 0");
  }
  std::vector<Point2> out;
  out.reserve(anchors.size());
  for (const Point2& z : anchors) {
    Point2 delta = Point2::Zero();
    if (zeta > 0.0) {
      switch (law) {
        case AnchorPerturbation::UniformDisk: {
          const double r = zeta * std::sqrt(rng.uniform());
          const double th = kTwoPi * rng.uniform();
          delta << r * std::cos(th), r * std::sin(th);
          break;
        }
        case AnchorPerturbation::DiskBoundary: {
          const double th = kTwoPi * rng.uniform();
          delta << zeta * std::cos(th), zeta * std::sin(th);
          break;
        }
        case AnchorPerturbation::TruncatedGaussian: {
          // sd = zeta / 3, rejected outside the disk.
          do {
            delta << (zeta / 3.0) * rng.normal(), (zeta / 3.0) * rng.normal();
          } while (delta.norm() > zeta);
          break;
        }
      }
    }
    out.push_back(z + delta);
  }
  return out;
}

Point2 sample_source(const std::vector<Point2>& anchors, double min_separation,
                     Rng& rng) {
  while (true) {
    Point2 x(rng.uniform(), rng.uniform());
    bool ok = true;
    for (const Point2& z : anchors) {
      if ((x - z).norm() < min_separation) {
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
}

std::uint64_t sweep_point_hash(const SweepPoint& point) {
  std::uint64_t h = Rng::avalanche(static_cast<std::uint64_t>(point.placement) + 101);
  h = Rng::mix(h, static_cast<std::uint64_t>(point.num_anchors));
  h = Rng::mix(h, double_bits(point.zeta));
  return h;
}

Trial make_trial(const SweepPoint& point, const PathLossModel& channel,
                 std::uint64_t master_seed, int trial_index,
                 AnchorPerturbation law) {
  if (trial_index < 0) {
    throw std::invalid_argument("make_trial: trial_index must be >= 0");
  }
  const std::uint64_t seed = Rng::mix(
      master_seed,
      Rng::mix(static_cast<std::uint64_t>(trial_index) + 1, sweep_point_hash(point)));

  Trial trial;
  trial.trial_index = trial_index;
  trial.seed = seed;
  trial.zeta = point.zeta;

  if (point.placement == PlacementKind::Random) {
    Rng rng(Rng::mix(seed, kStreamPlace));
    trial.true_anchors = place_random(point.num_anchors, rng);
  } else {
    trial.true_anchors = place_designed(point.num_anchors);
  }

  {
    Rng rng(Rng::mix(seed, kStreamSource));
    trial.true_source = sample_source(trial.true_anchors, channel.d0, rng);
  }
  {
    Rng rng(Rng::mix(seed, kStreamPerturb));
    trial.reported_anchors = perturb_anchors(trial.true_anchors, point.zeta, rng, law);
  }
  {
    PathLossModel m = channel;
    m.sigma = point.sigma;
    Rng rng(Rng::mix(seed, kStreamRss));
    trial.rss = measure_rss(m, trial.true_source, trial.true_anchors, rng);
  }
  {
    Rng rng(Rng::mix(seed, kStreamRange));
    trial.ranges = measure_distances(trial.true_source, trial.true_anchors,
                                     point.range_variance, rng);
  }
  return trial;
}

}  // namespace rssloc
