#include "rssloc/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rssloc/spectral.hpp"

namespace rssloc {

namespace {
constexpr double kTwoPi = 6.283185307179586476925287;
constexpr double kInf = std::numeric_limits<double>::infinity();

Point2 disk_sample(const Point2& center, double radius, Rng& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double th = kTwoPi * rng.uniform();
  return center + Point2(r * std::cos(th), r * std::sin(th));
}

// All M-permutations of {0..N-1} in lexicographic order, reservoir-sampled
// down to `cap` rows when there are more.
std::vector<std::vector<int>> permutation_rows(int N, int M, std::uint64_t cap,
                                               Rng& rng) {
  std::vector<std::vector<int>> rows;
  std::vector<int> current(M, 0);
  std::vector<bool> used(N, false);
  std::uint64_t seen = 0;

  auto emit = [&](const std::vector<int>& row) {
    ++seen;
    if (rows.size() < cap) {
      rows.push_back(row);
    } else {
      const std::uint64_t slot = rng.uniform_index(seen);
      if (slot < cap) rows[slot] = row;
    }
  };

  // Iterative depth-first enumeration.
  std::vector<int> choice(M, -1);
  int depth = 0;
  while (depth >= 0) {
    if (depth == M) {
      emit(current);
      --depth;
      continue;
    }
    int next = choice[depth] + 1;
    if (choice[depth] >= 0) used[choice[depth]] = false;
    while (next < N && used[next]) ++next;
    if (next >= N) {
      choice[depth] = -1;
      --depth;
      if (depth >= 0) continue;
      break;
    }
    choice[depth] = next;
    used[next] = true;
    current[depth] = next;
    ++depth;
    if (depth < M) choice[depth] = -1;
  }
  return rows;
}

std::vector<std::vector<int>> cartesian_rows(int N, int M, std::uint64_t cap,
                                             Rng& rng) {
  double total = std::pow(static_cast<double>(N), M);
  std::vector<std::vector<int>> rows;
  if (total <= static_cast<double>(cap)) {
    const std::uint64_t count = static_cast<std::uint64_t>(total);
    rows.reserve(count);
    std::vector<int> row(M, 0);
    for (std::uint64_t r = 0; r < count; ++r) {
      std::uint64_t v = r;
      for (int k = 0; k < M; ++k) {
        row[k] = static_cast<int>(v % N);
        v /= N;
      }
      rows.push_back(row);
    }
  } else {
    rows.reserve(cap);
    for (std::uint64_t r = 0; r < cap; ++r) {
      std::vector<int> row(M);
      for (int k = 0; k < M; ++k) row[k] = static_cast<int>(rng.uniform_index(N));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

std::uint64_t permutation_row_count(int candidates, int anchors) {
  std::uint64_t count = 1;
  for (int i = 0; i < anchors; ++i) count *= static_cast<std::uint64_t>(candidates - i);
  return count;
}

std::optional<double> compute_k(const Point2& x_cand,
                                const std::vector<Point2>& anchors,
                                const std::vector<double>& betas, double zeta) {
  double k = 0.0;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double d = (x_cand - anchors[i]).norm();
    if (d - zeta <= 0.0) return std::nullopt;
    const double b2 = betas[i] * betas[i];
    const double upper = (d + zeta) * (d + zeta) / b2;
    const double lower = b2 / ((d - zeta) * (d - zeta));
    k = std::max(k, std::max(upper, lower));
  }
  return k;
}

Point2 refine_randomization(const RobustSolution& sol,
                            const std::vector<Point2>& anchors,
                            const std::vector<double>& betas, double zeta,
                            int tt, Rng& rng,
                            std::vector<ScoredCandidate>* scored) {
  if (tt < 1) throw std::invalid_argument("refine_randomization: tt must be >= 1");
  const Eigen::Matrix2d cov = sol.covariance();
  Point2 best = sol.x_star;
  double best_k = kInf;
  for (int i = 0; i < tt; ++i) {
    const Point2 cand = gaussian_sample(sol.x_star, cov, rng);
    const auto k = compute_k(cand, anchors, betas, zeta);
    if (!k) continue;
    if (scored) scored->push_back({cand, *k});
    if (*k < best_k) {
      best_k = *k;
      best = cand;
    }
  }
  return best;
}

Point2 refine_grid(const RobustSolution& sol,
                   const std::vector<Point2>& anchors,
                   const std::vector<double>& betas, double zeta,
                   const VariantFlags& variants,
                   std::vector<ScoredCandidate>* scored) {
  double sigma_d;
  if (variants.literal_sigma_d) {
    sigma_d = std::max(sol.X_star(0, 0), sol.X_star(1, 1));
  } else {
    const Eigen::Matrix2d cov = sol.covariance();
    sigma_d = std::sqrt(std::max(0.0, std::max(cov(0, 0), cov(1, 1))));
  }

  Point2 best = sol.x_star;
  double best_k = kInf;
  if (auto k0 = compute_k(sol.x_star, anchors, betas, zeta)) {
    best_k = *k0;
    if (scored) scored->push_back({sol.x_star, *k0});
  }
  if (!(sigma_d > 0.0)) return best;

  const double step = 1e-3 * sigma_d;
  for (double ds = 1e-4; ds <= 3.0 * sigma_d; ds += step) {
    const int points = static_cast<int>(1.0 / ds);
    for (int j = 1; j <= points; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / points;
      const Point2 cand =
          sol.x_star + Point2(ds * std::cos(th), ds * std::sin(th));
      const auto k = compute_k(cand, anchors, betas, zeta);
      if (!k) continue;
      if (scored) scored->push_back({cand, *k});
      if (*k < best_k) {
        best_k = *k;
        best = cand;
      }
    }
  }
  return best;
}

Point2 refine_anchor_aware(const RobustSolution& sol,
                           const std::vector<Point2>& anchors,
                           const std::vector<double>& losses,
                           const PathLossModel& model, double zeta,
                           const RoundingBudget& budget, Rng& rng,
                           const VariantFlags& variants,
                           std::vector<ScoredCandidate>* scored) {
  const int M = static_cast<int>(anchors.size());
  const int N = budget.anchor_candidates;
  if (budget.tt < 1) throw std::invalid_argument("refine_anchor_aware: tt must be >= 1");
  if (!variants.cartesian_anchors && N < M) {
    throw std::invalid_argument("refine_anchor_aware: need N >= M anchor candidates");
  }
  if (losses.size() != anchors.size()) {
    throw std::invalid_argument("refine_anchor_aware: loss count != anchor count");
  }

  const Eigen::Matrix2d cov = sol.covariance();
  std::vector<Point2> sources;
  sources.reserve(budget.tt);
  for (int i = 0; i < budget.tt; ++i) {
    const Point2 cand = gaussian_sample(sol.x_star, cov, rng);
    if (cand.x() < 0.0 || cand.x() > 1.0 || cand.y() < 0.0 || cand.y() > 1.0) {
      continue;  // sources are deployed inside the unit square
    }
    sources.push_back(cand);
  }
  if (sources.empty()) return sol.x_star;

  std::vector<std::vector<Point2>> anchor_cands(M);
  for (int i = 0; i < M; ++i) {
    anchor_cands[i].reserve(N);
    for (int j = 0; j < N; ++j) {
      anchor_cands[i].push_back(disk_sample(anchors[i], zeta, rng));
    }
  }

  const std::uint64_t cap = static_cast<std::uint64_t>(budget.max_combinations);
  const std::vector<std::vector<int>> rows =
      variants.cartesian_anchors ? cartesian_rows(N, M, cap, rng)
                                 : permutation_rows(N, M, cap, rng);

  const double log_scale = 10.0 * model.gamma / std::log(10.0);

  // Residual of source candidate i against candidate position j of anchor k,
  // precomputable because the default score carries no fresh noise term.
  const int num_sources = static_cast<int>(sources.size());
  std::vector<double> table;
  if (!variants.literal_score_noise) {
    table.assign(static_cast<std::size_t>(num_sources) * M * N, kInf);
    for (int i = 0; i < num_sources; ++i) {
      for (int k = 0; k < M; ++k) {
        for (int j = 0; j < N; ++j) {
          const double d = (sources[i] - anchor_cands[k][j]).norm();
          if (d <= 0.0) continue;  // coincident pair, keep +inf to skip it
          const double predicted = model.L0 + log_scale * std::log(d / model.d0);
          table[(static_cast<std::size_t>(i) * M + k) * N + j] =
              predicted - losses[k];
        }
      }
    }
  }

  Point2 best = sol.x_star;
  double best_score = kInf;
  for (int i = 0; i < num_sources; ++i) {
    double cand_best = kInf;
    for (const std::vector<int>& row : rows) {
      double score = 0.0;
      bool valid = true;
      for (int k = 0; k < M && valid; ++k) {
        double r;
        if (!variants.literal_score_noise) {
          r = table[(static_cast<std::size_t>(i) * M + k) * N + row[k]];
          if (!std::isfinite(r)) valid = false;
        } else {
          const double d = (sources[i] - anchor_cands[k][row[k]]).norm();
          if (d <= 0.0) {
            valid = false;
            r = 0.0;
          } else {
            const double noise = model.sigma > 0.0 ? model.sigma * rng.normal() : 0.0;
            r = model.L0 + log_scale * std::log(d / model.d0) + noise - losses[k];
          }
        }
        score += r * r;
      }
      if (!valid) continue;
      cand_best = std::min(cand_best, score);
      if (score < best_score) {
        best_score = score;
        best = sources[i];
      }
    }
    if (scored && std::isfinite(cand_best)) scored->push_back({sources[i], cand_best});
  }
  return best;
}

Point2 rank_one_round(const RobustSolution& sol) {
  const auto [lambda, q] = rank_one_extract(sol.X_star);
  const Point2 p = std::sqrt(lambda) * Point2(q[0], q[1]);
  return (p - sol.x_star).norm() <= (-p - sol.x_star).norm() ? p : Point2(-p);
}

}  // namespace rssloc
