#include "rssloc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace rssloc {

namespace {

int method_rank(Method m) { return static_cast<int>(m); }

std::vector<Method> canonical_methods(const std::vector<Method>& methods) {
  std::vector<Method> out = methods;
  std::sort(out.begin(), out.end(),
            [](Method a, Method b) { return method_rank(a) < method_rank(b); });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

TrialRecord base_record(const Trial& trial, const SweepPoint& point, Method m) {
  TrialRecord rec;
  rec.method = m;
  rec.placement = point.placement;
  rec.num_anchors = point.num_anchors;
  rec.zeta = point.zeta;
  rec.sigma = point.sigma;
  rec.trial_index = trial.trial_index;
  rec.truth = trial.true_source;
  return rec;
}

void finish_record(TrialRecord& rec, const Point2& estimate, SolveStatus status) {
  rec.estimate = estimate;
  rec.err = (estimate - rec.truth).norm();
  rec.status = status;
  rec.missing = false;
}

}  // namespace

const char* to_string(PlacementKind kind) {
  return kind == PlacementKind::Random ? "random" : "designed";
}

void SweepConfig::validate() const {
  channel.validate();
  if (placements.empty() || anchor_counts.empty() || zeta_values.empty() ||
      sigma_values.empty() || methods.empty()) {
    throw std::invalid_argument("SweepConfig: sweep lists must be non-empty");
  }
  if (trials_per_point < 1) {
    throw std::invalid_argument("SweepConfig: trials_per_point must be >= 1");
  }
  if (!(range_variance >= 0.0)) {
    throw std::invalid_argument("SweepConfig: range_variance must be >= 0");
  }
  if (ml_restarts < 1) {
    throw std::invalid_argument("SweepConfig: ml_restarts must be >= 1");
  }
  for (int m : anchor_counts) {
    if (m < 3) throw std::invalid_argument("SweepConfig: M must be >= 3");
  }
  for (double z : zeta_values) {
    if (!(z >= 0.0)) throw std::invalid_argument("SweepConfig: zeta must be >= 0");
  }
  for (double s : sigma_values) {
    if (!(s >= 0.0)) throw std::invalid_argument("SweepConfig: sigma must be >= 0");
  }
  if (budget.tt < 1 || budget.anchor_candidates < 1 || budget.max_combinations < 1) {
    throw std::invalid_argument("SweepConfig: rounding budget entries must be >= 1");
  }
}

std::vector<SweepPoint> SweepConfig::grid() const {
  std::vector<SweepPoint> points;
  for (PlacementKind placement : placements) {
    for (int m : anchor_counts) {
      for (double zeta : zeta_values) {
        for (double sigma : sigma_values) {
          points.push_back({placement, m, zeta, sigma, range_variance});
        }
      }
    }
  }
  return points;
}

std::vector<TrialRecord> run_trial(const Trial& trial, const SweepPoint& point,
                                   const SweepConfig& config) {
  const std::vector<Method> methods = canonical_methods(config.methods);
  const std::vector<Point2>& anchors = trial.reported_anchors;
  const std::vector<double>& betas = trial.rss.betas;

  const bool need_robust =
      std::any_of(methods.begin(), methods.end(), [](Method m) {
        return m == Method::Ro || m == Method::RR || m == Method::RG ||
               m == Method::RP;
      });
  RobustSolution robust;
  if (need_robust) {
    robust = estimate_robust_sdp(anchors, betas, trial.zeta, config.solver,
                                 config.variants.literal_plus_sign);
  }
  const bool robust_ok = robust.status == SolveStatus::Optimal;

  PathLossModel scoring_model = config.channel;
  scoring_model.sigma = point.sigma;

  // The permutation rows of the anchor-aware search need at least one
  // candidate per anchor, so the budget scales up with M when necessary.
  RoundingBudget budget = config.budget;
  if (!config.variants.cartesian_anchors) {
    budget.anchor_candidates =
        std::max(budget.anchor_candidates, point.num_anchors);
  }

  std::vector<TrialRecord> out;
  out.reserve(methods.size());
  for (Method m : methods) {
    TrialRecord rec = base_record(trial, point, m);
    Rng rng(Rng::mix(trial.seed, 1000 + static_cast<std::uint64_t>(m)));
    try {
      switch (m) {
        case Method::Ro:
          finish_record(rec, robust.x_star, robust.status);
          break;
        case Method::RR: {
          if (robust_ok) {
            finish_record(rec,
                          refine_anchor_aware(robust, anchors, trial.rss.losses,
                                              scoring_model, trial.zeta,
                                              budget, rng, config.variants),
                          robust.status);
          } else {
            finish_record(rec, robust.x_star, robust.status);
          }
          break;
        }
        case Method::RG: {
          if (robust_ok) {
            finish_record(rec,
                          refine_grid(robust, anchors, betas, trial.zeta,
                                      config.variants),
                          robust.status);
          } else {
            finish_record(rec, robust.x_star, robust.status);
          }
          break;
        }
        case Method::RP: {
          if (robust_ok) {
            finish_record(rec,
                          refine_randomization(robust, anchors, betas, trial.zeta,
                                               budget.tt, rng),
                          robust.status);
          } else {
            finish_record(rec, robust.x_star, robust.status);
          }
          break;
        }
        case Method::Rss: {
          const EstimatorOutput est = estimate_sdp_rss(anchors, betas, config.solver);
          finish_record(rec, est.x_hat, est.status);
          break;
        }
        case Method::Ml: {
          const EstimatorOutput est = estimate_ml(anchors, betas, config.channel.gamma,
                                                  config.ml_restarts, rng);
          finish_record(rec, est.x_hat, est.status);
          break;
        }
        case Method::Pd: {
          const EstimatorOutput est =
              estimate_sdp_distance(anchors, trial.ranges.s, config.solver);
          finish_record(rec, est.x_hat, est.status);
          break;
        }
        case Method::So: {
          const EstimatorOutput est =
              estimate_socp_rss(anchors, betas, trial.zeta, config.solver);
          finish_record(rec, est.x_hat, est.status);
          break;
        }
        case Method::SoD: {
          const EstimatorOutput est =
              estimate_socp_distance(anchors, trial.ranges.s, config.solver);
          finish_record(rec, est.x_hat, est.status);
          break;
        }
      }
    } catch (const std::exception&) {
      rec.missing = true;
      rec.status = SolveStatus::NumericalFailure;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

SweepReport run_sweep(const SweepConfig& config, int parallelism) {
  config.validate();
  if (parallelism < 1) parallelism = 1;

  SweepReport report;
  report.config = config;
  report.config.methods = canonical_methods(config.methods);

  const std::vector<SweepPoint> points = config.grid();
  const int trials = config.trials_per_point;
  const std::size_t task_count = points.size() * static_cast<std::size_t>(trials);
  std::vector<std::vector<TrialRecord>> results(task_count);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t task = next.fetch_add(1);
      if (task >= task_count || failed.load()) break;
      const SweepPoint& point = points[task / trials];
      const int trial_index = static_cast<int>(task % trials);
      try {
        const Trial trial = make_trial(point, config.channel, config.master_seed,
                                       trial_index, config.perturbation);
        results[task] = run_trial(trial, point, config);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        error_message = e.what();
        failed.store(true);
      }
    }
  };

  if (parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(parallelism);
    for (int i = 0; i < parallelism; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) {
    throw std::runtime_error("run_sweep: " + error_message);
  }

  report.records.reserve(task_count * report.config.methods.size());
  for (std::vector<TrialRecord>& chunk : results) {
    for (TrialRecord& rec : chunk) report.records.push_back(std::move(rec));
  }
  report.aggregates = compute_aggregates(report.config, report.records);
  return report;
}

double rmse(const std::vector<double>& errors) {
  if (errors.empty()) throw std::invalid_argument("rmse: empty group");
  double sum = 0.0;
  for (double e : errors) sum += e * e;
  return std::sqrt(sum / static_cast<double>(errors.size()));
}

namespace {
// Type-7 (linear interpolation) quantile of sorted data.
double quantile7(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}
}  // namespace

BoxplotStats boxplot_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("boxplot_stats: empty group");
  std::sort(values.begin(), values.end());
  BoxplotStats out;
  out.median = quantile7(values, 0.5);
  out.q1 = quantile7(values, 0.25);
  out.q3 = quantile7(values, 0.75);
  const double iqr = out.q3 - out.q1;
  const double lo_fence = out.q1 - 1.5 * iqr;
  const double hi_fence = out.q3 + 1.5 * iqr;
  out.whisker_lo = out.median;
  out.whisker_hi = out.median;
  bool any = false;
  for (double v : values) {
    if (v >= lo_fence && v <= hi_fence) {
      if (!any) {
        out.whisker_lo = v;
        out.whisker_hi = v;
        any = true;
      } else {
        out.whisker_lo = std::min(out.whisker_lo, v);
        out.whisker_hi = std::max(out.whisker_hi, v);
      }
    } else {
      out.outliers.push_back(v);
    }
  }
  return out;
}

std::vector<Aggregate> compute_aggregates(const SweepConfig& config,
                                          const std::vector<TrialRecord>& records) {
  const std::vector<SweepPoint> points = config.grid();
  const std::vector<Method> methods = canonical_methods(config.methods);
  std::vector<Aggregate> out;
  out.reserve(points.size() * methods.size());
  for (const SweepPoint& point : points) {
    for (Method m : methods) {
      Aggregate agg;
      agg.method = m;
      agg.point = point;
      std::vector<double> errors;
      for (const TrialRecord& rec : records) {
        if (rec.method != m || rec.placement != point.placement ||
            rec.num_anchors != point.num_anchors || rec.zeta != point.zeta ||
            rec.sigma != point.sigma) {
          continue;
        }
        if (rec.missing || rec.status != SolveStatus::Optimal) {
          ++agg.failures;
        } else {
          errors.push_back(rec.err);
        }
      }
      agg.n = static_cast<int>(errors.size());
      if (!errors.empty()) {
        agg.rmse_value = rmse(errors);
        agg.box = boxplot_stats(errors);
      }
      out.push_back(std::move(agg));
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void export_records_csv(const SweepReport& report, std::ostream& os) {
  os << "method,placement,M,zeta,sigma,trial,x_true,y_true,x_est,y_est,err,status\n";
  for (const TrialRecord& rec : report.records) {
    os << method_label(rec.method) << ',' << to_string(rec.placement) << ','
       << rec.num_anchors << ',' << format_double(rec.zeta) << ','
       << format_double(rec.sigma) << ',' << rec.trial_index << ','
       << format_double(rec.truth.x()) << ',' << format_double(rec.truth.y()) << ',';
    if (rec.missing) {
      os << ",,,missing\n";
    } else {
      os << format_double(rec.estimate.x()) << ',' << format_double(rec.estimate.y())
         << ',' << format_double(rec.err) << ',' << to_string(rec.status) << '\n';
    }
  }
}

void export_aggregates_csv(const SweepReport& report, std::ostream& os) {
  os << "# trials_per_point=" << report.config.trials_per_point
     << " master_seed=" << report.config.master_seed << '\n';
  os << "method,placement,M,zeta,sigma,rmse,median,q1,q3,whisker_lo,whisker_hi,n,failures\n";
  for (const Aggregate& agg : report.aggregates) {
    os << method_label(agg.method) << ',' << to_string(agg.point.placement) << ','
       << agg.point.num_anchors << ',' << format_double(agg.point.zeta) << ','
       << format_double(agg.point.sigma) << ',' << format_double(agg.rmse_value)
       << ',' << format_double(agg.box.median) << ',' << format_double(agg.box.q1)
       << ',' << format_double(agg.box.q3) << ',' << format_double(agg.box.whisker_lo)
       << ',' << format_double(agg.box.whisker_hi) << ',' << agg.n << ','
       << agg.failures << '\n';
  }
}

namespace {
void save_csv(const std::string& path, const SweepReport& report,
              void (*writer)(const SweepReport&, std::ostream&)) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  writer(report, os);
  os.flush();
  if (!os) throw std::runtime_error("write failed: " + path);
}
}  // namespace

void save_records_csv(const SweepReport& report, const std::string& path) {
  save_csv(path, report, &export_records_csv);
}

void save_aggregates_csv(const SweepReport& report, const std::string& path) {
  save_csv(path, report, &export_aggregates_csv);
}

std::vector<std::string> preset_names() { return {"fig3a", "fig3b", "fig5", "fig7"}; }

bool is_preset(const std::string& name) {
  const auto names = preset_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SweepConfig preset(const std::string& name) {
  SweepConfig cfg;
  if (name == "fig3a" || name == "fig3b") {
    cfg.placements = {name == "fig3a" ? PlacementKind::Random
                                      : PlacementKind::Designed};
    cfg.anchor_counts = {3};
    cfg.zeta_values = {0.06, 0.08, 0.10, 0.12, 0.16};
    cfg.sigma_values = {0.0};
  } else if (name == "fig5") {
    cfg.placements = {PlacementKind::Random};
    cfg.anchor_counts = {3};
    cfg.zeta_values = {0.06};
    cfg.sigma_values = {0.0, 2.0, 4.0};
  } else if (name == "fig7") {
    cfg.placements = {PlacementKind::Random};
    cfg.anchor_counts = {3, 4, 5};
    cfg.zeta_values = {0.08};
    cfg.sigma_values = {2.0};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

std::string preset_description(const std::string& name) {
  if (name == "fig3a") return "RMSE vs zeta, random placement, sigma=0, M=3";
  if (name == "fig3b") return "RMSE vs zeta, designed placement, sigma=0, M=3";
  if (name == "fig5") return "RMSE vs sigma, random placement, zeta=0.06, M=3";
  if (name == "fig7") return "RMSE vs M, random placement, zeta=0.08, sigma=2";
  throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace rssloc
