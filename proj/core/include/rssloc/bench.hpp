#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rssloc/estimators.hpp"
#include "rssloc/rounding.hpp"
#include "rssloc/scenario.hpp"

namespace rssloc {

struct SweepConfig {
  std::vector<PlacementKind> placements{PlacementKind::Random};
  std::vector<int> anchor_counts{3};
  std::vector<double> zeta_values{0.1};
  std::vector<double> sigma_values{0.0};
  double range_variance = 0.15;
  std::vector<Method> methods{kAllMethods, kAllMethods + std::size(kAllMethods)};
  int trials_per_point = 500;
  std::uint64_t master_seed = 1;
  RoundingBudget budget;
  VariantFlags variants;
  PathLossModel channel{0.025, 8.0, 3.0, 0.0};  ///< sigma overridden per point
  SolverSettings solver;
  int ml_restarts = 20;
  AnchorPerturbation perturbation = AnchorPerturbation::UniformDisk;

  void validate() const;
  std::vector<SweepPoint> grid() const;  ///< canonical sweep-point order
};

struct TrialRecord {
  Method method = Method::Ml;
  PlacementKind placement = PlacementKind::Random;
  int num_anchors = 3;
  double zeta = 0.0;
  double sigma = 0.0;
  int trial_index = 0;
  Point2 truth = Point2::Zero();
  Point2 estimate = Point2::Zero();
  double err = 0.0;
  SolveStatus status = SolveStatus::Optimal;
  bool missing = false;  ///< no estimate exists; err is meaningless
};

struct BoxplotStats {
  double median = 0.0, q1 = 0.0, q3 = 0.0;
  double whisker_lo = 0.0, whisker_hi = 0.0;
  std::vector<double> outliers;
};

struct Aggregate {
  Method method = Method::Ml;
  SweepPoint point;
  double rmse_value = 0.0;
  BoxplotStats box;
  int n = 0;         ///< records included in the statistics
  int failures = 0;  ///< missing or non-optimal records
};

struct SweepReport {
  SweepConfig config;
  std::vector<TrialRecord> records;   ///< canonical order: point, trial, method
  std::vector<Aggregate> aggregates;  ///< canonical order: point, method
};

/// Runs every requested estimator on one trial. The four robust variants
/// share a single SDP solve. Estimator failures become records, not errors.
std::vector<TrialRecord> run_trial(const Trial& trial, const SweepPoint& point,
                                   const SweepConfig& config);

/// Full Monte Carlo sweep; trials may run on `parallelism` threads, output is
/// byte-deterministic regardless of the schedule.
SweepReport run_sweep(const SweepConfig& config, int parallelism = 1);

/// sqrt of the mean squared value. Throws on an empty group.
double rmse(const std::vector<double>& errors);

/// Type-7 quantiles, whiskers at the most extreme data within 1.5 IQR.
BoxplotStats boxplot_stats(std::vector<double> values);

/// Recomputes the per-(method, point) aggregates from raw records; used both
/// by run_sweep and as an audit in tests.
std::vector<Aggregate> compute_aggregates(const SweepConfig& config,
                                          const std::vector<TrialRecord>& records);

const char* to_string(PlacementKind kind);

void export_records_csv(const SweepReport& report, std::ostream& os);
void export_aggregates_csv(const SweepReport& report, std::ostream& os);

/// File variants; I/O failures raise std::runtime_error carrying the path.
void save_records_csv(const SweepReport& report, const std::string& path);
void save_aggregates_csv(const SweepReport& report, const std::string& path);

/// Named parameter grids reproducing the reference RMSE studies.
std::vector<std::string> preset_names();
bool is_preset(const std::string& name);
SweepConfig preset(const std::string& name);  ///< throws on unknown name
std::string preset_description(const std::string& name);

/// Shortest round-trip decimal rendering of a double.
std::string format_double(double v);

}  // namespace rssloc
