// Command-line front end: Monte Carlo sweeps, single-trial inspection, and
// the built-in parameter-grid presets.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "rssloc/bench.hpp"
#include "rssloc/config.hpp"
#include "rssloc/rounding.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  auto* cfg = cmd->add_option("--config", opts.config_path, "Config file path");
  cmd->add_option("--preset", opts.preset_name, "Built-in parameter grid")
      ->excludes(cfg);
  cmd->add_option("--seed", opts.seed, "Master seed override");
  cmd->add_option("--out", opts.out_dir, "Output directory override");
  cmd->add_option("--jobs", opts.jobs, "Worker threads (default: config value)");
}

// Builds the effective config; throws ConfigError / invalid_argument on bad
// input, runtime_error on I/O.
rssloc::CliConfig resolve_config(const CommonOpts& opts) {
  rssloc::CliConfig cfg;
  if (!opts.preset_name.empty()) {
    if (!rssloc::is_preset(opts.preset_name)) {
      std::string names;
      for (const std::string& n : rssloc::preset_names()) {
        if (!names.empty()) names += ", ";
        names += n;
      }
      throw std::invalid_argument("unknown preset '" + opts.preset_name +
                                  "' (available: " + names + ")");
    }
    cfg.sweep = rssloc::preset(opts.preset_name);
  } else if (!opts.config_path.empty()) {
    cfg = rssloc::load_config(opts.config_path);
  }
  if (opts.seed) cfg.sweep.master_seed = *opts.seed;
  if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
  if (opts.jobs > 0) cfg.parallelism = opts.jobs;
  cfg.sweep.validate();
  return cfg;
}

std::string run_name(const CommonOpts& opts) {
  if (!opts.preset_name.empty()) return opts.preset_name;
  if (!opts.config_path.empty()) {
    return std::filesystem::path(opts.config_path).stem().string();
  }
  return "sweep";
}

int cmd_sweep(const CommonOpts& opts, bool quiet) {
  rssloc::CliConfig cfg;
  try {
    cfg = resolve_config(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const rssloc::SweepReport report =
      rssloc::run_sweep(cfg.sweep, cfg.parallelism);

  const std::filesystem::path dir(cfg.output_dir);
  const std::string base = run_name(opts);
  const std::string records_path = (dir / (base + "_records.csv")).string();
  const std::string agg_path = (dir / (base + "_agg.csv")).string();
  try {
    std::filesystem::create_directories(dir);
    rssloc::save_records_csv(report, records_path);
    rssloc::save_aggregates_csv(report, agg_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  if (!quiet) {
    std::cout << "wrote " << records_path << " (" << report.records.size()
              << " records)\n"
              << "wrote " << agg_path << " (" << report.aggregates.size()
              << " rows)\n";
  }
  return 0;
}

nlohmann::json point_json(const rssloc::Point2& p) {
  return nlohmann::json::array({p.x(), p.y()});
}

int cmd_trial(const CommonOpts& opts, int index, const std::string& method_label,
              bool verbose, bool as_json) {
  rssloc::CliConfig cfg;
  std::optional<rssloc::Method> method;
  try {
    cfg = resolve_config(opts);
    method = rssloc::method_from_label(method_label);
    if (!method) {
      std::string valid;
      for (rssloc::Method m : rssloc::kAllMethods) {
        if (!valid.empty()) valid += ", ";
        valid += std::string(rssloc::method_label(m));
      }
      throw std::invalid_argument("unknown method '" + method_label +
                                  "' (valid: " + valid + ")");
    }
    if (index < 0 || index >= cfg.sweep.trials_per_point) {
      throw std::invalid_argument(
          "trial index out of range [0, " +
          std::to_string(cfg.sweep.trials_per_point) + ")");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const rssloc::SweepPoint point = cfg.sweep.grid().front();
  const rssloc::Trial trial = rssloc::make_trial(
      point, cfg.sweep.channel, cfg.sweep.master_seed, index,
      cfg.sweep.perturbation);

  rssloc::SweepConfig one = cfg.sweep;
  one.methods = {*method};
  const std::vector<rssloc::TrialRecord> recs =
      rssloc::run_trial(trial, point, one);
  const rssloc::TrialRecord& rec = recs.front();

  const bool robust_method =
      *method == rssloc::Method::Ro || *method == rssloc::Method::RR ||
      *method == rssloc::Method::RG || *method == rssloc::Method::RP;
  std::optional<rssloc::RobustSolution> robust;
  if (robust_method) {
    robust = rssloc::estimate_robust_sdp(trial.reported_anchors,
                                         trial.rss.betas, trial.zeta,
                                         cfg.sweep.solver,
                                         cfg.sweep.variants.literal_plus_sign);
  }

  nlohmann::json j;
  j["trial"] = index;
  j["method"] = std::string(rssloc::method_label(*method));
  j["placement"] = rssloc::to_string(point.placement);
  j["M"] = point.num_anchors;
  j["zeta"] = point.zeta;
  j["sigma"] = point.sigma;
  j["true_source"] = point_json(trial.true_source);
  j["true_anchors"] = nlohmann::json::array();
  j["reported_anchors"] = nlohmann::json::array();
  for (const rssloc::Point2& a : trial.true_anchors) {
    j["true_anchors"].push_back(point_json(a));
  }
  for (const rssloc::Point2& a : trial.reported_anchors) {
    j["reported_anchors"].push_back(point_json(a));
  }
  j["losses"] = trial.rss.losses;
  j["betas"] = trial.rss.betas;
  j["ranges"] = trial.ranges.s;
  j["estimate"] = point_json(rec.estimate);
  j["err"] = rec.err;
  j["status"] = rssloc::to_string(rec.status);
  j["missing"] = rec.missing;
  if (robust) {
    j["k_star"] = robust->k_star;
    const Eigen::Matrix2d cov = robust->covariance();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    j["covariance_eigenvalues"] =
        nlohmann::json::array({es.eigenvalues()[0], es.eigenvalues()[1]});
    j["duality_gap"] = robust->duality_gap;
    j["solver_iterations"] = robust->iterations;
  }
  if (*method == rssloc::Method::RR) {
    const std::uint64_t rows = rssloc::permutation_row_count(
        cfg.sweep.budget.anchor_candidates, point.num_anchors);
    j["candidate_rows"] = std::min<std::uint64_t>(
        rows, static_cast<std::uint64_t>(cfg.sweep.budget.max_combinations));
    j["candidate_rows_total"] = rows;
  }

  if (as_json) {
    std::cout << j.dump(2) << "\n";
    return 0;
  }

  std::cout << "trial " << index << "  method " << j["method"].get<std::string>()
            << "  placement " << j["placement"].get<std::string>() << "  M "
            << point.num_anchors << "  zeta " << point.zeta << "  sigma "
            << point.sigma << "\n";
  std::cout << "true source: (" << trial.true_source.x() << ", "
            << trial.true_source.y() << ")\n";
  for (std::size_t i = 0; i < trial.true_anchors.size(); ++i) {
    std::cout << "anchor " << i << ": true (" << trial.true_anchors[i].x()
              << ", " << trial.true_anchors[i].y() << ")  reported ("
              << trial.reported_anchors[i].x() << ", "
              << trial.reported_anchors[i].y() << ")  loss "
              << trial.rss.losses[i] << " dB  beta " << trial.rss.betas[i]
              << "  range " << trial.ranges.s[i] << "\n";
  }
  std::cout << "estimate: (" << rec.estimate.x() << ", " << rec.estimate.y()
            << ")  err " << rec.err << "  status "
            << rssloc::to_string(rec.status) << "\n";
  if (verbose && robust) {
    std::cout << "k* = " << robust->k_star << "\n";
    std::cout << "eigenvalues of X* - x* x*^T: "
              << j["covariance_eigenvalues"][0].get<double>() << ", "
              << j["covariance_eigenvalues"][1].get<double>() << "\n";
    std::cout << "duality gap " << robust->duality_gap << " after "
              << robust->iterations << " Newton iterations\n";
  }
  if (verbose && *method == rssloc::Method::RR) {
    std::cout << "anchor candidate rows used: "
              << j["candidate_rows"].get<std::uint64_t>() << " of "
              << j["candidate_rows_total"].get<std::uint64_t>() << "\n";
  }
  return 0;
}

int cmd_presets() {
  for (const std::string& name : rssloc::preset_names()) {
    std::cout << name << ": " << rssloc::preset_description(name) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RSS source localization benchmark suite"};
  app.require_subcommand(1);

  CommonOpts sweep_opts;
  bool quiet = false;
  CLI::App* sweep = app.add_subcommand("sweep", "Run a Monte Carlo sweep and write CSVs");
  add_common(sweep, sweep_opts);
  sweep->add_flag("--quiet", quiet, "Suppress the summary lines");

  CommonOpts trial_opts;
  int trial_index = 0;
  std::string trial_method = "ro";
  bool trial_verbose = false;
  bool trial_json = false;
  CLI::App* trial = app.add_subcommand("trial", "Inspect a single trial of the first grid point");
  add_common(trial, trial_opts);
  trial->add_option("--index", trial_index, "Trial index");
  trial->add_option("--method", trial_method, "Estimator label");
  trial->add_flag("--verbose", trial_verbose, "Print solver diagnostics");
  trial->add_flag("--json", trial_json, "Structured output");

  CLI::App* presets = app.add_subcommand("presets", "List built-in parameter grids");

  CLI11_PARSE(app, argc, argv);

  if (sweep->parsed()) return cmd_sweep(sweep_opts, quiet);
  if (trial->parsed()) {
    return cmd_trial(trial_opts, trial_index, trial_method, trial_verbose,
                     trial_json);
  }
  if (presets->parsed()) return cmd_presets();
  return 0;
}
