#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rssloc/bench.hpp"

using namespace rssloc;

namespace {

SweepConfig tiny_config() {
  SweepConfig cfg;
  cfg.placements = {PlacementKind::Random};
  cfg.anchor_counts = {3};
  cfg.zeta_values = {0.1};
  cfg.sigma_values = {0.0};
  cfg.methods = {Method::Ro, Method::Ml, Method::SoD};
  cfg.trials_per_point = 4;
  cfg.master_seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("rmse") {
  CHECK(rmse({0.3, 0.4}) == doctest::Approx(std::sqrt(0.125)));
  CHECK(rmse({2.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(rmse({}), std::invalid_argument);
}

TEST_CASE("boxplot_stats computes type-7 quartiles") {
  const BoxplotStats s = boxplot_stats({5.0, 3.0, 1.0, 4.0, 2.0});
  CHECK(s.median == doctest::Approx(3.0));
  CHECK(s.q1 == doctest::Approx(2.0));
  CHECK(s.q3 == doctest::Approx(4.0));
  CHECK(s.whisker_lo == doctest::Approx(1.0));
  CHECK(s.whisker_hi == doctest::Approx(5.0));
  CHECK(s.outliers.empty());
}

TEST_CASE("boxplot_stats on constant data") {
  const BoxplotStats s = boxplot_stats(std::vector<double>(10, 1.5));
  CHECK(s.median == 1.5);
  CHECK(s.q1 == 1.5);
  CHECK(s.q3 == 1.5);
  CHECK(s.whisker_lo == 1.5);
  CHECK(s.whisker_hi == 1.5);
}

TEST_CASE("boxplot_stats flags points beyond 1.5 IQR") {
  std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  const BoxplotStats s = boxplot_stats(v);
  REQUIRE(s.outliers.size() == 1);
  CHECK(s.outliers[0] == 100.0);
  CHECK(s.whisker_hi == 9.0);
}

TEST_CASE("run_trial produces one record per requested method") {
  SweepConfig cfg = tiny_config();
  const SweepPoint point = cfg.grid().at(0);
  const Trial trial = make_trial(point, cfg.channel, cfg.master_seed, 0);
  const auto records = run_trial(trial, point, cfg);
  REQUIRE(records.size() == cfg.methods.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].method == cfg.methods[i]);
    CHECK(records[i].trial_index == 0);
    CHECK(records[i].truth.x() == trial.true_source.x());
    if (!records[i].missing) {
      CHECK(records[i].err ==
            doctest::Approx((records[i].estimate - trial.true_source).norm()));
    }
  }
}

TEST_CASE("robust variants share one relaxation solve") {
  SweepConfig cfg = tiny_config();
  cfg.methods = {Method::Ro, Method::RR, Method::RG, Method::RP};
  const SweepPoint point = cfg.grid().at(0);
  const Trial trial = make_trial(point, cfg.channel, cfg.master_seed, 1);
  const auto all = run_trial(trial, point, cfg);
  REQUIRE(all.size() == 4);

  // Running 'ro' alone must give byte-identical output: the rounding stages
  // draw from their own substreams and cannot disturb the shared solve.
  cfg.methods = {Method::Ro};
  const auto solo = run_trial(trial, point, cfg);
  REQUIRE(solo.size() == 1);
  CHECK(solo[0].estimate.x() == all[0].estimate.x());
  CHECK(solo[0].estimate.y() == all[0].estimate.y());
}

TEST_CASE("run_sweep is deterministic and schedule-independent") {
  const SweepConfig cfg = tiny_config();
  const SweepReport serial = run_sweep(cfg, 1);
  const SweepReport threaded = run_sweep(cfg, 4);

  std::ostringstream a, b;
  export_records_csv(serial, a);
  export_records_csv(threaded, b);
  CHECK(a.str() == b.str());

  std::ostringstream c, d;
  export_aggregates_csv(serial, c);
  export_aggregates_csv(threaded, d);
  CHECK(c.str() == d.str());

  REQUIRE(serial.records.size() ==
          cfg.methods.size() * static_cast<std::size_t>(cfg.trials_per_point));
}

TEST_CASE("records follow the canonical point/trial/method order") {
  SweepConfig cfg = tiny_config();
  cfg.zeta_values = {0.05, 0.1};
  const SweepReport report = run_sweep(cfg, 2);
  const auto grid = cfg.grid();
  REQUIRE(grid.size() == 2);
  std::size_t idx = 0;
  for (const SweepPoint& point : grid) {
    for (int t = 0; t < cfg.trials_per_point; ++t) {
      for (Method m : cfg.methods) {
        REQUIRE(idx < report.records.size());
        const TrialRecord& r = report.records[idx++];
        CHECK(r.method == m);
        CHECK(r.trial_index == t);
        CHECK(r.zeta == point.zeta);
      }
    }
  }
  CHECK(idx == report.records.size());
}

TEST_CASE("compute_aggregates audits run_sweep's own summaries") {
  const SweepConfig cfg = tiny_config();
  const SweepReport report = run_sweep(cfg, 2);
  const auto audit = compute_aggregates(cfg, report.records);
  REQUIRE(audit.size() == report.aggregates.size());
  for (std::size_t i = 0; i < audit.size(); ++i) {
    CHECK(audit[i].method == report.aggregates[i].method);
    CHECK(audit[i].rmse_value == report.aggregates[i].rmse_value);
    CHECK(audit[i].box.median == report.aggregates[i].box.median);
    CHECK(audit[i].n == report.aggregates[i].n);
    CHECK(audit[i].failures == report.aggregates[i].failures);
  }

  // Recompute one group's RMSE by hand.
  const Aggregate& first = report.aggregates.at(0);
  std::vector<double> errs;
  for (const TrialRecord& r : report.records) {
    if (r.method == first.method && !r.missing && r.status == SolveStatus::Optimal) {
      errs.push_back(r.err);
    }
  }
  REQUIRE_FALSE(errs.empty());
  CHECK(first.rmse_value == doctest::Approx(rmse(errs)).epsilon(1e-12));
}

TEST_CASE("CSV export round-trips the error column") {
  const SweepConfig cfg = tiny_config();
  const SweepReport report = run_sweep(cfg, 1);
  std::ostringstream os;
  export_records_csv(report, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line ==
        "method,placement,M,zeta,sigma,trial,x_true,y_true,x_est,y_est,err,status");
  std::size_t row = 0;
  while (std::getline(is, line)) {
    // err is the 11th comma-separated field.
    std::size_t pos = 0;
    for (int f = 0; f < 10; ++f) pos = line.find(',', pos) + 1;
    const std::string err_field = line.substr(pos, line.find(',', pos) - pos);
    REQUIRE(row < report.records.size());
    CHECK(std::stod(err_field) == report.records[row].err);
    ++row;
  }
  CHECK(row == report.records.size());
}

TEST_CASE("empty report exports a header-only CSV") {
  SweepReport report;
  report.config = tiny_config();
  std::ostringstream os;
  export_records_csv(report, os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 1);
}

TEST_CASE("aggregate CSV carries the provenance comment") {
  const SweepConfig cfg = tiny_config();
  const SweepReport report = run_sweep(cfg, 1);
  std::ostringstream os;
  export_aggregates_csv(report, os);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "# trials_per_point=4 master_seed=7");
  REQUIRE(std::getline(is, line));
  CHECK(line ==
        "method,placement,M,zeta,sigma,rmse,median,q1,q3,whisker_lo,whisker_hi,n,"
        "failures");
}

TEST_CASE("presets pin the published parameter grids") {
  for (const std::string& name :
       {std::string("fig3a"), std::string("fig3b"), std::string("fig5"),
        std::string("fig7")}) {
    CHECK(is_preset(name));
    CHECK_FALSE(preset_description(name).empty());
  }
  CHECK_FALSE(is_preset("fig9"));
  CHECK_THROWS_AS(preset("fig9"), std::invalid_argument);

  const SweepConfig a = preset("fig3a");
  CHECK(a.placements == std::vector<PlacementKind>{PlacementKind::Random});
  CHECK(a.anchor_counts == std::vector<int>{3});
  CHECK(a.zeta_values == std::vector<double>{0.06, 0.08, 0.1, 0.12, 0.16});
  CHECK(a.sigma_values == std::vector<double>{0.0});
  CHECK(a.trials_per_point == 500);
  CHECK(a.master_seed == 1);

  const SweepConfig b = preset("fig3b");
  CHECK(b.placements == std::vector<PlacementKind>{PlacementKind::Designed});
  CHECK(b.zeta_values == a.zeta_values);

  const SweepConfig f5 = preset("fig5");
  CHECK(f5.zeta_values == std::vector<double>{0.06});
  CHECK(f5.sigma_values == std::vector<double>{0.0, 2.0, 4.0});

  const SweepConfig f7 = preset("fig7");
  CHECK(f7.anchor_counts == std::vector<int>{3, 4, 5});
  CHECK(f7.zeta_values == std::vector<double>{0.08});
  CHECK(f7.sigma_values == std::vector<double>{2.0});
}

TEST_CASE("sweep grid order is placement, M, zeta, sigma") {
  SweepConfig cfg = tiny_config();
  cfg.anchor_counts = {3, 4};
  cfg.zeta_values = {0.05, 0.1};
  cfg.sigma_values = {0.0, 2.0};
  const auto grid = cfg.grid();
  REQUIRE(grid.size() == 8);
  CHECK(grid[0].num_anchors == 3);
  CHECK(grid[0].zeta == 0.05);
  CHECK(grid[0].sigma == 0.0);
  CHECK(grid[1].sigma == 2.0);
  CHECK(grid[2].zeta == 0.1);
  CHECK(grid[4].num_anchors == 4);
}

TEST_CASE("SweepConfig validation") {
  SweepConfig cfg = tiny_config();
  cfg.anchor_counts = {2};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.trials_per_point = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.zeta_values = {-0.1};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.methods = {};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 123456.789, 0.0, -2.5}) {
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(3.0) == "3");
}
