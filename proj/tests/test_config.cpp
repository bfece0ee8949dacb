#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "rssloc/config.hpp"

using namespace rssloc;

TEST_CASE("an empty document yields the defaults") {
  const CliConfig cfg = parse_config("");
  CHECK(cfg.sweep.trials_per_point == 500);
  CHECK(cfg.sweep.master_seed == 1);
  CHECK(cfg.sweep.anchor_counts == std::vector<int>{3});
  CHECK(cfg.sweep.methods.size() == std::size(kAllMethods));
  CHECK(cfg.output_dir == ".");
  CHECK(cfg.parallelism == 1);
}

TEST_CASE("comments, blank lines and lists parse") {
  const CliConfig cfg = parse_config(
      "# study setup\n"
      "\n"
      "zeta_values = 0.06, 0.08,0.1\n"
      "; trailing comment style\n"
      "methods = ro, r-r, ml\n"
      "trials_per_point = 20\n");
  CHECK(cfg.sweep.zeta_values == std::vector<double>{0.06, 0.08, 0.1});
  REQUIRE(cfg.sweep.methods.size() == 3);
  CHECK(cfg.sweep.methods[0] == Method::Ro);
  CHECK(cfg.sweep.methods[1] == Method::RR);
  CHECK(cfg.sweep.methods[2] == Method::Ml);
  CHECK(cfg.sweep.trials_per_point == 20);
}

TEST_CASE("section-qualified and bare keys are interchangeable") {
  const CliConfig a = parse_config("[sweep]\nmaster_seed = 9\n[run]\nparallelism = 4\n");
  const CliConfig b = parse_config("master_seed = 9\nparallelism = 4\n");
  CHECK(a.sweep.master_seed == 9);
  CHECK(b.sweep.master_seed == 9);
  CHECK(a.parallelism == 4);
  CHECK(b.parallelism == 4);
}

TEST_CASE("bool, enum and numeric fields parse") {
  const CliConfig cfg = parse_config(
      "literal_plus_sign = true\n"
      "cartesian_anchors = 1\n"
      "perturbation = disk_boundary\n"
      "placements = designed\n"
      "tolerance = 1e-9\n"
      "max_iterations = 500\n"
      "tt = 200\n"
      "gamma = 2.7\n");
  CHECK(cfg.sweep.variants.literal_plus_sign);
  CHECK(cfg.sweep.variants.cartesian_anchors);
  CHECK(cfg.sweep.perturbation == AnchorPerturbation::DiskBoundary);
  CHECK(cfg.sweep.placements == std::vector<PlacementKind>{PlacementKind::Designed});
  CHECK(cfg.sweep.solver.tolerance == 1e-9);
  CHECK(cfg.sweep.solver.max_iterations == 500);
  CHECK(cfg.sweep.budget.tt == 200);
  CHECK(cfg.sweep.channel.gamma == 2.7);
}

TEST_CASE("errors carry the offending line number") {
  try {
    parse_config("trials_per_point = 10\nM_values = 2\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("M_values") != std::string::npos);
  }

  try {
    parse_config("frobnicate = 7\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
    CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
  }
}

TEST_CASE("an unknown method label lists the valid ones") {
  try {
    parse_config("methods = ro, bogus\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("bogus") != std::string::npos);
    CHECK(what.find("ro") != std::string::npos);
    CHECK(what.find("so-d") != std::string::npos);
  }
}

TEST_CASE("malformed values are rejected") {
  CHECK_THROWS_AS(parse_config("zeta_values = 0.06, abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("zeta_values = -0.1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("literal_sigma_d = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("perturbation = square\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("trials_per_point = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("just some words\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("= 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("methods =\n"), ConfigError);
}

TEST_CASE("serialize/parse is the identity") {
  CliConfig cfg;
  cfg.sweep.placements = {PlacementKind::Designed, PlacementKind::Random};
  cfg.sweep.anchor_counts = {3, 5};
  cfg.sweep.zeta_values = {0.06, 0.16};
  cfg.sweep.sigma_values = {0.0, 2.0};
  cfg.sweep.range_variance = 0.15;
  cfg.sweep.methods = {Method::RR, Method::SoD};
  cfg.sweep.trials_per_point = 123;
  cfg.sweep.master_seed = 987654321;
  cfg.sweep.ml_restarts = 7;
  cfg.sweep.budget.tt = 64;
  cfg.sweep.budget.anchor_candidates = 5;
  cfg.sweep.budget.max_combinations = 999;
  cfg.sweep.variants.literal_plus_sign = true;
  cfg.sweep.variants.literal_sigma_d = true;
  cfg.sweep.perturbation = AnchorPerturbation::TruncatedGaussian;
  cfg.sweep.solver.tolerance = 2.5e-9;
  cfg.sweep.solver.max_iterations = 1234;
  cfg.sweep.channel.gamma = 2.8;
  cfg.output_dir = "out";
  cfg.parallelism = 6;
  cfg.verbosity = 2;

  const CliConfig back = parse_config(serialize_config(cfg));
  CHECK(back.sweep.placements == cfg.sweep.placements);
  CHECK(back.sweep.anchor_counts == cfg.sweep.anchor_counts);
  CHECK(back.sweep.zeta_values == cfg.sweep.zeta_values);
  CHECK(back.sweep.sigma_values == cfg.sweep.sigma_values);
  CHECK(back.sweep.range_variance == cfg.sweep.range_variance);
  CHECK(back.sweep.methods == cfg.sweep.methods);
  CHECK(back.sweep.trials_per_point == cfg.sweep.trials_per_point);
  CHECK(back.sweep.master_seed == cfg.sweep.master_seed);
  CHECK(back.sweep.ml_restarts == cfg.sweep.ml_restarts);
  CHECK(back.sweep.budget.tt == cfg.sweep.budget.tt);
  CHECK(back.sweep.budget.anchor_candidates == cfg.sweep.budget.anchor_candidates);
  CHECK(back.sweep.budget.max_combinations == cfg.sweep.budget.max_combinations);
  CHECK(back.sweep.variants.literal_plus_sign == cfg.sweep.variants.literal_plus_sign);
  CHECK(back.sweep.variants.literal_score_noise == cfg.sweep.variants.literal_score_noise);
  CHECK(back.sweep.variants.literal_sigma_d == cfg.sweep.variants.literal_sigma_d);
  CHECK(back.sweep.variants.cartesian_anchors == cfg.sweep.variants.cartesian_anchors);
  CHECK(back.sweep.perturbation == cfg.sweep.perturbation);
  CHECK(back.sweep.solver.tolerance == cfg.sweep.solver.tolerance);
  CHECK(back.sweep.solver.max_iterations == cfg.sweep.solver.max_iterations);
  CHECK(back.sweep.channel.gamma == cfg.sweep.channel.gamma);
  CHECK(back.output_dir == cfg.output_dir);
  CHECK(back.parallelism == cfg.parallelism);
  CHECK(back.verbosity == cfg.verbosity);
}

TEST_CASE("load_config reads a file and reports missing paths") {
  const std::string path = "test_config_roundtrip.ini";
  {
    std::ofstream os(path);
    os << "trials_per_point = 11\nmaster_seed = 42\n";
  }
  const CliConfig cfg = load_config(path);
  CHECK(cfg.sweep.trials_per_point == 11);
  CHECK(cfg.sweep.master_seed == 42);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_config("no_such_file.ini"), std::runtime_error);
}
