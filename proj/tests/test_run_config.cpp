#include "doctest.h"
#include "pdp/errors.hpp"
#include "pdp/run_config.hpp"

using namespace pdp;

TEST_CASE("config text sets fields and keeps defaults") {
  const auto c = parse_run_config(
      "# comment\nseed = 9\n\ndataset.observed_zones = 15\ntraining.interval = 10  # T\ntraining.input_window = 7.5\n"
      "eval.team_sizes = 3..5\n");
  CHECK(c.seed == 9);
  CHECK(c.dataset.observed_zones == 15);
  CHECK(c.training.interval == 10.0);
  CHECK(c.training.input_window == 7.5);
  CHECK(c.dataset_config().interval == 7.5);
  CHECK(c.team_sizes == std::vector<int>{3, 4, 5});
  CHECK(c.alpha == RunConfig{}.alpha);
}

TEST_CASE("errors carry the source and line") {
  try {
    parse_run_config("seed = 1\n\ntraining.tau = fast\n", "run.cfg");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).starts_with("run.cfg:3: "));
  }
  CHECK_THROWS_WITH_AS(parse_run_config("nope = 1\n", "x"), doctest::Contains("x:1: unknown key"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_run_config("seed\n", "x"), doctest::Contains("x:1:"), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), IoError);
}

TEST_CASE("resolved config text reproduces the config") {
  RunConfig c;
  c.seed = 77;
  c.training.sigma = 0.1 + 0.2;  // not exactly representable in short decimal
  c.team_sizes = {2, 6};
  c.allow_partial_init = true;
  const auto back = parse_run_config(to_config_text(c));
  CHECK(to_config_text(back) == to_config_text(c));
  CHECK(back.training == c.training);
}

TEST_CASE("evaluation scenarios use a different seed") {
  RunConfig c;
  CHECK(c.eval_config().seed != c.dataset_config().seed);
  CHECK(c.eval_config().runs == c.eval_runs);
}

TEST_CASE("validation") {
  RunConfig c;
  c.training.ideal_firing = 9.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.alpha = 2.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
