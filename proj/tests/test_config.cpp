#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"

using namespace offtd;

TEST_CASE("defaults") {
  const Options o = options_from_map({});
  CHECK(o.problem == "collision");
  CHECK(o.algorithm == "td");
  CHECK(o.algorithms.empty());
  CHECK(o.alpha == 0.1);
  CHECK(o.alpha_h == 0.01);
  CHECK(o.lambda == 0.0);
  CHECK(o.runs == 10);
  CHECK(o.steps == 0);
  CHECK(o.eval_every == 10);
  CHECK(o.seed == 12345);
  CHECK(o.cutoff_mult == 100.0);
  CHECK(o.workers == 0);
  CHECK_FALSE(o.paper_scale);
  CHECK(o.out == "results");
  CHECK(o.series == SeriesMode::Mean);
  CHECK(o.criterion == Criterion::Final);
  CHECK(o.kind == "learning_curve");
  CHECK_FALSE(o.alphas.has_value());
}

TEST_CASE("typed keys parse and validate") {
  std::map<std::string, std::string> kv = {
      {"problem", "fourrooms"},    {"algorithm", "gtd"},
      {"alpha", "0.25"},           {"alpha_h", "0.5"},
      {"lambda", "0.9"},           {"beta", "0.4"},
      {"zeta", "0.9"},             {"cbar", "1.5"},
      {"rho_placement", "partial"}, {"trace_form", "outside"},
      {"htd_variant", "appendix"}, {"runs", "3"},
      {"steps", "1000"},           {"eval_every", "5"},
      {"seed", "42"},              {"cutoff_mult", "50"},
      {"workers", "2"},            {"out", "/tmp/x"},
      {"series", "full"},          {"criterion", "auc"},
      {"kind", "stepsize"},        {"sampled_db", "100"},
  };
  const Options o = options_from_map(kv);
  CHECK(o.problem == "fourrooms");
  CHECK(o.alpha == 0.25);
  CHECK(o.alpha_h == 0.5);
  CHECK(o.lambda == 0.9);
  CHECK(o.cbar == 1.5);
  CHECK(o.rho_placement == RhoPlacement::PartialDelta);
  CHECK(o.trace_form == TraceForm::RhoOutside);
  CHECK(o.htd_variant == HtdVariant::Appendix);
  CHECK(o.runs == 3);
  CHECK(o.steps == 1000);
  CHECK(o.seed == 42);
  CHECK(o.workers == 2);
  CHECK(o.series == SeriesMode::Full);
  CHECK(o.criterion == Criterion::Auc);
  CHECK(o.kind == "stepsize");
  CHECK(o.sampled_db == 100);

  const LearnerConfig cfg = o.learner_config();
  CHECK(cfg.alpha == 0.25);
  CHECK(cfg.alpha_h == 0.5);
  CHECK(cfg.lambda == 0.9);
  CHECK(cfg.beta == 0.4);
  CHECK(cfg.zeta == 0.9);
  CHECK(cfg.cbar == 1.5);
  CHECK(cfg.rho_placement == RhoPlacement::PartialDelta);
  CHECK(cfg.trace_form == TraceForm::RhoOutside);
  CHECK(cfg.htd_variant == HtdVariant::Appendix);

  const SweepOptions so = o.sweep_options();
  CHECK(so.runs == 3);
  CHECK(so.steps == 1000);
  CHECK(so.eval_every == 5);
  CHECK(so.base_seed == 42);
  CHECK(so.cutoff_mult == 50);
  CHECK(so.workers == 2);
}

TEST_CASE("unknown and malformed keys are rejected by name") {
  try {
    options_from_map({{"alphaa", "0.1"}});
    FAIL("expected a throw");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("alphaa") != std::string::npos);
  }
  CHECK_THROWS_AS(options_from_map({{"alpha", "zebra"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"runs", "0"}}), std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"eval_every", "-1"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"series", "sometimes"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"criterion", "vibes"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"kind", "scatter"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"steps", "12x"}}), std::invalid_argument);
  CHECK_THROWS_AS(options_from_map({{"alphas", "0.1,,0.2"}}),
                  std::invalid_argument);
}

TEST_CASE("paper_scale shifts execution defaults but explicit keys win") {
  Options o = options_from_map({{"paper_scale", "true"}});
  CHECK(o.paper_scale);
  CHECK(o.runs == 50);
  CHECK(o.eval_every == 1);
  // Explicit execution keys override regardless of map iteration order.
  o = options_from_map({{"paper_scale", "true"}, {"runs", "7"}});
  CHECK(o.runs == 7);
  CHECK(o.eval_every == 1);
  o = options_from_map({{"eval_every", "25"}, {"paper_scale", "true"}});
  CHECK(o.runs == 50);
  CHECK(o.eval_every == 25);
  o = options_from_map({{"paper_scale", "false"}});
  CHECK(o.runs == 10);
  CHECK(o.eval_every == 10);
}

TEST_CASE("lists and grid overrides") {
  const Options o = options_from_map({{"alphas", "0.1,0.2,0.4"},
                                      {"lambdas", "0"},
                                      {"algorithms", "td,gtd,etd"}});
  REQUIRE(o.alphas.has_value());
  CHECK(*o.alphas == std::vector<double>{0.1, 0.2, 0.4});
  REQUIRE(o.lambdas.has_value());
  CHECK(*o.lambdas == std::vector<double>{0.0});
  CHECK(o.algorithms == std::vector<std::string>{"td", "gtd", "etd"});
  const GridOverrides go = o.grid_overrides();
  REQUIRE(go.alphas.has_value());
  CHECK(*go.alphas == std::vector<double>{0.1, 0.2, 0.4});
  CHECK_FALSE(go.betas.has_value());
}

TEST_CASE("JSON configs accept strings, numbers, booleans, and arrays") {
  const Options o = options_from_json(
      "{\"problem\": \"collision\", \"alpha\": 0.5, \"runs\": 4,"
      " \"paper_scale\": false, \"alphas\": [0.1, 0.2],"
      " \"algorithms\": [\"td\", \"etd\"], \"seed\": 9}");
  CHECK(o.alpha == 0.5);
  CHECK(o.runs == 4);
  CHECK(o.seed == 9);
  REQUIRE(o.alphas.has_value());
  CHECK(*o.alphas == std::vector<double>{0.1, 0.2});
  CHECK(o.algorithms == std::vector<std::string>{"td", "etd"});
  CHECK_THROWS_AS(options_from_json("not json"), std::invalid_argument);
  CHECK_THROWS_AS(options_from_json("[1,2]"), std::invalid_argument);
  CHECK_THROWS_AS(options_from_json("{\"alpha\": {\"x\": 1}}"),
                  std::invalid_argument);
  CHECK_THROWS_AS(options_from_json("{\"bogus\": 1}"), std::invalid_argument);
}

TEST_CASE("worker resolution order: explicit, env, hardware") {
  Options o;
  o.workers = 3;
  CHECK(resolve_workers(o) == 3);
  o.workers = 0;
  setenv("OFFTD_WORKERS", "5", 1);
  CHECK(resolve_workers(o) == 5);
  setenv("OFFTD_WORKERS", "junk", 1);
  CHECK(resolve_workers(o) >= 1);
  unsetenv("OFFTD_WORKERS");
  CHECK(resolve_workers(o) >= 1);
}
