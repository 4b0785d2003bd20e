// Harness configuration: one typed Options record covering every command,
// with string-keyed parsing (used by both the key=value config files the CLI
// reads and the JSON configs crossing the C API).  Unknown keys are
// rejected; every key has a documented default (docs/formats.md).
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "experiments.hpp"

namespace offtd {

struct Options {
  std::string problem = "collision";
  std::string algorithm = "td";
  std::vector<std::string> algorithms;  // sweep only; empty -> {algorithm}

  // Single-point learner parameters (run command).
  double alpha = 0.1;
  double alpha_h = 0.01;
  double lambda = 0.0;
  double beta = 0.0;
  double zeta = 0.0;
  double cbar = 1.0;
  RhoPlacement rho_placement = RhoPlacement::FullDelta;
  TraceForm trace_form = TraceForm::RhoInside;
  HtdVariant htd_variant = HtdVariant::MainText;

  // Execution.
  int runs = 10;
  long steps = 0;  // 0: problem default (20000 collision, 50000 gridworlds)
  int eval_every = 10;
  std::uint64_t seed = 12345;
  double cutoff_mult = 100.0;
  int workers = 0;  // 0: OFFTD_WORKERS env var, else hardware concurrency
  bool paper_scale = false;  // runs=50, eval_every=1 unless set explicitly

  // Output / input.
  std::string out = "results";
  SeriesMode series = SeriesMode::Mean;
  std::string input;  // report/plotdata: sweep output directory or summary path

  // Problem options.
  std::string map_file;  // override the built-in Four Rooms layout
  long sampled_db = 0;   // >0: estimate d_b from this many sampled steps

  // Report / plotdata.
  Criterion criterion = Criterion::Final;
  std::string kind = "learning_curve";  // learning_curve | stepsize | sensitivity

  // Grid overrides (sweep): comma-separated lists in text form.
  std::optional<std::vector<double>> alphas;
  std::optional<std::vector<double>> alpha_hs;
  std::optional<std::vector<double>> lambdas;
  std::optional<std::vector<double>> betas;
  std::optional<std::vector<double>> zetas;

  LearnerConfig learner_config() const;
  SweepOptions sweep_options() const;  // workers resolved via resolve_workers
  GridOverrides grid_overrides() const;
};

// Applies `kv` over the defaults.  Throws std::invalid_argument on unknown
// keys or malformed values, naming the key.
Options options_from_map(const std::map<std::string, std::string>& kv);

// JSON-object form of the same keys; values may be JSON strings, numbers,
// or booleans.
Options options_from_json(const std::string& json_text);

// workers option -> actual thread count (>= 1).
int resolve_workers(const Options& opts);

}  // namespace offtd
