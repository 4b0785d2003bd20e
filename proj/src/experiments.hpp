// Parameter sweeps: grid construction, deterministic seeded execution of
// (cell, run) work items across a worker pool, divergence handling, ranking,
// and the CSV/JSON result schemas.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "learners.hpp"
#include "problems.hpp"

namespace offtd {

// One parameter point of a sweep.  The id string is the canonical form used
// for seeding and file output; two cells with equal ids are the same
// experiment.  The trace form is excluded from the id deliberately: under
// the full-delta placement the rho-inside and rho-outside forms are
// algebraically identical, so they share streams and results.
struct CellSpec {
  std::string problem;
  Algorithm algorithm = Algorithm::Td;
  LearnerConfig config;

  std::string id() const;
};

// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);

// Optional replacements for the built-in parameter lists.
struct GridOverrides {
  std::optional<std::vector<double>> alphas;
  std::optional<std::vector<double>> alpha_hs;
  std::optional<std::vector<double>> lambdas;
  std::optional<std::vector<double>> betas;
  std::optional<std::vector<double>> zetas;
  RhoPlacement rho_placement = RhoPlacement::FullDelta;
  TraceForm trace_form = TraceForm::RhoInside;
  HtdVariant htd_variant = HtdVariant::MainText;
  double cbar = 1.0;
};

// Built-in grids: alpha = 2^-18 .. 2^0 (19 values); alpha_h = 0.01 * 2^e for
// e in {0,2,...,14} (8 values, secondary-weight methods only); lambda in
// {0, 0.9}; beta in {0, 0.2, ..., 1.0} (EtdBeta only); zeta in {0, 0.9}
// (Abtd, which sweeps zeta instead of lambda).
std::vector<CellSpec> build_grid(const std::string& problem, Algorithm algorithm,
                                 const GridOverrides& overrides = {});

struct SweepOptions {
  int runs = 10;
  long steps = 0;       // 0: use the problem default
  int eval_every = 10;  // evaluation cadence in steps
  std::uint64_t base_seed = 12345;
  double cutoff_mult = 100.0;  // divergence cutoff, times the zero-weight error
  int workers = 1;
};

struct RunResult {
  int run = 0;
  std::vector<long> steps;      // evaluation points (step numbers, 1-based)
  std::vector<double> errors;   // combined error at each point
  bool diverged = false;
  double auc = 0.0;
  double final = 0.0;
  // Largest importance ratio seen at states where the GVF's interest is
  // positive (diagnostic; drives the high-variance ratio check).
  double max_interest_rho = 0.0;
};

struct CellResult {
  CellSpec cell;
  std::vector<RunResult> runs;
  double mean_auc = 0.0;    // over all runs; diverged runs carry the sentinel
  double mean_final = 0.0;
  double diverged_fraction = 0.0;
};

// Executes one run of one cell.  The stream seed is
// derive_seed(base_seed, cell.id(), run_index); Collision redraws its
// features from the same generator before the stream starts.  Divergence
// (any non-finite learner state, or combined error above
// cutoff_mult * zero-weight error) truncates the series at the detection
// point, sets auc = final = the cutoff sentinel, and stops the run.
RunResult run_cell(const Problem& problem, const CellSpec& cell, int run_index,
                   const SweepOptions& opts);

// Runs all (cell, run) items on `opts.workers` threads.  Output is
// byte-identical for any worker count: items are indexed up front and merged
// by index.
std::vector<CellResult> run_sweep(const Problem& problem,
                                  const std::vector<CellSpec>& cells,
                                  const SweepOptions& opts);

enum class Criterion { Auc, Final };
const char* criterion_name(Criterion c);
std::optional<Criterion> criterion_from_name(std::string_view name);

// Indices of `results` ordered ascending by the chosen mean criterion; ties
// broken by cell id.
std::vector<std::size_t> rank(const std::vector<CellResult>& results,
                              Criterion criterion);

struct SensitivityRow {
  CellSpec cell;
  double value = 0.0;               // mean criterion for the cell
  double diverged_fraction = 0.0;   // of this cell's runs
  double algorithm_failed_pct = 0.0;  // % of the algorithm's cells with any
                                      // diverged run
};

std::vector<SensitivityRow> sensitivity_table(
    const std::vector<CellResult>& results, Criterion criterion);

enum class SeriesMode { None, Mean, Full };
const char* series_mode_name(SeriesMode m);
std::optional<SeriesMode> series_mode_from_name(std::string_view name);

// results CSV: header
//   problem,algorithm,lambda,alpha,alpha_h,beta,zeta,rho_placement,run,step,error,diverged
// Full mode writes every run's recorded points (diverged = the run's flag);
// Mean mode writes run = -1 rows averaging the runs still alive at each
// point (diverged = 1 once any run has dropped out).  None skips series
// rows entirely (an empty file with the header).
void write_results_csv(const std::string& path,
                       const std::vector<CellResult>& results, SeriesMode mode);

// summary JSON: sweep metadata plus one record per cell with auc, final and
// diverged_fraction.
void write_summary_json(const std::string& path, const std::string& problem,
                        const SweepOptions& opts,
                        const std::vector<CellResult>& results);

// Reads back the summary written by write_summary_json (series data is not
// reloaded).  Used by the report/plotdata commands.
struct SummaryFile {
  std::string problem;
  SweepOptions opts;
  std::vector<CellResult> cells;  // runs empty; means and fractions filled
};
SummaryFile read_summary_json(const std::string& path);

// Reads series rows back from a results CSV: cell id -> (run -> series).
struct SeriesRow {
  int run = 0;
  long step = 0;
  double error = 0.0;
  int diverged = 0;
};
std::map<std::string, std::vector<SeriesRow>> read_results_csv(
    const std::string& path);

}  // namespace offtd
