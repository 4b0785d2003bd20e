#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "evaluation.hpp"
#include "rng.hpp"

namespace offtd {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Problem load_problem(const Options& opts) {
  std::string map_text;
  if (!opts.map_file.empty()) map_text = read_file(opts.map_file);
  Problem p = make_problem(opts.problem, opts.seed, map_text);
  if (opts.sampled_db > 0) {
    Rng rng(derive_seed(opts.seed, "sampled_db", 0));
    p.d_b = sampled_distribution(p.dyn, p.behavior, p.start_dist,
                                 opts.sampled_db, rng);
    const std::vector<double> zeros(static_cast<std::size_t>(p.n_states), 0.0);
    for (std::size_t g = 0; g < p.gvfs.size(); ++g) {
      p.zero_error[g] =
          weighted_rve(zeros, p.v_true[g], p.d_b, p.gvfs[g].interest);
    }
  }
  return p;
}

Algorithm lookup_algorithm(const std::string& name) {
  const auto a = algorithm_from_name(name);
  if (!a) throw std::invalid_argument("unknown algorithm '" + name + "'");
  return *a;
}

void check_algorithm_on_problem(Algorithm a, const Problem& p) {
  if (is_episodic_only(a) && !p.episodic) {
    throw std::invalid_argument(
        std::string(algorithm_name(a)) +
        " needs episode boundaries and cannot run on continuing problem '" +
        p.name + "'");
  }
}

fs::path ensure_out(const Options& opts) {
  fs::path dir(opts.out);
  fs::create_directories(dir);
  return dir;
}

// report/plotdata input: a sweep output directory or a summary.json path.
fs::path resolve_summary_path(const Options& opts) {
  fs::path in(opts.input.empty() ? opts.out : opts.input);
  if (fs::is_directory(in)) in /= "summary.json";
  if (!fs::exists(in)) {
    throw std::invalid_argument("no sweep summary at '" + in.string() + "'");
  }
  return in;
}

json best_cell_json(const std::vector<CellResult>& results,
                    Criterion criterion) {
  const auto order = rank(results, criterion);
  const CellResult& best = results[order[0]];
  json b;
  b["id"] = best.cell.id();
  b["algorithm"] = algorithm_name(best.cell.algorithm);
  b["auc"] = best.mean_auc;
  b["final"] = best.mean_final;
  b["diverged_fraction"] = best.diverged_fraction;
  return b;
}

constexpr const char* kSensitivityHeader =
    "problem,algorithm,lambda,alpha,alpha_h,beta,zeta,rho_placement,value,"
    "diverged_fraction,algorithm_failed_pct";

void write_sensitivity_csv(const std::string& path,
                           const std::vector<CellResult>& cells,
                           Criterion criterion) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << kSensitivityHeader << '\n';
  for (const SensitivityRow& row : sensitivity_table(cells, criterion)) {
    const LearnerConfig& c = row.cell.config;
    out << row.cell.problem << ',' << algorithm_name(row.cell.algorithm) << ','
        << format_double(c.lambda) << ',' << format_double(c.alpha) << ','
        << format_double(c.alpha_h) << ',' << format_double(c.beta) << ','
        << format_double(c.zeta) << ',' << rho_placement_name(c.rho_placement)
        << ',' << format_double(row.value) << ','
        << format_double(row.diverged_fraction) << ','
        << format_double(row.algorithm_failed_pct) << '\n';
  }
}

}  // namespace

std::string cmd_run(const Options& opts) {
  const Problem problem = load_problem(opts);
  const Algorithm alg = lookup_algorithm(opts.algorithm);
  check_algorithm_on_problem(alg, problem);
  CellSpec cell{opts.problem, alg, opts.learner_config()};
  validate_learner_config(alg, cell.config);

  const SweepOptions so = opts.sweep_options();
  const auto results = run_sweep(problem, {cell}, so);

  const fs::path dir = ensure_out(opts);
  const std::string csv = (dir / "results.csv").string();
  const std::string summary = (dir / "summary.json").string();
  write_results_csv(csv, results, opts.series);
  write_summary_json(summary, opts.problem, so, results);

  json r;
  r["command"] = "run";
  r["cell"] = cell.id();
  r["runs"] = so.runs;
  r["auc"] = results[0].mean_auc;
  r["final"] = results[0].mean_final;
  r["diverged_fraction"] = results[0].diverged_fraction;
  r["results_csv"] = csv;
  r["summary_json"] = summary;
  return r.dump(2);
}

std::string cmd_sweep(const Options& opts) {
  const Problem problem = load_problem(opts);
  std::vector<std::string> names =
      opts.algorithms.empty() ? std::vector<std::string>{opts.algorithm}
                              : opts.algorithms;
  // "all" expands to every algorithm the problem supports.
  if (names.size() == 1 && names[0] == "all") {
    names.clear();
    for (Algorithm a : all_algorithms()) {
      if (is_episodic_only(a) && !problem.episodic) continue;
      names.push_back(algorithm_name(a));
    }
  }

  std::vector<CellSpec> cells;
  for (const std::string& name : names) {
    const Algorithm alg = lookup_algorithm(name);
    check_algorithm_on_problem(alg, problem);
    auto grid = build_grid(opts.problem, alg, opts.grid_overrides());
    cells.insert(cells.end(), grid.begin(), grid.end());
  }

  const SweepOptions so = opts.sweep_options();
  const auto results = run_sweep(problem, cells, so);

  const fs::path dir = ensure_out(opts);
  const std::string csv = (dir / "results.csv").string();
  const std::string summary = (dir / "summary.json").string();
  write_results_csv(csv, results, opts.series);
  write_summary_json(summary, opts.problem, so, results);

  json r;
  r["command"] = "sweep";
  r["cells"] = cells.size();
  r["runs"] = so.runs;
  r["criterion"] = criterion_name(opts.criterion);
  r["best"] = best_cell_json(results, opts.criterion);
  r["results_csv"] = csv;
  r["summary_json"] = summary;
  return r.dump(2);
}

std::string cmd_report(const Options& opts) {
  const fs::path summary_path = resolve_summary_path(opts);
  const SummaryFile sf = read_summary_json(summary_path.string());
  if (sf.cells.empty()) throw std::invalid_argument("summary has no cells");

  const fs::path dir = ensure_out(opts);
  const std::string report_csv = (dir / "report.csv").string();
  const std::string sens_csv = (dir / "sensitivity.csv").string();

  const auto order = rank(sf.cells, opts.criterion);
  {
    std::ofstream out(report_csv, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + report_csv + "'");
    out << "rank,id,algorithm,lambda,alpha,alpha_h,beta,zeta,rho_placement,"
           "auc,final,diverged_fraction\n";
    for (std::size_t i = 0; i < order.size(); ++i) {
      const CellResult& r = sf.cells[order[i]];
      const LearnerConfig& c = r.cell.config;
      out << (i + 1) << ',' << r.cell.id() << ','
          << algorithm_name(r.cell.algorithm) << ',' << format_double(c.lambda)
          << ',' << format_double(c.alpha) << ',' << format_double(c.alpha_h)
          << ',' << format_double(c.beta) << ',' << format_double(c.zeta)
          << ',' << rho_placement_name(c.rho_placement) << ','
          << format_double(r.mean_auc) << ',' << format_double(r.mean_final)
          << ',' << format_double(r.diverged_fraction) << '\n';
    }
  }
  write_sensitivity_csv(sens_csv, sf.cells, opts.criterion);

  json r;
  r["command"] = "report";
  r["criterion"] = criterion_name(opts.criterion);
  r["cells"] = sf.cells.size();
  r["best"] = best_cell_json(sf.cells, opts.criterion);
  r["report_csv"] = report_csv;
  r["sensitivity_csv"] = sens_csv;
  return r.dump(2);
}

std::string cmd_oracle(const Options& opts) {
  const Problem problem = load_problem(opts);
  const fs::path dir = ensure_out(opts);
  const std::string path = (dir / "ground_truth.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "state,d_b";
  for (const GvfSpec& g : problem.gvfs) out << ",v_true[" << g.name << "]";
  out << '\n';
  for (int s = 0; s < problem.n_states; ++s) {
    out << s << ',' << format_double(problem.d_b[static_cast<std::size_t>(s)]);
    for (std::size_t g = 0; g < problem.gvfs.size(); ++g) {
      out << ',' << format_double(problem.v_true[g][static_cast<std::size_t>(s)]);
    }
    out << '\n';
  }

  json r;
  r["command"] = "oracle";
  r["problem"] = opts.problem;
  r["states"] = problem.n_states;
  r["gvfs"] = problem.gvfs.size();
  r["zero_error"] = problem.zero_error;
  r["ground_truth_csv"] = path;
  return r.dump(2);
}

std::string cmd_plotdata(const Options& opts) {
  const fs::path summary_path = resolve_summary_path(opts);
  const SummaryFile sf = read_summary_json(summary_path.string());
  if (sf.cells.empty()) throw std::invalid_argument("summary has no cells");
  const fs::path dir = ensure_out(opts);

  json r;
  r["command"] = "plotdata";
  r["kind"] = opts.kind;
  r["criterion"] = criterion_name(opts.criterion);

  if (opts.kind == "learning_curve") {
    const auto order = rank(sf.cells, opts.criterion);
    const CellResult& best = sf.cells[order[0]];
    const fs::path results_csv = summary_path.parent_path() / "results.csv";
    const auto series = read_results_csv(results_csv.string());
    const auto it = series.find(best.cell.id());
    if (it == series.end() || it->second.empty()) {
      throw std::invalid_argument(
          "no series rows for the best cell in '" + results_csv.string() +
          "' (was the sweep written with series=none?)");
    }
    // Prefer precomputed mean rows; otherwise average the per-run rows.
    std::map<long, std::pair<double, int>> by_step;
    bool have_mean = false;
    for (const SeriesRow& row : it->second) {
      if (row.run == -1) have_mean = true;
    }
    for (const SeriesRow& row : it->second) {
      if ((row.run == -1) != have_mean) continue;
      auto& [sum, n] = by_step[row.step];
      sum += row.error;
      ++n;
    }
    const std::string path = (dir / "learning_curve.csv").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "'");
    out << "step,error\n";
    for (const auto& [step, agg] : by_step) {
      out << step << ',' << format_double(agg.first / agg.second) << '\n';
    }
    r["cell"] = best.cell.id();
    r["rows"] = by_step.size();
    r["path"] = path;
  } else if (opts.kind == "stepsize") {
    // Best value per (algorithm, alpha), optimizing every other parameter.
    std::map<std::pair<std::string, double>, const CellResult*> groups;
    for (const CellResult& c : sf.cells) {
      const auto key = std::make_pair(
          std::string(algorithm_name(c.cell.algorithm)), c.cell.config.alpha);
      const double v =
          opts.criterion == Criterion::Auc ? c.mean_auc : c.mean_final;
      auto [it, inserted] = groups.try_emplace(key, &c);
      if (!inserted) {
        const CellResult& cur = *it->second;
        const double cv =
            opts.criterion == Criterion::Auc ? cur.mean_auc : cur.mean_final;
        if (v < cv || (v == cv && c.cell.id() < cur.cell.id())) it->second = &c;
      }
    }
    const std::string path = (dir / "stepsize.csv").string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "'");
    out << "algorithm,alpha,value,diverged_fraction\n";
    for (const auto& [key, cell] : groups) {
      const double v =
          opts.criterion == Criterion::Auc ? cell->mean_auc : cell->mean_final;
      out << key.first << ',' << format_double(key.second) << ','
          << format_double(v) << ',' << format_double(cell->diverged_fraction)
          << '\n';
    }
    r["rows"] = groups.size();
    r["path"] = path;
  } else if (opts.kind == "sensitivity") {
    const std::string path = (dir / "sensitivity.csv").string();
    write_sensitivity_csv(path, sf.cells, opts.criterion);
    r["rows"] = sf.cells.size();
    r["path"] = path;
  } else {
    throw std::invalid_argument("unknown plotdata kind '" + opts.kind + "'");
  }
  return r.dump(2);
}

std::string run_command(const std::string& name, const Options& opts) {
  if (name == "run") return cmd_run(opts);
  if (name == "sweep") return cmd_sweep(opts);
  if (name == "report") return cmd_report(opts);
  if (name == "oracle") return cmd_oracle(opts);
  if (name == "plotdata") return cmd_plotdata(opts);
  throw std::invalid_argument("unknown command '" + name + "'");
}

}  // namespace offtd
