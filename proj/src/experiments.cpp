#include "experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "evaluation.hpp"
#include "rng.hpp"

namespace offtd {

namespace {

using json = nlohmann::json;

std::vector<double> default_alphas() {
  std::vector<double> v;
  for (int e = -18; e <= 0; ++e) v.push_back(std::ldexp(1.0, e));
  return v;
}

std::vector<double> default_alpha_hs() {
  std::vector<double> v;
  for (int e = 0; e <= 14; e += 2) v.push_back(0.01 * std::ldexp(1.0, e));
  return v;
}

const std::vector<double> kLambdas = {0.0, 0.9};
const std::vector<double> kBetas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
const std::vector<double> kZetas = {0.0, 0.9};

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CellSpec::id() const {
  std::string s = problem;
  s += ':';
  s += algorithm_name(algorithm);
  s += ":l=" + format_double(config.lambda);
  s += ":a=" + format_double(config.alpha);
  s += ":ah=" + format_double(config.alpha_h);
  s += ":b=" + format_double(config.beta);
  s += ":z=" + format_double(config.zeta);
  s += ":p=";
  s += rho_placement_name(config.rho_placement);
  return s;
}

std::vector<CellSpec> build_grid(const std::string& problem,
                                 Algorithm algorithm,
                                 const GridOverrides& overrides) {
  const std::vector<double> alphas =
      overrides.alphas.value_or(default_alphas());
  const std::vector<double> alpha_hs =
      overrides.alpha_hs.value_or(default_alpha_hs());
  const std::vector<double> lambdas = overrides.lambdas.value_or(kLambdas);
  const std::vector<double> betas = overrides.betas.value_or(kBetas);
  const std::vector<double> zetas = overrides.zetas.value_or(kZetas);

  LearnerConfig base;
  base.alpha_h = 0.0;
  base.cbar = overrides.cbar;
  base.rho_placement = overrides.rho_placement;
  base.trace_form = overrides.trace_form;
  base.htd_variant = overrides.htd_variant;

  std::vector<CellSpec> cells;
  auto push = [&](const LearnerConfig& cfg) {
    cells.push_back(CellSpec{problem, algorithm, cfg});
  };

  if (algorithm == Algorithm::Abtd) {
    for (double zeta : zetas) {
      for (double alpha : alphas) {
        LearnerConfig cfg = base;
        cfg.alpha = alpha;
        cfg.zeta = zeta;
        push(cfg);
      }
    }
    return cells;
  }
  for (double lambda : lambdas) {
    for (double alpha : alphas) {
      LearnerConfig cfg = base;
      cfg.lambda = lambda;
      cfg.alpha = alpha;
      if (uses_secondary_weights(algorithm)) {
        for (double ah : alpha_hs) {
          cfg.alpha_h = ah;
          push(cfg);
        }
      } else if (algorithm == Algorithm::EtdBeta) {
        for (double beta : betas) {
          cfg.beta = beta;
          push(cfg);
        }
      } else {
        push(cfg);
      }
    }
  }
  return cells;
}

RunResult run_cell(const Problem& problem, const CellSpec& cell, int run_index,
                   const SweepOptions& opts) {
  RunResult res;
  res.run = run_index;
  const long steps = opts.steps > 0 ? opts.steps : problem.default_steps;
  if (steps <= 0) throw std::invalid_argument("run_cell: no step count");

  Rng rng(derive_seed(opts.base_seed, cell.id(),
                      static_cast<std::uint64_t>(run_index)));
  std::vector<FeatureVector> run_features;
  const std::vector<FeatureVector>* feats = &problem.features;
  if (problem.feature_maker) {
    run_features = problem.feature_maker(rng);
    feats = &run_features;
  }

  const std::size_t ng = problem.gvfs.size();
  std::vector<Learner> learners;
  learners.reserve(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    LearnerConfig cfg = cell.config;
    if (cell.algorithm == Algorithm::Abtd) {
      const auto [p0, pm] =
          abtd_psi_bounds(problem.behavior, problem.gvfs[g].target);
      cfg.abtd_psi0 = p0;
      cfg.abtd_psi_max = pm;
    }
    learners.emplace_back(cell.algorithm, cfg, problem.feature_dim);
  }

  const double cutoff = opts.cutoff_mult * problem.zero_combined_error();
  const std::size_t ns = static_cast<std::size_t>(problem.n_states);
  std::vector<std::vector<double>> preds(ng, std::vector<double>(ns, 0.0));

  int state = rng.sample_discrete(problem.start_dist.data(),
                                  static_cast<int>(problem.start_dist.size()));
  for (long t = 0; t < steps; ++t) {
    const int a = problem.behavior.sample(state, rng);
    const int sn = problem.dyn.sample(state, a, rng);
    const double bp = problem.behavior.at(state, a);
    for (std::size_t g = 0; g < ng; ++g) {
      const GvfSpec& gv = problem.gvfs[g];
      Transition tr;
      tr.state = state;
      tr.action = a;
      tr.next_state = sn;
      tr.reward = gv.cumulant_at(state, a);
      tr.gamma_next = gv.discount_at(state, a);
      tr.pi_prob = gv.target.at(state, a);
      tr.b_prob = bp;
      tr.interest = gv.interest[static_cast<std::size_t>(state)];
      tr.x = &(*feats)[static_cast<std::size_t>(state)];
      tr.x_next = &(*feats)[static_cast<std::size_t>(sn)];
      if (tr.interest > 0.0) {
        res.max_interest_rho = std::max(res.max_interest_rho, tr.pi_prob / bp);
      }
      learners[g].step(tr);
    }
    state = sn;

    if ((t + 1) % opts.eval_every == 0) {
      bool bad = false;
      for (const Learner& l : learners) {
        if (l.diverged()) bad = true;
      }
      double err = 0.0;
      if (!bad) {
        for (std::size_t g = 0; g < ng; ++g) {
          for (std::size_t s = 0; s < ns; ++s) {
            preds[g][s] = learners[g].predict((*feats)[s]);
          }
        }
        err = problem.combined_error(preds);
        if (!std::isfinite(err) || err > cutoff) bad = true;
      }
      if (bad) {
        res.diverged = true;
        break;
      }
      res.steps.push_back(t + 1);
      res.errors.push_back(err);
    }
  }

  if (res.diverged) {
    res.auc = cutoff;
    res.final = cutoff;
  } else {
    if (res.errors.empty()) {
      // Only possible when steps < eval_every: fall back to one evaluation
      // at the end of the stream.
      for (std::size_t g = 0; g < ng; ++g) {
        for (std::size_t s = 0; s < ns; ++s) {
          preds[g][s] = learners[g].predict((*feats)[s]);
        }
      }
      res.steps.push_back(steps);
      res.errors.push_back(problem.combined_error(preds));
    }
    res.auc = series_auc(res.errors);
    res.final = series_final(res.errors);
  }
  return res;
}

std::vector<CellResult> run_sweep(const Problem& problem,
                                  const std::vector<CellSpec>& cells,
                                  const SweepOptions& opts) {
  if (opts.runs <= 0) throw std::invalid_argument("run_sweep: runs must be positive");
  const std::size_t runs = static_cast<std::size_t>(opts.runs);
  const std::size_t items = cells.size() * runs;
  std::vector<std::vector<RunResult>> table(cells.size());
  for (auto& row : table) row.resize(runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items) return;
      try {
        const std::size_t c = i / runs;
        const int r = static_cast<int>(i % runs);
        table[c][static_cast<std::size_t>(r)] =
            run_cell(problem, cells[c], r, opts);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(items);
        return;
      }
    }
  };

  const int workers = std::max(1, opts.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  std::vector<CellResult> out;
  out.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    CellResult cr;
    cr.cell = cells[c];
    cr.runs = std::move(table[c]);
    double auc = 0.0, fin = 0.0;
    int diverged = 0;
    for (const RunResult& r : cr.runs) {
      auc += r.auc;
      fin += r.final;
      if (r.diverged) ++diverged;
    }
    cr.mean_auc = auc / static_cast<double>(runs);
    cr.mean_final = fin / static_cast<double>(runs);
    cr.diverged_fraction = static_cast<double>(diverged) / static_cast<double>(runs);
    out.push_back(std::move(cr));
  }
  return out;
}

const char* criterion_name(Criterion c) {
  return c == Criterion::Auc ? "auc" : "final";
}

std::optional<Criterion> criterion_from_name(std::string_view name) {
  if (name == "auc") return Criterion::Auc;
  if (name == "final") return Criterion::Final;
  return std::nullopt;
}

std::vector<std::size_t> rank(const std::vector<CellResult>& results,
                              Criterion criterion) {
  if (results.empty()) throw std::invalid_argument("rank: empty results");
  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto value = [&](std::size_t i) {
    return criterion == Criterion::Auc ? results[i].mean_auc
                                       : results[i].mean_final;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = value(a), vb = value(b);
    if (va != vb) return va < vb;
    return results[a].cell.id() < results[b].cell.id();
  });
  return order;
}

std::vector<SensitivityRow> sensitivity_table(
    const std::vector<CellResult>& results, Criterion criterion) {
  std::map<std::string, std::pair<int, int>> per_algo;  // name -> (cells, failed)
  for (const CellResult& r : results) {
    auto& [total, failed] = per_algo[algorithm_name(r.cell.algorithm)];
    ++total;
    if (r.diverged_fraction > 0.0) ++failed;
  }
  std::vector<SensitivityRow> rows;
  rows.reserve(results.size());
  for (const CellResult& r : results) {
    SensitivityRow row;
    row.cell = r.cell;
    row.value = criterion == Criterion::Auc ? r.mean_auc : r.mean_final;
    row.diverged_fraction = r.diverged_fraction;
    const auto& [total, failed] = per_algo[algorithm_name(r.cell.algorithm)];
    row.algorithm_failed_pct =
        100.0 * static_cast<double>(failed) / static_cast<double>(total);
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* series_mode_name(SeriesMode m) {
  switch (m) {
    case SeriesMode::None: return "none";
    case SeriesMode::Mean: return "mean";
    case SeriesMode::Full: return "full";
  }
  return "?";
}

std::optional<SeriesMode> series_mode_from_name(std::string_view name) {
  if (name == "none") return SeriesMode::None;
  if (name == "mean") return SeriesMode::Mean;
  if (name == "full") return SeriesMode::Full;
  return std::nullopt;
}

namespace {

constexpr const char* kResultsHeader =
    "problem,algorithm,lambda,alpha,alpha_h,beta,zeta,rho_placement,run,step,"
    "error,diverged";

std::string cell_prefix(const CellSpec& c) {
  std::string s = c.problem;
  s += ',';
  s += algorithm_name(c.algorithm);
  s += ',' + format_double(c.config.lambda);
  s += ',' + format_double(c.config.alpha);
  s += ',' + format_double(c.config.alpha_h);
  s += ',' + format_double(c.config.beta);
  s += ',' + format_double(c.config.zeta);
  s += ',';
  s += rho_placement_name(c.config.rho_placement);
  return s;
}

}  // namespace

void write_results_csv(const std::string& path,
                       const std::vector<CellResult>& results,
                       SeriesMode mode) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << kResultsHeader << '\n';
  if (mode == SeriesMode::None) return;
  for (const CellResult& cr : results) {
    const std::string prefix = cell_prefix(cr.cell);
    if (mode == SeriesMode::Full) {
      for (const RunResult& r : cr.runs) {
        for (std::size_t k = 0; k < r.steps.size(); ++k) {
          out << prefix << ',' << r.run << ',' << r.steps[k] << ','
              << format_double(r.errors[k]) << ',' << (r.diverged ? 1 : 0)
              << '\n';
        }
      }
      continue;
    }
    // Mean: average the runs still alive at each evaluation point.
    std::size_t longest = 0;
    for (const RunResult& r : cr.runs) {
      longest = std::max(longest, r.steps.size());
    }
    for (std::size_t k = 0; k < longest; ++k) {
      double acc = 0.0;
      int alive = 0;
      long step = 0;
      for (const RunResult& r : cr.runs) {
        if (r.steps.size() > k) {
          acc += r.errors[k];
          step = r.steps[k];
          ++alive;
        }
      }
      out << prefix << ",-1," << step << ','
          << format_double(acc / static_cast<double>(alive)) << ','
          << (static_cast<std::size_t>(alive) < cr.runs.size() ? 1 : 0)
          << '\n';
    }
  }
}

void write_summary_json(const std::string& path, const std::string& problem,
                        const SweepOptions& opts,
                        const std::vector<CellResult>& results) {
  json j;
  j["schema"] = "offtd-summary-v1";
  j["problem"] = problem;
  j["runs"] = opts.runs;
  j["steps"] = opts.steps;
  j["eval_every"] = opts.eval_every;
  j["base_seed"] = opts.base_seed;
  j["cutoff_mult"] = opts.cutoff_mult;
  json cells = json::array();
  for (const CellResult& r : results) {
    json c;
    c["id"] = r.cell.id();
    c["algorithm"] = algorithm_name(r.cell.algorithm);
    c["lambda"] = r.cell.config.lambda;
    c["alpha"] = r.cell.config.alpha;
    c["alpha_h"] = r.cell.config.alpha_h;
    c["beta"] = r.cell.config.beta;
    c["zeta"] = r.cell.config.zeta;
    c["rho_placement"] = rho_placement_name(r.cell.config.rho_placement);
    c["auc"] = r.mean_auc;
    c["final"] = r.mean_final;
    c["diverged_fraction"] = r.diverged_fraction;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

SummaryFile read_summary_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j = json::parse(in);
  if (j.value("schema", "") != "offtd-summary-v1") {
    throw std::runtime_error("'" + path + "' is not a sweep summary file");
  }
  SummaryFile out;
  out.problem = j.at("problem").get<std::string>();
  out.opts.runs = j.at("runs").get<int>();
  out.opts.steps = j.at("steps").get<long>();
  out.opts.eval_every = j.at("eval_every").get<int>();
  out.opts.base_seed = j.at("base_seed").get<std::uint64_t>();
  out.opts.cutoff_mult = j.at("cutoff_mult").get<double>();
  for (const json& c : j.at("cells")) {
    CellResult r;
    r.cell.problem = out.problem;
    const std::string alg = c.at("algorithm").get<std::string>();
    const auto a = algorithm_from_name(alg);
    if (!a) throw std::runtime_error("summary: unknown algorithm '" + alg + "'");
    r.cell.algorithm = *a;
    r.cell.config.lambda = c.at("lambda").get<double>();
    r.cell.config.alpha = c.at("alpha").get<double>();
    r.cell.config.alpha_h = c.at("alpha_h").get<double>();
    r.cell.config.beta = c.at("beta").get<double>();
    r.cell.config.zeta = c.at("zeta").get<double>();
    const std::string pl = c.at("rho_placement").get<std::string>();
    const auto p = rho_placement_from_name(pl);
    if (!p) throw std::runtime_error("summary: bad rho_placement '" + pl + "'");
    r.cell.config.rho_placement = *p;
    r.mean_auc = c.at("auc").get<double>();
    r.mean_final = c.at("final").get<double>();
    r.diverged_fraction = c.at("diverged_fraction").get<double>();
    out.cells.push_back(std::move(r));
  }
  return out;
}

std::map<std::string, std::vector<SeriesRow>> read_results_csv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw std::runtime_error("'" + path + "' is not a results CSV");
  }
  std::map<std::string, std::vector<SeriesRow>> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    if (f.size() != 12) throw std::runtime_error("results CSV: bad row '" + line + "'");
    CellSpec cell;
    cell.problem = f[0];
    const auto a = algorithm_from_name(f[1]);
    if (!a) throw std::runtime_error("results CSV: unknown algorithm '" + f[1] + "'");
    cell.algorithm = *a;
    cell.config.lambda = std::stod(f[2]);
    cell.config.alpha = std::stod(f[3]);
    cell.config.alpha_h = std::stod(f[4]);
    cell.config.beta = std::stod(f[5]);
    cell.config.zeta = std::stod(f[6]);
    const auto p = rho_placement_from_name(f[7]);
    if (!p) throw std::runtime_error("results CSV: bad rho_placement '" + f[7] + "'");
    cell.config.rho_placement = *p;
    SeriesRow row;
    row.run = std::stoi(f[8]);
    row.step = std::stol(f[9]);
    row.error = std::stod(f[10]);
    row.diverged = std::stoi(f[11]);
    out[cell.id()].push_back(row);
  }
  return out;
}

}  // namespace offtd
