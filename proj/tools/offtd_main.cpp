// offtd command-line harness.  Thin shell over the C API: flags and optional
// key=value config files are merged into one JSON config, handed to
// otd_command(), and the returned JSON summary is printed.  Flags are named
// exactly like the config keys (docs/formats.md); a flag overrides the same
// key from --config.
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <offtd/capi.h>

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// key=value lines; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
    }
    kv[key] = value;
  }
  return kv;
}

// One subcommand's flags, kept as strings so the config layer does all
// validation in one place.
struct SubCommand {
  CLI::App* app = nullptr;
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  bool paper_scale = false;
  CLI::Option* paper_scale_opt = nullptr;

  void add_key(const std::string& key, const std::string& desc) {
    options.emplace_back(key, app->add_option("--" + key, values[key], desc));
  }

  std::map<std::string, std::string> merged() const {
    std::map<std::string, std::string> kv;
    if (!config_file.empty()) kv = parse_config_file(config_file);
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) kv[key] = values.at(key);
    }
    if (paper_scale_opt && paper_scale_opt->count() > 0) {
      kv["paper_scale"] = paper_scale ? "true" : "false";
    }
    return kv;
  }
};

void add_common(SubCommand& s) {
  s.app->add_option("--config", s.config_file,
                    "key=value config file ('#' comments); flags override");
  s.add_key("out", "output directory (default: results)");
}

void add_problem_keys(SubCommand& s) {
  s.add_key("problem", "collision | fourrooms | fourrooms_hv");
  s.add_key("map_file", "gridworld map file (default: built-in layout)");
  s.add_key("sampled_db",
            "estimate the state weighting from this many behavior steps "
            "instead of solving for it exactly (0 = exact)");
  s.add_key("seed", "base seed for streams and feature draws");
}

void add_execution_keys(SubCommand& s) {
  s.add_key("runs", "independent runs per parameter setting");
  s.add_key("steps", "behavior steps per run (0 = problem default)");
  s.add_key("eval_every", "record the error every this many steps");
  s.add_key("cutoff_mult",
            "divergence cutoff as a multiple of the zero-weight error");
  s.add_key("workers", "worker threads (0 = OFFTD_WORKERS env or all cores)");
  s.add_key("series", "per-step rows in results.csv: none | mean | full");
  s.paper_scale_opt = s.app->add_flag(
      "--paper_scale", s.paper_scale,
      "paper-scale execution defaults (runs=50, eval_every=1)");
}

void add_learner_keys(SubCommand& s) {
  s.add_key("alpha", "step size");
  s.add_key("alpha_h", "secondary step size (gradient corrections)");
  s.add_key("lambda", "bootstrapping parameter");
  s.add_key("beta", "etdb followon decay");
  s.add_key("zeta", "abtd bootstrap parameter");
  s.add_key("cbar", "vtrace trace clip");
  s.add_key("rho_placement", "TD-error correction: full | partial");
  s.add_key("trace_form", "trace algebra: inside | outside");
  s.add_key("htd_variant", "htd correction sign: main | appendix");
}

void add_grid_keys(SubCommand& s) {
  s.add_key("alphas", "comma-separated step sizes (default: standard grid)");
  s.add_key("alpha_hs", "comma-separated secondary step sizes");
  s.add_key("lambdas", "comma-separated lambda values");
  s.add_key("betas", "comma-separated beta values (etdb)");
  s.add_key("zetas", "comma-separated zeta values (abtd)");
}

int run_sub(const SubCommand& s) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : s.merged()) config[key] = value;
  char* out_json = nullptr;
  const otd_status st =
      otd_command(s.app->get_name().c_str(), config.dump().c_str(), &out_json);
  if (st != OTD_OK) {
    std::fprintf(stderr, "error: %s\n", otd_last_error());
    return static_cast<int>(st);
  }
  std::printf("%s\n", out_json);
  otd_string_free(out_json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"offtd: linear off-policy temporal-difference prediction "
               "harness (twelve learners, three benchmark problems, "
               "least-squares baselines, deterministic parameter sweeps)"};
  app.set_version_flag("--version", std::string(otd_version()));
  app.require_subcommand(1);

  std::vector<SubCommand> subs(5);

  subs[0].app = app.add_subcommand(
      "run", "evaluate one algorithm configuration over several runs");
  add_common(subs[0]);
  add_problem_keys(subs[0]);
  add_execution_keys(subs[0]);
  subs[0].add_key("algorithm", "learner to run (td, gtd, etd, ...)");
  add_learner_keys(subs[0]);

  subs[1].app = app.add_subcommand(
      "sweep", "run the standard parameter grid for one or more algorithms");
  add_common(subs[1]);
  add_problem_keys(subs[1]);
  add_execution_keys(subs[1]);
  subs[1].add_key("algorithm", "single learner to sweep");
  subs[1].add_key("algorithms",
                  "comma-separated learners, or 'all' for every applicable one");
  add_learner_keys(subs[1]);
  add_grid_keys(subs[1]);
  subs[1].add_key("criterion", "headline ranking: auc | final");

  subs[2].app = app.add_subcommand(
      "report", "rank a finished sweep and tabulate parameter sensitivity");
  add_common(subs[2]);
  subs[2].add_key("input", "sweep output directory or summary.json path");
  subs[2].add_key("criterion", "ranking criterion: auc | final");

  subs[3].app = app.add_subcommand(
      "oracle", "write the problem's exact state weighting and true values");
  add_common(subs[3]);
  add_problem_keys(subs[3]);

  subs[4].app = app.add_subcommand(
      "plotdata", "extract plot-ready tables from a finished sweep");
  add_common(subs[4]);
  subs[4].add_key("input", "sweep output directory or summary.json path");
  subs[4].add_key("criterion", "selection criterion: auc | final");
  subs[4].add_key("kind", "learning_curve | stepsize | sensitivity");

  CLI11_PARSE(app, argc, argv);

  for (const SubCommand& s : subs) {
    if (s.app->parsed()) {
      try {
        return run_sub(s);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
      }
    }
  }
  return 0;
}
