#include "config.hpp"

#include <cstdlib>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace offtd {

namespace {

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config key '" + key + "': " + why);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    bad_key(key, "expected a number, got '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return n;
  } catch (const std::exception&) {
    bad_key(key, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(n);
  } catch (const std::exception&) {
    bad_key(key, "expected an unsigned integer, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  bad_key(key, "expected true|false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t end = v.find(',', start);
    if (end == std::string::npos) end = v.size();
    const std::string item = v.substr(start, end - start);
    if (item.empty()) bad_key(key, "empty list element");
    out.push_back(parse_double(key, item));
    start = end + 1;
  }
  if (out.empty()) bad_key(key, "empty list");
  return out;
}

std::vector<std::string> parse_names(const std::string& v) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t end = v.find(',', start);
    if (end == std::string::npos) end = v.size();
    const std::string item = v.substr(start, end - start);
    if (!item.empty()) out.push_back(item);
    start = end + 1;
  }
  return out;
}

}  // namespace

LearnerConfig Options::learner_config() const {
  LearnerConfig cfg;
  cfg.alpha = alpha;
  cfg.alpha_h = alpha_h;
  cfg.lambda = lambda;
  cfg.beta = beta;
  cfg.zeta = zeta;
  cfg.cbar = cbar;
  cfg.rho_placement = rho_placement;
  cfg.trace_form = trace_form;
  cfg.htd_variant = htd_variant;
  return cfg;
}

SweepOptions Options::sweep_options() const {
  SweepOptions so;
  so.runs = runs;
  so.steps = steps;
  so.eval_every = eval_every;
  so.base_seed = seed;
  so.cutoff_mult = cutoff_mult;
  so.workers = resolve_workers(*this);
  return so;
}

GridOverrides Options::grid_overrides() const {
  GridOverrides go;
  go.alphas = alphas;
  go.alpha_hs = alpha_hs;
  go.lambdas = lambdas;
  go.betas = betas;
  go.zetas = zetas;
  go.rho_placement = rho_placement;
  go.trace_form = trace_form;
  go.htd_variant = htd_variant;
  go.cbar = cbar;
  return go;
}

Options options_from_map(const std::map<std::string, std::string>& kv) {
  Options o;
  // paper_scale adjusts the execution defaults; explicit keys still win.
  if (auto it = kv.find("paper_scale"); it != kv.end()) {
    o.paper_scale = parse_bool("paper_scale", it->second);
    if (o.paper_scale) {
      o.runs = 50;
      o.eval_every = 1;
    }
  }
  for (const auto& [key, value] : kv) {
    if (key == "paper_scale") continue;  // handled above
    if (key == "problem") o.problem = value;
    else if (key == "algorithm") o.algorithm = value;
    else if (key == "algorithms") o.algorithms = parse_names(value);
    else if (key == "alpha") o.alpha = parse_double(key, value);
    else if (key == "alpha_h") o.alpha_h = parse_double(key, value);
    else if (key == "lambda") o.lambda = parse_double(key, value);
    else if (key == "beta") o.beta = parse_double(key, value);
    else if (key == "zeta") o.zeta = parse_double(key, value);
    else if (key == "cbar") o.cbar = parse_double(key, value);
    else if (key == "rho_placement") {
      if (auto p = rho_placement_from_name(value)) o.rho_placement = *p;
      else bad_key(key, "expected full|partial");
    } else if (key == "trace_form") {
      if (auto f = trace_form_from_name(value)) o.trace_form = *f;
      else bad_key(key, "expected inside|outside");
    } else if (key == "htd_variant") {
      if (auto v = htd_variant_from_name(value)) o.htd_variant = *v;
      else bad_key(key, "expected main|appendix");
    } else if (key == "runs") {
      o.runs = static_cast<int>(parse_long(key, value));
      if (o.runs <= 0) bad_key(key, "must be positive");
    } else if (key == "steps") {
      o.steps = parse_long(key, value);
      if (o.steps < 0) bad_key(key, "must be nonnegative");
    } else if (key == "eval_every") {
      o.eval_every = static_cast<int>(parse_long(key, value));
      if (o.eval_every <= 0) bad_key(key, "must be positive");
    } else if (key == "seed") o.seed = parse_u64(key, value);
    else if (key == "cutoff_mult") {
      o.cutoff_mult = parse_double(key, value);
      if (!(o.cutoff_mult > 0)) bad_key(key, "must be positive");
    } else if (key == "workers") {
      o.workers = static_cast<int>(parse_long(key, value));
      if (o.workers < 0) bad_key(key, "must be nonnegative");
    } else if (key == "out") o.out = value;
    else if (key == "series") {
      if (auto m = series_mode_from_name(value)) o.series = *m;
      else bad_key(key, "expected none|mean|full");
    } else if (key == "input") o.input = value;
    else if (key == "map_file") o.map_file = value;
    else if (key == "sampled_db") {
      o.sampled_db = parse_long(key, value);
      if (o.sampled_db < 0) bad_key(key, "must be nonnegative");
    } else if (key == "criterion") {
      if (auto c = criterion_from_name(value)) o.criterion = *c;
      else bad_key(key, "expected auc|final");
    } else if (key == "kind") {
      if (value != "learning_curve" && value != "stepsize" &&
          value != "sensitivity") {
        bad_key(key, "expected learning_curve|stepsize|sensitivity");
      }
      o.kind = value;
    } else if (key == "alphas") o.alphas = parse_list(key, value);
    else if (key == "alpha_hs") o.alpha_hs = parse_list(key, value);
    else if (key == "lambdas") o.lambdas = parse_list(key, value);
    else if (key == "betas") o.betas = parse_list(key, value);
    else if (key == "zetas") o.zetas = parse_list(key, value);
    else bad_key(key, "unknown key");
  }
  return o;
}

Options options_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config JSON: not an object");
  std::map<std::string, std::string> kv;
  for (const auto& [key, value] : j.items()) {
    if (value.is_string()) {
      kv[key] = value.get<std::string>();
    } else if (value.is_boolean()) {
      kv[key] = value.get<bool>() ? "true" : "false";
    } else if (value.is_number()) {
      kv[key] = value.dump();
    } else if (value.is_array()) {
      // Arrays become the comma-separated text form the map parser expects.
      std::string joined;
      for (const auto& item : value) {
        if (!joined.empty()) joined += ',';
        joined += item.is_string() ? item.get<std::string>() : item.dump();
      }
      kv[key] = joined;
    } else {
      throw std::invalid_argument("config JSON: unsupported value for '" + key + "'");
    }
  }
  return options_from_map(kv);
}

int resolve_workers(const Options& opts) {
  if (opts.workers > 0) return opts.workers;
  if (const char* env = std::getenv("OFFTD_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
      // fall through to hardware default
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace offtd
