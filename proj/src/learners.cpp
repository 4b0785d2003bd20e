#include "learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace offtd {

namespace {

using json = nlohmann::json;

// y += c * z (dense, ascending index)
void axpy_dense(std::vector<double>& y, double c, const std::vector<double>& z) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += c * z[i];
}

double dense_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

// Trace recursion shared by every rho-trace method. `coef` scales the added
// feature vector (1 for plain traces, M_t for emphatic, the episode product
// for alternative-life).
//   rho-inside:  z <- rho * (gcur * lambda * z + coef * x)
//   rho-outside: z <- last_rho * gcur * lambda * z + coef * x
void update_rho_trace(const LearnerConfig& cfg, TraceState& tr,
                      const Transition& t, double rho, double gcur,
                      double coef) {
  if (cfg.trace_form == TraceForm::RhoInside) {
    scale(tr.z, rho * gcur * cfg.lambda);
    axpy(tr.z, rho * coef, *t.x);
  } else {
    scale(tr.z, tr.last_rho * gcur * cfg.lambda);
    axpy(tr.z, coef, *t.x);
  }
}

// Scalar multiplying the stored trace in the sampled TD term. With the
// rho-inside trace the trace already carries rho_t; with the rho-outside
// trace the full form multiplies by rho_t here, and the partial form
// substitutes delta' for rho*delta.
double pair_coeff(const LearnerConfig& cfg, double rho, double delta,
                  double delta_prime) {
  if (cfg.rho_placement == RhoPlacement::PartialDelta) return delta_prime;
  return cfg.trace_form == TraceForm::RhoInside ? delta : rho * delta;
}

// h . z^rho regardless of the stored trace form.
double zrho_dot(const LearnerConfig& cfg, double rho,
                const std::vector<double>& h, const std::vector<double>& z) {
  double d = dense_dot(h, z);
  return cfg.trace_form == TraceForm::RhoInside ? d : rho * d;
}

void epilogue(TraceState& tr, const Transition& t, double rho) {
  tr.last_rho = rho;
  tr.last_pi = t.pi_prob;
  tr.last_b = t.b_prob;
  tr.last_gamma = t.gamma_next;
}

struct DeltaParts {
  double wx, wxn, delta, delta_prime;
};

DeltaParts deltas(const std::vector<double>& w, const Transition& t,
                  double rho) {
  DeltaParts d;
  d.wx = dot(w, *t.x);
  d.wxn = dot(w, *t.x_next);
  d.delta = t.reward + t.gamma_next * d.wxn - d.wx;
  d.delta_prime = rho * (t.reward + t.gamma_next * d.wxn) - d.wx;
  return d;
}

void gtd_family_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                     const Transition& t, bool gtd2_form) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  update_rho_trace(cfg, tr, t, rho, gcur, 1.0);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  const double hx = dot(ws.h, *t.x);
  const double hz = zrho_dot(cfg, rho, ws.h, tr.z);

  if (gtd2_form) {
    axpy(ws.w, cfg.alpha * hx, *t.x);
  } else {
    axpy_dense(ws.w, cfg.alpha * p, tr.z);
  }
  axpy(ws.w, -cfg.alpha * t.gamma_next * (1.0 - cfg.lambda) * hz, *t.x_next);

  axpy_dense(ws.h, cfg.alpha_h * p, tr.z);
  axpy(ws.h, -cfg.alpha_h * hx, *t.x);
  epilogue(tr, t, rho);
}

void proximal_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                   const Transition& t, Scratch& sc, bool gtd2_form) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  update_rho_trace(cfg, tr, t, rho, gcur, 1.0);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  const double hx = dot(ws.h, *t.x);
  const double hz = zrho_dot(cfg, rho, ws.h, tr.z);
  const double corr = cfg.alpha * t.gamma_next * (1.0 - cfg.lambda);

  // Extrapolation point (w_{t+1/2}, h_{t+1/2}) from the current gradients.
  sc.w_half = ws.w;
  sc.h_half = ws.h;
  if (gtd2_form) {
    axpy(sc.w_half, cfg.alpha * hx, *t.x);
  } else {
    axpy_dense(sc.w_half, cfg.alpha * p, tr.z);
  }
  axpy(sc.w_half, -corr * hz, *t.x_next);
  axpy_dense(sc.h_half, cfg.alpha_h * p, tr.z);
  axpy(sc.h_half, -cfg.alpha_h * hx, *t.x);

  // Real step from (w_t, h_t) using gradients evaluated at the midpoint.
  const DeltaParts dh = deltas(sc.w_half, t, rho);
  const double p_half = pair_coeff(cfg, rho, dh.delta, dh.delta_prime);
  const double hx_half = dot(sc.h_half, *t.x);
  const double hz_half = zrho_dot(cfg, rho, sc.h_half, tr.z);

  if (gtd2_form) {
    axpy(ws.w, cfg.alpha * hx_half, *t.x);
  } else {
    axpy_dense(ws.w, cfg.alpha * p_half, tr.z);
  }
  axpy(ws.w, -corr * hz_half, *t.x_next);
  axpy_dense(ws.h, cfg.alpha_h * p_half, tr.z);
  axpy(ws.h, -cfg.alpha_h * hx_half, *t.x);
  epilogue(tr, t, rho);
}

// Trace decay for the action-dependent family (TreeBackup / VTrace / Abtd):
// z <- gcur * decay * z + x, update w += alpha * q * z with q = rho*delta
// (full) or delta' (partial). These traces never carry rho_t, so TraceForm
// does not apply.
void action_dependent_step(const LearnerConfig& cfg, WeightSet& ws,
                           TraceState& tr, const Transition& t, double decay) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  scale(tr.z, gcur * decay);
  axpy(tr.z, 1.0, *t.x);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double q = cfg.rho_placement == RhoPlacement::PartialDelta
                       ? d.delta_prime
                       : rho * d.delta;
  axpy_dense(ws.w, cfg.alpha * q, tr.z);
  epilogue(tr, t, rho);
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Td: return "td";
    case Algorithm::AltTd: return "alttd";
    case Algorithm::Gtd: return "gtd";
    case Algorithm::Gtd2: return "gtd2";
    case Algorithm::Htd: return "htd";
    case Algorithm::Pgtd: return "pgtd";
    case Algorithm::Pgtd2: return "pgtd2";
    case Algorithm::Etd: return "etd";
    case Algorithm::EtdBeta: return "etdb";
    case Algorithm::TreeBackup: return "tb";
    case Algorithm::VTrace: return "vtrace";
    case Algorithm::Abtd: return "abtd";
  }
  return "?";
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {
      Algorithm::Td,   Algorithm::AltTd, Algorithm::Gtd,       Algorithm::Gtd2,
      Algorithm::Htd,  Algorithm::Pgtd,  Algorithm::Pgtd2,     Algorithm::Etd,
      Algorithm::EtdBeta, Algorithm::TreeBackup, Algorithm::VTrace,
      Algorithm::Abtd};
  return all;
}

std::optional<Algorithm> algorithm_from_name(std::string_view name) {
  for (Algorithm a : all_algorithms()) {
    if (name == algorithm_name(a)) return a;
  }
  return std::nullopt;
}

bool uses_secondary_weights(Algorithm a) {
  switch (a) {
    case Algorithm::Gtd:
    case Algorithm::Gtd2:
    case Algorithm::Htd:
    case Algorithm::Pgtd:
    case Algorithm::Pgtd2:
      return true;
    default:
      return false;
  }
}

bool is_episodic_only(Algorithm a) { return a == Algorithm::AltTd; }

bool has_rho_trace(Algorithm a) {
  switch (a) {
    case Algorithm::TreeBackup:
    case Algorithm::VTrace:
    case Algorithm::Abtd:
      return false;
    default:
      return true;
  }
}

double abtd_psi(const LearnerConfig& cfg) {
  return 2.0 * cfg.zeta * cfg.abtd_psi0 +
         std::max(0.0, 2.0 * cfg.zeta - 1.0) *
             (cfg.abtd_psi_max - 2.0 * cfg.abtd_psi0);
}

double td_error(const std::vector<double>& w, const Transition& t) {
  return t.reward + t.gamma_next * dot(w, *t.x_next) - dot(w, *t.x);
}

void offtd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                const Transition& t) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  update_rho_trace(cfg, tr, t, rho, gcur, 1.0);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  axpy_dense(ws.w, cfg.alpha * p, tr.z);
  epilogue(tr, t, rho);
}

void altlife_td_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                     const Transition& t) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  // A zero arrival discount marks an episode start (including t = 0): the
  // prior-correction product restarts and the trace is reinitialized.
  if (gcur == 0.0) {
    tr.episode_rho_product = 1.0;
    std::fill(tr.z.begin(), tr.z.end(), 0.0);
  }
  update_rho_trace(cfg, tr, t, rho, gcur, tr.episode_rho_product);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  axpy_dense(ws.w, cfg.alpha * p, tr.z);
  tr.episode_rho_product *= rho;
  epilogue(tr, t, rho);
}

void gtd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
              const Transition& t) {
  gtd_family_step(cfg, ws, tr, t, /*gtd2_form=*/false);
}

void gtd2_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
               const Transition& t) {
  gtd_family_step(cfg, ws, tr, t, /*gtd2_form=*/true);
}

void htd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
              const Transition& t) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  update_rho_trace(cfg, tr, t, rho, gcur, 1.0);
  scale(tr.z_b, gcur * cfg.lambda);
  axpy(tr.z_b, 1.0, *t.x);

  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  const double hz_b = dense_dot(ws.h, tr.z_b);
  const double diff = zrho_dot(cfg, rho, ws.h, tr.z) - hz_b;  // (z^rho - z_b).h
  // MainText subtracts the correction along (x - gamma x'); Appendix adds it.
  const double s = cfg.htd_variant == HtdVariant::MainText ? -1.0 : 1.0;

  axpy_dense(ws.w, cfg.alpha * p, tr.z);
  axpy(ws.w, cfg.alpha * s * diff, *t.x);
  axpy(ws.w, -cfg.alpha * s * diff * t.gamma_next, *t.x_next);

  axpy_dense(ws.h, cfg.alpha_h * p, tr.z);
  axpy(ws.h, -cfg.alpha_h * hz_b, *t.x);
  axpy(ws.h, cfg.alpha_h * hz_b * t.gamma_next, *t.x_next);
  epilogue(tr, t, rho);
}

void pgtd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
               const Transition& t, Scratch& sc) {
  proximal_step(cfg, ws, tr, t, sc, /*gtd2_form=*/false);
}

void pgtd2_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                const Transition& t, Scratch& sc) {
  proximal_step(cfg, ws, tr, t, sc, /*gtd2_form=*/true);
}

void etd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
              const Transition& t, bool constant_beta) {
  const double rho = importance_ratio(t);
  const double gcur = tr.last_gamma;
  const double beta_eff = constant_beta ? cfg.beta : gcur;
  tr.followon = tr.last_rho * beta_eff * tr.followon + t.interest;
  tr.emphasis = cfg.lambda * t.interest + (1.0 - cfg.lambda) * tr.followon;
  update_rho_trace(cfg, tr, t, rho, gcur, tr.emphasis);
  const DeltaParts d = deltas(ws.w, t, rho);
  const double p = pair_coeff(cfg, rho, d.delta, d.delta_prime);
  axpy_dense(ws.w, cfg.alpha * p, tr.z);
  epilogue(tr, t, rho);
}

void tree_backup_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                      const Transition& t) {
  action_dependent_step(cfg, ws, tr, t, cfg.lambda * tr.last_pi);
}

void vtrace_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
                 const Transition& t) {
  action_dependent_step(cfg, ws, tr, t,
                        cfg.lambda * std::min(cfg.cbar, tr.last_rho));
}

void abtd_step(const LearnerConfig& cfg, WeightSet& ws, TraceState& tr,
               const Transition& t) {
  action_dependent_step(cfg, ws, tr, t, tr.last_nu * tr.last_pi);
  tr.last_nu =
      std::min(abtd_psi(cfg), 1.0 / std::max(t.b_prob, t.pi_prob));
}

void validate_learner_config(Algorithm a, const LearnerConfig& cfg) {
  auto fail = [](const std::string& msg) {
    throw std::invalid_argument("learner config: " + msg);
  };
  if (!(cfg.alpha > 0.0)) fail("alpha must be positive");
  if (uses_secondary_weights(a) && !(cfg.alpha_h >= 0.0)) {
    fail("alpha_h must be nonnegative");
  }
  if (cfg.lambda < 0.0 || cfg.lambda > 1.0) fail("lambda must be in [0,1]");
  if (cfg.beta < 0.0 || cfg.beta > 1.0) fail("beta must be in [0,1]");
  if (cfg.zeta < 0.0 || cfg.zeta > 1.0) fail("zeta must be in [0,1]");
  if (!(cfg.cbar > 0.0)) fail("cbar must be positive");
  if (a == Algorithm::Abtd) {
    if (!(cfg.abtd_psi0 > 0.0) || !(cfg.abtd_psi_max >= cfg.abtd_psi0)) {
      fail("ABTD requires 0 < abtd_psi0 <= abtd_psi_max");
    }
  }
  if (cfg.rho_placement == RhoPlacement::PartialDelta && has_rho_trace(a) &&
      cfg.trace_form != TraceForm::RhoOutside) {
    fail("partial-delta placement requires the rho-outside trace form");
  }
}

Learner::Learner(Algorithm algo, const LearnerConfig& cfg, int dim)
    : algo_(algo), cfg_(cfg), dim_(dim) {
  if (dim <= 0) throw std::invalid_argument("learner dim must be positive");
  validate_learner_config(algo, cfg);
  ws_.w.assign(static_cast<std::size_t>(dim), 0.0);
  if (uses_secondary_weights(algo)) {
    ws_.h.assign(static_cast<std::size_t>(dim), 0.0);
  }
  tr_.z.assign(static_cast<std::size_t>(dim), 0.0);
  if (algo == Algorithm::Htd) {
    tr_.z_b.assign(static_cast<std::size_t>(dim), 0.0);
  }
}

void Learner::step(const Transition& t) {
  if (diverged_) return;
  // One cheap probe catches runaway weights: once any weight is non-finite
  // the TD error is too (features are never all-zero on these problems).
  const double probe = td_error(ws_.w, t);
  if (!std::isfinite(probe) || !std::isfinite(tr_.followon)) {
    diverged_ = true;
    return;
  }
  switch (algo_) {
    case Algorithm::Td: offtd_step(cfg_, ws_, tr_, t); break;
    case Algorithm::AltTd: altlife_td_step(cfg_, ws_, tr_, t); break;
    case Algorithm::Gtd: gtd_step(cfg_, ws_, tr_, t); break;
    case Algorithm::Gtd2: gtd2_step(cfg_, ws_, tr_, t); break;
    case Algorithm::Htd: htd_step(cfg_, ws_, tr_, t); break;
    case Algorithm::Pgtd: pgtd_step(cfg_, ws_, tr_, t, scratch_); break;
    case Algorithm::Pgtd2: pgtd2_step(cfg_, ws_, tr_, t, scratch_); break;
    case Algorithm::Etd: etd_step(cfg_, ws_, tr_, t, false); break;
    case Algorithm::EtdBeta: etd_step(cfg_, ws_, tr_, t, true); break;
    case Algorithm::TreeBackup: tree_backup_step(cfg_, ws_, tr_, t); break;
    case Algorithm::VTrace: vtrace_step(cfg_, ws_, tr_, t); break;
    case Algorithm::Abtd: abtd_step(cfg_, ws_, tr_, t); break;
  }
  ++steps_;
}

const char* rho_placement_name(RhoPlacement p) {
  return p == RhoPlacement::FullDelta ? "full" : "partial";
}
const char* trace_form_name(TraceForm f) {
  return f == TraceForm::RhoInside ? "inside" : "outside";
}
const char* htd_variant_name(HtdVariant v) {
  return v == HtdVariant::MainText ? "main" : "appendix";
}

std::optional<RhoPlacement> rho_placement_from_name(std::string_view name) {
  if (name == "full") return RhoPlacement::FullDelta;
  if (name == "partial") return RhoPlacement::PartialDelta;
  return std::nullopt;
}
std::optional<TraceForm> trace_form_from_name(std::string_view name) {
  if (name == "inside") return TraceForm::RhoInside;
  if (name == "outside") return TraceForm::RhoOutside;
  return std::nullopt;
}
std::optional<HtdVariant> htd_variant_from_name(std::string_view name) {
  if (name == "main") return HtdVariant::MainText;
  if (name == "appendix") return HtdVariant::Appendix;
  return std::nullopt;
}

namespace {

json config_to_jobj(Algorithm a, const LearnerConfig& cfg) {
  json j;
  j["algorithm"] = algorithm_name(a);
  j["alpha"] = cfg.alpha;
  j["alpha_h"] = cfg.alpha_h;
  j["lambda"] = cfg.lambda;
  j["beta"] = cfg.beta;
  j["zeta"] = cfg.zeta;
  j["cbar"] = cfg.cbar;
  j["rho_placement"] = rho_placement_name(cfg.rho_placement);
  j["trace_form"] = trace_form_name(cfg.trace_form);
  j["htd_variant"] = htd_variant_name(cfg.htd_variant);
  j["abtd_psi0"] = cfg.abtd_psi0;
  j["abtd_psi_max"] = cfg.abtd_psi_max;
  return j;
}

std::pair<Algorithm, LearnerConfig> config_from_jobj(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("learner config: not a JSON object");
  LearnerConfig cfg;
  Algorithm algo = Algorithm::Td;
  bool have_algo = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "algorithm") {
      auto a = algorithm_from_name(value.get<std::string>());
      if (!a) throw std::invalid_argument("learner config: unknown algorithm '" +
                                          value.get<std::string>() + "'");
      algo = *a;
      have_algo = true;
    } else if (key == "alpha") cfg.alpha = value.get<double>();
    else if (key == "alpha_h") cfg.alpha_h = value.get<double>();
    else if (key == "lambda") cfg.lambda = value.get<double>();
    else if (key == "beta") cfg.beta = value.get<double>();
    else if (key == "zeta") cfg.zeta = value.get<double>();
    else if (key == "cbar") cfg.cbar = value.get<double>();
    else if (key == "abtd_psi0") cfg.abtd_psi0 = value.get<double>();
    else if (key == "abtd_psi_max") cfg.abtd_psi_max = value.get<double>();
    else if (key == "rho_placement") {
      std::string v = value.get<std::string>();
      if (v == "full") cfg.rho_placement = RhoPlacement::FullDelta;
      else if (v == "partial") cfg.rho_placement = RhoPlacement::PartialDelta;
      else throw std::invalid_argument("learner config: rho_placement must be full|partial");
    } else if (key == "trace_form") {
      std::string v = value.get<std::string>();
      if (v == "inside") cfg.trace_form = TraceForm::RhoInside;
      else if (v == "outside") cfg.trace_form = TraceForm::RhoOutside;
      else throw std::invalid_argument("learner config: trace_form must be inside|outside");
    } else if (key == "htd_variant") {
      std::string v = value.get<std::string>();
      if (v == "main") cfg.htd_variant = HtdVariant::MainText;
      else if (v == "appendix") cfg.htd_variant = HtdVariant::Appendix;
      else throw std::invalid_argument("learner config: htd_variant must be main|appendix");
    } else {
      throw std::invalid_argument("learner config: unknown key '" + key + "'");
    }
  }
  if (!have_algo) throw std::invalid_argument("learner config: missing 'algorithm'");
  return {algo, cfg};
}

}  // namespace

std::string learner_config_to_json(Algorithm a, const LearnerConfig& cfg) {
  return config_to_jobj(a, cfg).dump();
}

namespace {
json parse_or_invalid(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string(what) + ": " + e.what());
  }
}
}  // namespace

std::pair<Algorithm, LearnerConfig> learner_config_from_json(
    const std::string& text) {
  return config_from_jobj(parse_or_invalid(text, "learner config"));
}

std::string Learner::serialize() const {
  json j;
  j["config"] = config_to_jobj(algo_, cfg_);
  j["dim"] = dim_;
  j["steps"] = steps_;
  j["diverged"] = diverged_;
  j["w"] = ws_.w;
  j["h"] = ws_.h;
  json tr;
  tr["z"] = tr_.z;
  tr["z_b"] = tr_.z_b;
  tr["followon"] = tr_.followon;
  tr["emphasis"] = tr_.emphasis;
  tr["last_rho"] = tr_.last_rho;
  tr["last_pi"] = tr_.last_pi;
  tr["last_b"] = tr_.last_b;
  tr["last_nu"] = tr_.last_nu;
  tr["last_gamma"] = tr_.last_gamma;
  tr["episode_rho_product"] = tr_.episode_rho_product;
  j["trace"] = tr;
  return j.dump();
}

Learner Learner::deserialize(const std::string& snapshot_json) {
  json j = parse_or_invalid(snapshot_json, "learner snapshot");
  auto [algo, cfg] = config_from_jobj(j.at("config"));
  Learner out(algo, cfg, j.at("dim").get<int>());
  out.steps_ = j.at("steps").get<long>();
  out.diverged_ = j.at("diverged").get<bool>();
  auto w = j.at("w").get<std::vector<double>>();
  auto h = j.at("h").get<std::vector<double>>();
  if (static_cast<int>(w.size()) != out.dim_ ||
      (uses_secondary_weights(algo) &&
       static_cast<int>(h.size()) != out.dim_)) {
    throw std::invalid_argument("learner snapshot: weight size mismatch");
  }
  out.ws_.w = std::move(w);
  out.ws_.h = std::move(h);
  const json& tr = j.at("trace");
  out.tr_.z = tr.at("z").get<std::vector<double>>();
  out.tr_.z_b = tr.at("z_b").get<std::vector<double>>();
  if (static_cast<int>(out.tr_.z.size()) != out.dim_) {
    throw std::invalid_argument("learner snapshot: trace size mismatch");
  }
  out.tr_.followon = tr.at("followon").get<double>();
  out.tr_.emphasis = tr.at("emphasis").get<double>();
  out.tr_.last_rho = tr.at("last_rho").get<double>();
  out.tr_.last_pi = tr.at("last_pi").get<double>();
  out.tr_.last_b = tr.at("last_b").get<double>();
  out.tr_.last_nu = tr.at("last_nu").get<double>();
  out.tr_.last_gamma = tr.at("last_gamma").get<double>();
  out.tr_.episode_rho_product = tr.at("episode_rho_product").get<double>();
  return out;
}

}  // namespace offtd
