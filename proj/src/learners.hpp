#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "types.hpp"

namespace offtd {

// The twelve linear off-policy policy-evaluation methods.
enum class Algorithm {
  Td,         // off-policy TD(lambda), posterior corrections
  AltTd,      // alternative-life TD(lambda), prior corrections (episodic only)
  Gtd,        // GTD(lambda) / TDC
  Gtd2,       // GTD2(lambda)
  Htd,        // hybrid TD(lambda)
  Pgtd,       // proximal GTD(lambda), mirror-prox two-point update
  Pgtd2,      // proximal GTD2(lambda)
  Etd,        // emphatic TD(lambda)
  EtdBeta,    // emphatic TD(lambda, beta) with an independent followon decay
  TreeBackup, // Tree Backup(lambda): trace scaled by target probabilities
  VTrace,     // V-trace(lambda) without the behavior-correction cap (clip c-bar)
  Abtd,       // action-dependent bootstrapping ABTD(zeta)
};

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

// Methods that maintain secondary weights h.
bool uses_secondary_weights(Algorithm a);
// Alternative-life TD needs episode boundaries; it is rejected on continuing
// streams.
bool is_episodic_only(Algorithm a);
// Whether the method's eligibility trace carries the current importance
// ratio (and therefore has distinct rho-inside / rho-outside forms).
bool has_rho_trace(Algorithm a);

// Where the importance ratio corrects the TD error:
//  FullDelta:    the sampled term is rho_t * delta_t (with the rho-outside
//                trace), identically delta_t * z^rho (rho-inside trace).
//  PartialDelta: the bootstrap target is corrected but the subtracted
//                prediction is not: delta' = rho*(R + gamma*w.x') - w.x,
//                paired with the rho-outside trace. Equal to the full form
//                in expectation only.
enum class RhoPlacement { FullDelta, PartialDelta };

// Algebraic form of the stored trace for rho-trace methods: z^rho folds the
// current ratio into the trace; z' (rho-outside) defers it to the update.
// The two give bit-identical weights under FullDelta.
enum class TraceForm { RhoInside, RhoOutside };

// The HTD correction term appears with opposite signs in the two published
// statements of the method; MainText is the convergent default and Appendix
// is kept for study.
enum class HtdVariant { MainText, Appendix };

const char* rho_placement_name(RhoPlacement p);          // "full" | "partial"
const char* trace_form_name(TraceForm f);                // "inside" | "outside"
const char* htd_variant_name(HtdVariant v);              // "main" | "appendix"
std::optional<RhoPlacement> rho_placement_from_name(std::string_view name);
std::optional<TraceForm> trace_form_from_name(std::string_view name);
std::optional<HtdVariant> htd_variant_from_name(std::string_view name);

struct LearnerConfig {
  double alpha = 0.1;
  double alpha_h = 0.01;  // secondary step size (gradient corrections)
  double lambda = 0.0;
  double beta = 0.0;      // EtdBeta followon decay
  double zeta = 0.0;      // Abtd bootstrap parameter
  double cbar = 1.0;      // VTrace trace clip
  RhoPlacement rho_placement = RhoPlacement::FullDelta;
  TraceForm trace_form = TraceForm::RhoInside;
  HtdVariant htd_variant = HtdVariant::MainText;
  // Problem-level ABTD scaling bounds: psi0 = 1/max_{s,a} max(b,pi) and
  // psi_max = 1/min_{s,a} max(b,pi), extrema over pairs with b(a|s) > 0.
  double abtd_psi0 = 1.0;
  double abtd_psi_max = 1.0;
};

// psi(zeta) = 2*zeta*psi0 + max(0, 2*zeta - 1) * (psi_max - 2*psi0).
double abtd_psi(const LearnerConfig& cfg);

struct WeightSet {
  std::vector<double> w;
  std::vector<double> h;  // empty unless the method uses secondary weights
};

// Mutable per-learner recursion state. `last_*` hold quantities from the
// previous transition: trace decay, followon decay and the action-dependent
// trace scalings are all indexed one step behind the current transition.
// `last_gamma` is the discount that arrived at the current state (the
// previous transition's gamma_next); it is what multiplies the trace decay,
// so traces clear automatically at episode restarts where it is zero.
struct TraceState {
  std::vector<double> z;    // main eligibility trace (form per config)
  std::vector<double> z_b;  // behavior-rate trace (Htd only)
  double followon = 0.0;    // F (emphatic methods)
  double emphasis = 0.0;    // M (emphatic methods)
  double last_rho = 1.0;
  double last_pi = 1.0;
  double last_b = 1.0;
  double last_nu = 1.0;     // Abtd trace scaling nu_{t-1}
  double last_gamma = 0.0;
  double episode_rho_product = 1.0;  // AltTd prior-correction product
};

// delta_t = R + gamma_next * w.x_next - w.x
double td_error(const std::vector<double>& w, const Transition& t);

// Reusable buffers for the two-point proximal updates.
struct Scratch {
  std::vector<double> w_half;
  std::vector<double> h_half;
};

// Single-transition updates. All are pure in the sense that they touch only
// the passed-in state; the Learner wrapper adds dispatch, divergence
// freezing and serialization.
void offtd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void altlife_td_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void gtd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void gtd2_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void htd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void pgtd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&, Scratch&);
void pgtd2_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&, Scratch&);
void etd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&,
              bool constant_beta);
void tree_backup_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void vtrace_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);
void abtd_step(const LearnerConfig&, WeightSet&, TraceState&, const Transition&);

// Throws std::invalid_argument on inconsistent settings (e.g. PartialDelta
// with a rho-inside trace, or nonpositive ABTD psi bounds).
void validate_learner_config(Algorithm a, const LearnerConfig& cfg);

class Learner {
 public:
  Learner(Algorithm algo, const LearnerConfig& cfg, int dim);

  // Applies one transition. No-op once diverged: the first non-finite TD
  // error (or followon) freezes the learner permanently.
  void step(const Transition& t);

  double predict(const FeatureVector& x) const { return dot(ws_.w, x); }

  Algorithm algorithm() const { return algo_; }
  const LearnerConfig& config() const { return cfg_; }
  int dim() const { return dim_; }
  long steps() const { return steps_; }
  bool diverged() const { return diverged_; }
  void mark_diverged() { diverged_ = true; }

  const WeightSet& weights() const { return ws_; }
  WeightSet& weights() { return ws_; }
  const TraceState& trace() const { return tr_; }
  TraceState& trace() { return tr_; }

  // Snapshot round-trip: algorithm id, config, weights, traces, counters.
  std::string serialize() const;
  static Learner deserialize(const std::string& snapshot_json);

 private:
  Algorithm algo_;
  LearnerConfig cfg_;
  int dim_;
  WeightSet ws_;
  TraceState tr_;
  Scratch scratch_;
  long steps_ = 0;
  bool diverged_ = false;
};

// Learner-config JSON bridge (used by snapshots and the C API).
std::string learner_config_to_json(Algorithm a, const LearnerConfig& cfg);
std::pair<Algorithm, LearnerConfig> learner_config_from_json(const std::string& json);

}  // namespace offtd
