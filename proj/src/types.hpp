#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rng.hpp"

namespace offtd {

// Sparse feature vector: sorted active indices, optional per-index values.
// An empty `val` means all active entries are 1 (binary features), which is
// the case for every benchmark here. Dots and axpys iterate in ascending
// index order so floating-point results are reproducible bit-for-bit.
struct FeatureVector {
  int dim = 0;
  std::vector<int> idx;
  std::vector<double> val;  // empty => binary

  bool binary() const { return val.empty(); }
  std::vector<double> dense() const;
};

double dot(const std::vector<double>& w, const FeatureVector& x);

// y += c * x
void axpy(std::vector<double>& y, double c, const FeatureVector& x);

// y *= c (dense in-place scale; y *= 0 clears exactly)
void scale(std::vector<double>& y, double c);

bool all_finite(const std::vector<double>& v);

// One stream transition as seen by a single prediction target. Cumulants,
// discounts and policy probabilities are target-specific, so a shared
// behavior step fans out into one Transition per GVF. Feature pointers are
// non-owning views into the problem's per-state feature table.
struct Transition {
  int state = 0;
  int action = 0;
  int next_state = 0;
  double reward = 0.0;      // cumulant
  double gamma_next = 0.0;  // discount that applies at next_state
  double pi_prob = 0.0;     // target probability of `action` at `state`
  double b_prob = 0.0;      // behavior probability of `action` at `state`
  double interest = 1.0;
  const FeatureVector* x = nullptr;
  const FeatureVector* x_next = nullptr;
};

// pi/b for the taken action; the behavior must support it (b > 0).
double importance_ratio(const Transition& t);

struct TabularPolicy {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> prob;  // row-major [state][action]

  TabularPolicy() = default;
  TabularPolicy(int ns, int na)
      : n_states(ns), n_actions(na),
        prob(static_cast<std::size_t>(ns) * na, 0.0) {}

  double at(int s, int a) const {
    return prob[static_cast<std::size_t>(s) * n_actions + a];
  }
  void set(int s, int a, double p) {
    prob[static_cast<std::size_t>(s) * n_actions + a] = p;
  }
  const double* row(int s) const {
    return prob.data() + static_cast<std::size_t>(s) * n_actions;
  }
  int sample(int s, Rng& rng) const {
    return rng.sample_discrete(row(s), n_actions);
  }
  bool rows_sum_to_one(double tol = 1e-9) const;
};

// Coverage: behavior supports every action the target can take.
bool covers(const TabularPolicy& behavior, const TabularPolicy& target);

// Tabular environment dynamics: next-state distribution per (state, action).
struct Dynamics {
  int n_states = 0;
  int n_actions = 0;
  // [s * n_actions + a] -> list of (next_state, probability)
  std::vector<std::vector<std::pair<int, double>>> next;

  Dynamics() = default;
  Dynamics(int ns, int na)
      : n_states(ns), n_actions(na),
        next(static_cast<std::size_t>(ns) * na) {}

  std::vector<std::pair<int, double>>& at(int s, int a) {
    return next[static_cast<std::size_t>(s) * n_actions + a];
  }
  const std::vector<std::pair<int, double>>& at(int s, int a) const {
    return next[static_cast<std::size_t>(s) * n_actions + a];
  }
  int sample(int s, int a, Rng& rng) const;
};

// One general value function (prediction target): a target policy plus
// cumulant/discount tables indexed by (state, action) and per-state interest.
// The (s,a) indexing is sufficient for both benchmarks: neither the cumulant
// nor the discount of a transition depends on the sampled next state.
struct GvfSpec {
  std::string name;
  TabularPolicy target;
  std::vector<double> cumulant;  // [s * n_actions + a]
  std::vector<double> discount;  // [s * n_actions + a]
  std::vector<double> interest;  // [s]

  double cumulant_at(int s, int a) const {
    return cumulant[static_cast<std::size_t>(s) * target.n_actions + a];
  }
  double discount_at(int s, int a) const {
    return discount[static_cast<std::size_t>(s) * target.n_actions + a];
  }
};

}  // namespace offtd
