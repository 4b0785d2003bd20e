// Problem bundles: everything a sweep needs for one benchmark, precomputed.
//
// A Problem packages dynamics, behavior policy, prediction targets, state
// features, and exact ground truth (true values, stationary distribution,
// zero-weight error) for one of the three benchmarks.  Collision re-draws
// its random binary features per run via `feature_maker`; the gridworlds use
// a fixed tile coding.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace offtd {

struct Problem {
  std::string name;
  int n_states = 0;
  int n_actions = 0;
  int feature_dim = 0;
  long default_steps = 0;
  bool episodic = false;  // stream contains termination/restart events
  TabularPolicy behavior;
  Dynamics dyn;
  std::vector<double> start_dist;          // initial state of a stream
  std::vector<FeatureVector> features;     // per state (representative draw)
  std::vector<GvfSpec> gvfs;
  std::vector<std::vector<double>> v_true;  // per gvf, per state
  std::vector<double> d_b;                  // stationary distribution
  std::vector<double> zero_error;           // per gvf, error of w = 0
  // When set, called at the start of each run with the run's generator to
  // draw fresh features (Collision's random binary vectors).
  std::function<std::vector<FeatureVector>(Rng&)> feature_maker;

  // Mean over GVFs of the per-GVF normalized error: the scalar recorded in
  // error series (reduces to the plain error for a single GVF).
  double combined_error(
      const std::vector<std::vector<double>>& predictions) const;
  double zero_combined_error() const;
};

// `name` is one of "collision", "fourrooms", "fourrooms_hv".
// `feature_seed` seeds the representative Collision feature draw; the
// gridworld features are deterministic.  A non-empty `map_text` replaces the
// built-in Four Rooms layout.
Problem make_problem(const std::string& name, std::uint64_t feature_seed,
                     const std::string& map_text = "");

const std::vector<std::string>& problem_names();

// Scalar bounds for ABTD's psi schedule: over (s,a) pairs the behavior can
// take, psi0 = 1/max max(b,pi) and psi_max = 1/min max(b,pi).
std::pair<double, double> abtd_psi_bounds(const TabularPolicy& behavior,
                                          const TabularPolicy& target);

}  // namespace offtd
