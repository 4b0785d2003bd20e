#include "collision.hpp"

#include <cmath>

namespace offtd::collision {

std::vector<FeatureVector> make_features(Rng& rng) {
  // All 3-of-6 bit patterns in lexicographic order of ascending bit triples.
  std::vector<std::vector<int>> combos;
  for (int a = 0; a < kFeatureDim; ++a) {
    for (int b = a + 1; b < kFeatureDim; ++b) {
      for (int c = b + 1; c < kFeatureDim; ++c) {
        combos.push_back({a, b, c});
      }
    }
  }
  rng.shuffle(combos);
  std::vector<FeatureVector> feats(kNumStates);
  for (int s = 0; s < kNumStates; ++s) {
    feats[s].dim = kFeatureDim;
    feats[s].idx = combos[static_cast<std::size_t>(s)];
  }
  return feats;
}

TabularPolicy behavior_policy() {
  TabularPolicy b(kNumStates, kNumActions);
  for (int s = 0; s < 4; ++s) b.set(s, kRight, 1.0);
  for (int s = 4; s < 8; ++s) {
    b.set(s, kRight, 0.5);
    b.set(s, kRetreat, 0.5);
  }
  return b;
}

TabularPolicy target_policy() {
  TabularPolicy pi(kNumStates, kNumActions);
  for (int s = 0; s < kNumStates; ++s) pi.set(s, kRight, 1.0);
  return pi;
}

Dynamics dynamics() {
  Dynamics dyn(kNumStates, kNumActions);
  std::vector<std::pair<int, double>> restart;
  for (int j = 0; j < 4; ++j) restart.emplace_back(j, 0.25);
  for (int s = 0; s < kNumStates; ++s) {
    if (s < 7) {
      dyn.at(s, kRight) = {{s + 1, 1.0}};
    } else {
      dyn.at(s, kRight) = restart;  // termination, then a fresh episode
    }
    dyn.at(s, kRetreat) = restart;  // never taken by the behavior in 0..3
  }
  return dyn;
}

GvfSpec gvf() {
  GvfSpec g;
  g.name = "collision";
  g.target = target_policy();
  g.cumulant.assign(kNumStates * kNumActions, 0.0);
  g.discount.assign(kNumStates * kNumActions, kGamma);
  g.interest.assign(kNumStates, 1.0);
  g.cumulant[7 * kNumActions + kRight] = 1.0;
  g.discount[7 * kNumActions + kRight] = 0.0;
  return g;
}

std::vector<double> true_values() {
  std::vector<double> v(kNumStates);
  for (int s = 0; s < kNumStates; ++s) v[s] = std::pow(kGamma, 7 - s);
  return v;
}

std::vector<double> start_distribution() {
  std::vector<double> d(kNumStates, 0.0);
  for (int s = 0; s < 4; ++s) d[s] = 0.25;
  return d;
}

}  // namespace offtd::collision
