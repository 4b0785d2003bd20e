#pragma once

#include <vector>

#include "types.hpp"

namespace offtd::collision {

// Eight-state episodic corridor. The agent starts uniformly in one of the
// first four states and moves right; in the second half the behavior policy
// may instead retreat to the start region. Taking right from the last state
// yields reward 1 and terminates (discount 0 into the restart state).
inline constexpr int kNumStates = 8;
inline constexpr int kNumActions = 2;
inline constexpr int kRight = 0;
inline constexpr int kRetreat = 1;
inline constexpr int kFeatureDim = 6;
inline constexpr int kActiveBits = 3;
inline constexpr double kGamma = 0.9;

// Each run assigns every state a distinct binary feature vector with three
// of six bits set, drawn uniformly without replacement from the 20
// possibilities (lexicographic enumeration + seeded shuffle).
std::vector<FeatureVector> make_features(Rng& rng);

TabularPolicy behavior_policy();  // right everywhere; 50/50 in states 4..7
TabularPolicy target_policy();    // always right

// Restarts are folded into the chain: termination and retreats both lead to
// a uniform draw over states 0..3.
Dynamics dynamics();

GvfSpec gvf();

// v(i) = 0.9^(7-i): the target walks 8-i steps and collects reward 1.
std::vector<double> true_values();

std::vector<double> start_distribution();  // uniform over states 0..3

}  // namespace offtd::collision
