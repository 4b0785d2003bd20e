// Ground truth and error measurement.
//
// True values come from solving the Bellman linear system exactly; the state
// weighting comes from the stationary distribution of the behavior chain.
// Error series produced by the experiment driver are reduced to scalar
// summaries (area under the curve, tail average) here.
#pragma once

#include <vector>

#include "types.hpp"

namespace offtd {

// Stationary distribution of the chain induced by following `behavior` in
// `dyn`, by power iteration from the uniform distribution.  Throws if the
// iteration fails to reach `tol` (max absolute change) within `max_iters`.
std::vector<double> stationary_distribution(const Dynamics& dyn,
                                            const TabularPolicy& behavior,
                                            double tol = 1e-12,
                                            int max_iters = 200000);

// Empirical visit frequencies over `n` contiguous behavior steps from a
// start-state draw: the sampled counterpart of stationary_distribution for
// fidelity studies.
std::vector<double> sampled_distribution(const Dynamics& dyn,
                                         const TabularPolicy& behavior,
                                         const std::vector<double>& start,
                                         long n, Rng& rng);

// Exact values of `gvf.target`: solves v = r_pi + P_pi^gamma v.
std::vector<double> true_values(const Dynamics& dyn, const GvfSpec& gvf);

// sqrt( sum_s d(s) i(s) (pred - truth)^2 / sum_s d(s) i(s) ).
// With interest identically one this is the usual d-weighted root error.
double weighted_rve(const std::vector<double>& pred,
                    const std::vector<double>& truth,
                    const std::vector<double>& d,
                    const std::vector<double>& interest);

// Mean over all recorded points.
double series_auc(const std::vector<double>& series);

// Mean over the last ceil(fraction * size) recorded points.
double series_final(const std::vector<double>& series, double fraction = 0.01);

}  // namespace offtd
