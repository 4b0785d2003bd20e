#include "types.hpp"

#include <cmath>
#include <stdexcept>

namespace offtd {

std::vector<double> FeatureVector::dense() const {
  std::vector<double> out(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    out[static_cast<std::size_t>(idx[k])] = binary() ? 1.0 : val[k];
  }
  return out;
}

double dot(const std::vector<double>& w, const FeatureVector& x) {
  double s = 0.0;
  if (x.binary()) {
    for (int i : x.idx) s += w[static_cast<std::size_t>(i)];
  } else {
    for (std::size_t k = 0; k < x.idx.size(); ++k) {
      s += w[static_cast<std::size_t>(x.idx[k])] * x.val[k];
    }
  }
  return s;
}

void axpy(std::vector<double>& y, double c, const FeatureVector& x) {
  if (x.binary()) {
    for (int i : x.idx) y[static_cast<std::size_t>(i)] += c;
  } else {
    for (std::size_t k = 0; k < x.idx.size(); ++k) {
      y[static_cast<std::size_t>(x.idx[k])] += c * x.val[k];
    }
  }
}

void scale(std::vector<double>& y, double c) {
  if (c == 0.0) {
    std::fill(y.begin(), y.end(), 0.0);
  } else {
    for (double& v : y) v *= c;
  }
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

double importance_ratio(const Transition& t) {
  if (!(t.b_prob > 0.0)) {
    throw std::invalid_argument(
        "importance_ratio: behavior probability of the taken action must be "
        "positive");
  }
  return t.pi_prob / t.b_prob;
}

bool TabularPolicy::rows_sum_to_one(double tol) const {
  for (int s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (int a = 0; a < n_actions; ++a) sum += at(s, a);
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

bool covers(const TabularPolicy& behavior, const TabularPolicy& target) {
  if (behavior.n_states != target.n_states ||
      behavior.n_actions != target.n_actions) {
    return false;
  }
  for (int s = 0; s < behavior.n_states; ++s) {
    for (int a = 0; a < behavior.n_actions; ++a) {
      if (target.at(s, a) > 0.0 && behavior.at(s, a) <= 0.0) return false;
    }
  }
  return true;
}

int Dynamics::sample(int s, int a, Rng& rng) const {
  const auto& row = at(s, a);
  if (row.size() == 1) return row[0].first;
  double u = rng.uniform01();
  double cum = 0.0;
  int last = row.front().first;
  for (const auto& [sn, p] : row) {
    if (p <= 0.0) continue;
    last = sn;
    cum += p;
    if (u < cum) return sn;
  }
  return last;
}

}  // namespace offtd
