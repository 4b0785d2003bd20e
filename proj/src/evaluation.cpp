#include "evaluation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace offtd {

std::vector<double> stationary_distribution(const Dynamics& dyn,
                                            const TabularPolicy& behavior,
                                            double tol, int max_iters) {
  const int n = dyn.n_states;
  const int na = dyn.n_actions;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < na; ++a) {
      const double pa = behavior.at(s, a);
      if (pa == 0.0) continue;
      for (const auto& [sn, prob] : dyn.at(s, a)) {
        p(s, sn) += pa * prob;
      }
    }
  }
  Eigen::VectorXd d = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int it = 0; it < max_iters; ++it) {
    Eigen::VectorXd next = p.transpose() * d;
    next /= next.sum();
    const double change = (next - d).cwiseAbs().maxCoeff();
    d = next;
    if (change < tol) {
      return std::vector<double>(d.data(), d.data() + n);
    }
  }
  throw std::runtime_error("stationary_distribution: power iteration did not converge");
}

std::vector<double> sampled_distribution(const Dynamics& dyn,
                                         const TabularPolicy& behavior,
                                         const std::vector<double>& start,
                                         long n, Rng& rng) {
  if (n <= 0) throw std::invalid_argument("sampled_distribution: n must be positive");
  std::vector<double> d(static_cast<std::size_t>(dyn.n_states), 0.0);
  int state = rng.sample_discrete(start.data(), static_cast<int>(start.size()));
  for (long t = 0; t < n; ++t) {
    d[static_cast<std::size_t>(state)] += 1.0;
    const int a = behavior.sample(state, rng);
    state = dyn.sample(state, a, rng);
  }
  for (double& v : d) v /= static_cast<double>(n);
  return d;
}

std::vector<double> true_values(const Dynamics& dyn, const GvfSpec& gvf) {
  const int n = dyn.n_states;
  const int na = dyn.n_actions;
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < na; ++a) {
      const double pa = gvf.target.at(s, a);
      if (pa == 0.0) continue;
      r(s) += pa * gvf.cumulant_at(s, a);
      const double g = gvf.discount_at(s, a);
      if (g == 0.0) continue;
      for (const auto& [sn, prob] : dyn.at(s, a)) {
        m(s, sn) -= pa * g * prob;
      }
    }
  }
  const Eigen::VectorXd v = m.partialPivLu().solve(r);
  return std::vector<double>(v.data(), v.data() + n);
}

double weighted_rve(const std::vector<double>& pred,
                    const std::vector<double>& truth,
                    const std::vector<double>& d,
                    const std::vector<double>& interest) {
  if (pred.size() != truth.size() || pred.size() != d.size() ||
      pred.size() != interest.size()) {
    throw std::invalid_argument("weighted_rve: size mismatch");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t s = 0; s < pred.size(); ++s) {
    const double weight = d[s] * interest[s];
    if (weight == 0.0) continue;
    const double err = pred[s] - truth[s];
    num += weight * err * err;
    den += weight;
  }
  if (den <= 0.0) throw std::invalid_argument("weighted_rve: zero total weight");
  return std::sqrt(num / den);
}

double series_auc(const std::vector<double>& series) {
  if (series.empty()) throw std::invalid_argument("series_auc: empty series");
  double acc = 0.0;
  for (double v : series) acc += v;
  return acc / static_cast<double>(series.size());
}

double series_final(const std::vector<double>& series, double fraction) {
  if (series.empty()) throw std::invalid_argument("series_final: empty series");
  std::size_t tail = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(series.size())));
  if (tail == 0) tail = 1;
  if (tail > series.size()) tail = series.size();
  double acc = 0.0;
  for (std::size_t k = series.size() - tail; k < series.size(); ++k) {
    acc += series[k];
  }
  return acc / static_cast<double>(tail);
}

}  // namespace offtd
