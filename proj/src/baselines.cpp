#include "baselines.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>

namespace offtd {

namespace {

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double fv_value(const FeatureVector& f, std::size_t k) {
  return f.val.empty() ? 1.0 : f.val[k];
}

}  // namespace

LstdAccumulator::LstdAccumulator(int dim, const LstdConfig& config)
    : dim_(dim), config_(config) {
  if (dim <= 0) {
    throw std::invalid_argument("LstdAccumulator: dim must be positive");
  }
  const std::size_t d = static_cast<std::size_t>(dim);
  a_sum_.assign(d * d, 0.0);
  b_sum_.assign(d, 0.0);
  c_sum_.assign(d * d, 0.0);
  trace_.assign(d, 0.0);
}

void LstdAccumulator::observe(const Transition& t) {
  if (t.x == nullptr || t.x_next == nullptr) {
    throw std::invalid_argument("LstdAccumulator: transition missing features");
  }
  if (t.x->dim != dim_ || t.x_next->dim != dim_) {
    throw std::invalid_argument("LstdAccumulator: feature dimension mismatch");
  }
  const double rho = importance_ratio(t);
  const double g_arr = last_gamma_;  // discount on arrival in the current state

  switch (config_.kind) {
    case TraceKind::kPlain:
      scale(trace_, rho * g_arr * config_.lambda);
      axpy(trace_, rho * g_arr, *t.x);
      break;
    case TraceKind::kEmphatic: {
      const double beta_eff = config_.constant_beta ? config_.beta : g_arr;
      followon_ = beta_eff * last_rho_ * followon_ + t.interest;
      const double m =
          config_.lambda * t.interest + (1.0 - config_.lambda) * followon_;
      scale(trace_, rho * g_arr * config_.lambda);
      axpy(trace_, rho * m, *t.x);
      break;
    }
    case TraceKind::kAltLife:
      if (g_arr == 0.0) rho_product_ = 1.0;
      scale(trace_, g_arr * config_.lambda);
      axpy(trace_, rho_product_, *t.x);
      break;
  }

  const std::size_t d = static_cast<std::size_t>(dim_);
  for (std::size_t i = 0; i < d; ++i) {
    const double e = trace_[i];
    if (e == 0.0) continue;
    double* row = a_sum_.data() + i * d;
    for (std::size_t k = 0; k < t.x->idx.size(); ++k) {
      row[static_cast<std::size_t>(t.x->idx[k])] += e * fv_value(*t.x, k);
    }
    for (std::size_t k = 0; k < t.x_next->idx.size(); ++k) {
      row[static_cast<std::size_t>(t.x_next->idx[k])] -=
          e * t.gamma_next * fv_value(*t.x_next, k);
    }
    b_sum_[i] += t.reward * e;
  }
  for (std::size_t j = 0; j < t.x->idx.size(); ++j) {
    double* row = c_sum_.data() + static_cast<std::size_t>(t.x->idx[j]) * d;
    for (std::size_t k = 0; k < t.x->idx.size(); ++k) {
      row[static_cast<std::size_t>(t.x->idx[k])] +=
          fv_value(*t.x, j) * fv_value(*t.x, k);
    }
  }
  ++count_;

  if (config_.kind == TraceKind::kAltLife) rho_product_ *= rho;
  last_rho_ = rho;
  last_gamma_ = t.gamma_next;
}

std::vector<double> LstdAccumulator::a_matrix() const {
  std::vector<double> out = a_sum_;
  const double inv = count_ > 0 ? 1.0 / static_cast<double>(count_) : 0.0;
  for (double& v : out) v *= inv;
  return out;
}

std::vector<double> LstdAccumulator::b_vector() const {
  std::vector<double> out = b_sum_;
  const double inv = count_ > 0 ? 1.0 / static_cast<double>(count_) : 0.0;
  for (double& v : out) v *= inv;
  return out;
}

std::vector<double> LstdAccumulator::c_matrix() const {
  std::vector<double> out = c_sum_;
  const double inv = count_ > 0 ? 1.0 / static_cast<double>(count_) : 0.0;
  for (double& v : out) v *= inv;
  return out;
}

std::vector<double> LstdAccumulator::solve() const {
  std::vector<double> w(static_cast<std::size_t>(dim_), 0.0);
  if (count_ == 0) return w;
  const double inv = 1.0 / static_cast<double>(count_);
  RowMat a = Eigen::Map<const RowMat>(a_sum_.data(), dim_, dim_) * inv;
  a += config_.ridge * RowMat::Identity(dim_, dim_);
  const Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(b_sum_.data(), dim_) * inv;
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  std::copy(x.data(), x.data() + dim_, w.begin());
  return w;
}

std::vector<double> LstdAccumulator::expected_update(
    const std::vector<double>& w) const {
  if (static_cast<int>(w.size()) != dim_) {
    throw std::invalid_argument("LstdAccumulator: weight dimension mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(dim_), 0.0);
  if (count_ == 0) return out;
  const double inv = 1.0 / static_cast<double>(count_);
  const std::size_t d = static_cast<std::size_t>(dim_);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = b_sum_[i];
    const double* row = a_sum_.data() + i * d;
    for (std::size_t j = 0; j < d; ++j) acc -= row[j] * w[j];
    out[i] = acc * inv;
  }
  return out;
}

double LstdAccumulator::mspbe(const std::vector<double>& w) const {
  const std::vector<double> ex = expected_update(w);
  if (count_ == 0) return 0.0;
  const double inv = 1.0 / static_cast<double>(count_);
  const RowMat c = Eigen::Map<const RowMat>(c_sum_.data(), dim_, dim_) * inv;
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(ex.data(), dim_);
  // C may be rank deficient when features do not span the space; the
  // expected update lies in its column span, so the minimum-norm solve is
  // exact there.
  const Eigen::VectorXd y = c.completeOrthogonalDecomposition().solve(v);
  return std::max(0.0, v.dot(y));
}

double LstdAccumulator::neu(const std::vector<double>& w) const {
  const std::vector<double> ex = expected_update(w);
  double acc = 0.0;
  for (double v : ex) acc += v * v;
  return acc;
}

}  // namespace offtd
