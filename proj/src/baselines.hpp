// Least-squares fixed-point baselines and objective measures.
//
// An LstdAccumulator consumes the same transition stream as the incremental
// learners and maintains running averages of the A matrix, b vector, and
// feature covariance C.  Solving (A + ridge I) w = b yields the fixed point
// the corresponding trace family converges to; MSPBE and NEU measure how far
// a weight vector is from satisfying it.
#pragma once

#include <cstddef>
#include <vector>

#include "types.hpp"

namespace offtd {

enum class TraceKind {
  kPlain,     // posterior-corrected accumulating trace
  kEmphatic,  // followon-weighted trace
  kAltLife,   // prior-corrected (alternative-life) trace
};

struct LstdConfig {
  TraceKind kind = TraceKind::kPlain;
  double lambda = 0.0;
  double beta = 1.0;       // followon decay; emphatic kind only
  bool constant_beta = false;  // false: decay by the arrival discount
  double ridge = 1e-8;
};

class LstdAccumulator {
 public:
  LstdAccumulator(int dim, const LstdConfig& config);

  // Feeds one transition.  Statistics are averaged over the number of
  // transitions seen, so A, b, and C are expectations under the behavior
  // stream regardless of its length.
  void observe(const Transition& t);

  // Solves (A + ridge I) w = b.
  std::vector<double> solve() const;

  // Objectives for an arbitrary weight vector against the accumulated
  // statistics.  MSPBE projects the expected update through the feature
  // covariance; NEU is its unprojected squared norm.
  double mspbe(const std::vector<double>& w) const;
  double neu(const std::vector<double>& w) const;

  int dim() const { return dim_; }
  std::size_t count() const { return count_; }
  std::vector<double> a_matrix() const;  // averaged, row-major
  std::vector<double> b_vector() const;  // averaged
  std::vector<double> c_matrix() const;  // averaged, row-major

 private:
  std::vector<double> expected_update(const std::vector<double>& w) const;

  int dim_ = 0;
  LstdConfig config_;
  std::vector<double> a_sum_;  // dim x dim, row-major
  std::vector<double> b_sum_;
  std::vector<double> c_sum_;  // dim x dim, row-major
  std::vector<double> trace_;
  double followon_ = 0.0;
  double last_rho_ = 1.0;
  double last_gamma_ = 0.0;
  double rho_product_ = 1.0;  // alternative-life prior correction
  std::size_t count_ = 0;
};

}  // namespace offtd
