#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "baselines.hpp"
#include "collision.hpp"
#include "problems.hpp"
#include "rng.hpp"

using namespace offtd;

namespace {

struct Fixture {
  FeatureVector e0, e1;
  Fixture() {
    e0.dim = e1.dim = 2;
    e0.idx = {0};
    e1.idx = {1};
  }
  Transition make(const FeatureVector& x, const FeatureVector& xn, double R,
                  double g, double pi, double b) const {
    Transition t;
    t.reward = R;
    t.gamma_next = g;
    t.pi_prob = pi;
    t.b_prob = b;
    t.x = &x;
    t.x_next = &xn;
    return t;
  }
};

}  // namespace

TEST_CASE("plain trace scales the whole bracket by rho times the arrival "
          "discount") {
  Fixture f;
  LstdConfig cfg;
  cfg.lambda = 0.5;
  LstdAccumulator acc(2, cfg);
  // First transition arrives with discount zero: the trace stays empty and
  // nothing is accumulated.
  acc.observe(f.make(f.e0, f.e1, 0.0, 0.9, 0.5, 0.5));
  CHECK(acc.count() == 1);
  for (double v : acc.a_matrix()) CHECK(v == 0.0);
  for (double v : acc.b_vector()) CHECK(v == 0.0);
  // Second transition: e = rho * 0.9 * (0.5 * 0 + x) = 1.5*0.9*[0,1].
  acc.observe(f.make(f.e1, f.e0, 2.0, 0.5, 0.75, 0.5));
  const auto a = acc.a_matrix();
  const auto b = acc.b_vector();
  // A = mean of e (x - gamma' x')^T; only row 1 is populated.
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);
  CHECK(a[2] == doctest::Approx(-1.35 * 0.5 / 2).epsilon(1e-12));
  CHECK(a[3] == doctest::Approx(1.35 / 2).epsilon(1e-12));
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(2.0 * 1.35 / 2).epsilon(1e-12));
  // C averages x x^T over both transitions.
  const auto c = acc.c_matrix();
  CHECK(c[0] == doctest::Approx(0.5));
  CHECK(c[3] == doctest::Approx(0.5));
  CHECK(c[1] == 0.0);

  // With C = I/2, the projected objective doubles the unprojected one.
  const std::vector<double> w0 = {0.0, 0.0};
  CHECK(acc.neu(w0) == doctest::Approx(1.35 * 1.35).epsilon(1e-12));
  CHECK(acc.mspbe(w0) == doctest::Approx(2 * 1.35 * 1.35).epsilon(1e-9));
}

TEST_CASE("emphatic trace weights the feature vector by the emphasis") {
  Fixture f;
  LstdConfig cfg;
  cfg.kind = TraceKind::kEmphatic;
  cfg.lambda = 0.0;
  LstdAccumulator acc(2, cfg);
  // t1: F = 1, M = 1, e = rho * M * x = [2, 0] (rho = 2).
  acc.observe(f.make(f.e0, f.e1, 0.0, 0.9, 1.0, 0.5));
  // t2: F = 0.9 * 2 * 1 + 1 = 2.8 = M; e = rho(=1) * 2.8 * x = [0, 2.8].
  acc.observe(f.make(f.e1, f.e0, 1.0, 0.5, 0.5, 0.5));
  const auto b = acc.b_vector();
  CHECK(b[0] == 0.0);
  CHECK(b[1] == doctest::Approx(2.8 / 2).epsilon(1e-12));
  const auto a = acc.a_matrix();
  // Row 0 from t1: e0 * (x - 0.9 x')^T = 2*[1, -0.9] / 2.
  CHECK(a[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a[1] == doctest::Approx(-0.9).epsilon(1e-12));
  // Row 1 from t2: 2.8 * (x - 0.5 x')^T = 2.8*[-0.5, 1] / 2.
  CHECK(a[2] == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(a[3] == doctest::Approx(1.4).epsilon(1e-12));
}

TEST_CASE("alternative-life trace carries the episode ratio product without "
          "an outer rho") {
  Fixture f;
  LstdConfig cfg;
  cfg.kind = TraceKind::kAltLife;
  cfg.lambda = 1.0;
  LstdAccumulator acc(2, cfg);
  // Episode start: product resets to 1, e = [1, 0] regardless of rho.
  acc.observe(f.make(f.e0, f.e1, 0.0, 0.9, 1.0, 0.5));
  // Product is now 2; e = 0.9*[1,0] + 2*[0,1].
  acc.observe(f.make(f.e1, f.e0, 1.0, 0.0, 0.25, 0.5));
  auto b = acc.b_vector();
  CHECK(b[0] == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(b[1] == doctest::Approx(1.0).epsilon(1e-12));
  // gamma' = 0 above: the next arrival restarts the product and the trace.
  acc.observe(f.make(f.e0, f.e1, 1.0, 0.9, 1.0, 0.5));
  b = acc.b_vector();
  CHECK(b[0] == doctest::Approx((0.9 + 1.0) / 3).epsilon(1e-12));
}

TEST_CASE("solved weights zero out the projected objective") {
  const Problem p = make_problem("collision", 3);
  LstdConfig cfg;
  cfg.lambda = 0.5;
  LstdAccumulator acc(p.feature_dim, cfg);
  Rng rng(1234);
  const auto feats = p.feature_maker(rng);
  int state = rng.sample_discrete(p.start_dist.data(), p.n_states);
  for (int t = 0; t < 30000; ++t) {
    const int a = p.behavior.sample(state, rng);
    const int sn = p.dyn.sample(state, a, rng);
    Transition tr;
    tr.reward = p.gvfs[0].cumulant_at(state, a);
    tr.gamma_next = p.gvfs[0].discount_at(state, a);
    tr.pi_prob = p.gvfs[0].target.at(state, a);
    tr.b_prob = p.behavior.at(state, a);
    tr.x = &feats[static_cast<std::size_t>(state)];
    tr.x_next = &feats[static_cast<std::size_t>(sn)];
    acc.observe(tr);
    state = sn;
  }
  const auto w = acc.solve();
  CHECK(acc.mspbe(w) <= 1e-10);
  CHECK(acc.neu(w) <= 1e-10);
  const std::vector<double> zeros(static_cast<std::size_t>(p.feature_dim), 0.0);
  CHECK(acc.mspbe(zeros) > 1e-6);
  CHECK(acc.neu(zeros) > 1e-6);
}

TEST_CASE("tabular lstd(1) recovers the analytic collision values") {
  const Problem p = make_problem("collision", 3);
  std::vector<FeatureVector> onehot(8);
  for (int s = 0; s < 8; ++s) {
    onehot[static_cast<std::size_t>(s)].dim = 8;
    onehot[static_cast<std::size_t>(s)].idx = {s};
  }
  LstdConfig cfg;
  cfg.lambda = 1.0;
  LstdAccumulator acc(8, cfg);
  Rng rng(99);
  int state = rng.sample_discrete(p.start_dist.data(), p.n_states);
  for (int t = 0; t < 300000; ++t) {
    const int a = p.behavior.sample(state, rng);
    const int sn = p.dyn.sample(state, a, rng);
    Transition tr;
    tr.reward = p.gvfs[0].cumulant_at(state, a);
    tr.gamma_next = p.gvfs[0].discount_at(state, a);
    tr.pi_prob = p.gvfs[0].target.at(state, a);
    tr.b_prob = p.behavior.at(state, a);
    tr.x = &onehot[static_cast<std::size_t>(state)];
    tr.x_next = &onehot[static_cast<std::size_t>(sn)];
    acc.observe(tr);
    state = sn;
  }
  const auto w = acc.solve();
  for (int s = 0; s < 8; ++s) {
    CHECK(w[static_cast<std::size_t>(s)] ==
          doctest::Approx(std::pow(0.9, 7 - s)).epsilon(5e-3));
  }
}

TEST_CASE("argument checking") {
  LstdConfig cfg;
  CHECK_THROWS_AS(LstdAccumulator(0, cfg), std::invalid_argument);
  LstdAccumulator acc(2, cfg);
  Fixture f;
  FeatureVector wrong;
  wrong.dim = 3;
  wrong.idx = {0};
  Transition t = f.make(f.e0, f.e1, 0.0, 0.9, 0.5, 0.5);
  t.x = &wrong;
  CHECK_THROWS_AS(acc.observe(t), std::invalid_argument);
  t = f.make(f.e0, f.e1, 0.0, 0.9, 0.5, 0.0);  // unsupported action
  CHECK_THROWS_AS(acc.observe(t), std::invalid_argument);
  CHECK(acc.count() == 0);
  CHECK_THROWS_AS(acc.mspbe({1.0}), std::invalid_argument);
  // An empty accumulator solves to zero.
  const auto w = acc.solve();
  CHECK(w == std::vector<double>{0.0, 0.0});
}
