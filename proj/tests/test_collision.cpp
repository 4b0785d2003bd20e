#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "collision.hpp"
#include "evaluation.hpp"
#include "problems.hpp"

using namespace offtd;

TEST_CASE("behavior and target policies have the documented rows") {
  const auto b = collision::behavior_policy();
  const auto pi = collision::target_policy();
  for (int s = 0; s < 4; ++s) {
    CHECK(b.at(s, collision::kRight) == 1.0);
    CHECK(b.at(s, collision::kRetreat) == 0.0);
  }
  for (int s = 4; s < 8; ++s) {
    CHECK(b.at(s, collision::kRight) == 0.5);
    CHECK(b.at(s, collision::kRetreat) == 0.5);
  }
  for (int s = 0; s < 8; ++s) CHECK(pi.at(s, collision::kRight) == 1.0);
  CHECK(b.rows_sum_to_one());
  CHECK(pi.rows_sum_to_one());
  CHECK(covers(b, pi));
}

TEST_CASE("dynamics chain right and fold restarts into the transitions") {
  const auto dyn = collision::dynamics();
  for (int s = 0; s < 7; ++s) {
    const auto& row = dyn.at(s, collision::kRight);
    REQUIRE(row.size() == 1);
    CHECK(row[0].first == s + 1);
    CHECK(row[0].second == 1.0);
  }
  for (const auto& row :
       {dyn.at(7, collision::kRight), dyn.at(5, collision::kRetreat)}) {
    REQUIRE(row.size() == 4);
    for (int j = 0; j < 4; ++j) {
      CHECK(row[static_cast<std::size_t>(j)].first == j);
      CHECK(row[static_cast<std::size_t>(j)].second == 0.25);
    }
  }
}

TEST_CASE("gvf marks only the final right transition") {
  const auto g = collision::gvf();
  for (int s = 0; s < 8; ++s) {
    for (int a = 0; a < 2; ++a) {
      const bool last = (s == 7 && a == collision::kRight);
      CHECK(g.cumulant_at(s, a) == (last ? 1.0 : 0.0));
      CHECK(g.discount_at(s, a) == (last ? 0.0 : 0.9));
    }
    CHECK(g.interest[static_cast<std::size_t>(s)] == 1.0);
  }
}

TEST_CASE("stationary distribution is (2,4,6,8,8,4,2,1)/35") {
  const Problem p = make_problem("collision", 1);
  const double expected[] = {2, 4, 6, 8, 8, 4, 2, 1};
  REQUIRE(p.d_b.size() == 8);
  for (int s = 0; s < 8; ++s) {
    CHECK(p.d_b[static_cast<std::size_t>(s)] ==
          doctest::Approx(expected[s] / 35.0).epsilon(1e-10));
  }
}

TEST_CASE("true values are the analytic powers of 0.9") {
  const Problem p = make_problem("collision", 1);
  REQUIRE(p.v_true.size() == 1);
  for (int s = 0; s < 8; ++s) {
    CHECK(p.v_true[0][static_cast<std::size_t>(s)] ==
          doctest::Approx(std::pow(0.9, 7 - s)).epsilon(1e-12));
  }
  // Independent cross-check through the generic Bellman solver path.
  const auto v = true_values(p.dyn, p.gvfs[0]);
  for (int s = 0; s < 8; ++s) {
    CHECK(v[static_cast<std::size_t>(s)] ==
          doctest::Approx(std::pow(0.9, 7 - s)).epsilon(1e-12));
  }
}

TEST_CASE("zero-weight error matches the frozen value") {
  const Problem p = make_problem("collision", 1);
  CHECK(p.zero_combined_error() ==
        doctest::Approx(0.6890778582512227).epsilon(1e-9));
}

TEST_CASE("features: eight distinct 3-of-6 binary patterns per draw") {
  Rng rng(42);
  const auto feats = collision::make_features(rng);
  REQUIRE(feats.size() == 8);
  std::set<std::vector<int>> seen;
  for (const auto& f : feats) {
    CHECK(f.dim == 6);
    CHECK(f.binary());
    REQUIRE(f.idx.size() == 3);
    CHECK(f.idx[0] < f.idx[1]);
    CHECK(f.idx[1] < f.idx[2]);
    CHECK(f.idx[0] >= 0);
    CHECK(f.idx[2] < 6);
    seen.insert(f.idx);
  }
  CHECK(seen.size() == 8);

  // Deterministic per seed; another seed gives a different assignment.
  Rng rng_same(42);
  const auto again = collision::make_features(rng_same);
  for (int s = 0; s < 8; ++s) {
    CHECK(again[static_cast<std::size_t>(s)].idx ==
          feats[static_cast<std::size_t>(s)].idx);
  }
  Rng rng_other(43);
  const auto other = collision::make_features(rng_other);
  bool all_equal = true;
  for (int s = 0; s < 8; ++s) {
    if (other[static_cast<std::size_t>(s)].idx !=
        feats[static_cast<std::size_t>(s)].idx) {
      all_equal = false;
    }
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("problem bundle wiring") {
  const Problem p = make_problem("collision", 7);
  CHECK(p.name == "collision");
  CHECK(p.n_states == 8);
  CHECK(p.n_actions == 2);
  CHECK(p.feature_dim == 6);
  CHECK(p.default_steps == 20000);
  CHECK(p.episodic);
  CHECK(p.gvfs.size() == 1);
  CHECK(bool(p.feature_maker));
  CHECK(p.start_dist ==
        std::vector<double>{0.25, 0.25, 0.25, 0.25, 0, 0, 0, 0});
  // The representative features come from the seed: same seed, same draw.
  const Problem q = make_problem("collision", 7);
  for (int s = 0; s < 8; ++s) {
    CHECK(q.features[static_cast<std::size_t>(s)].idx ==
          p.features[static_cast<std::size_t>(s)].idx);
  }
}

TEST_CASE("abtd psi bounds on collision") {
  const Problem p = make_problem("collision", 1);
  const auto [psi0, psi_max] =
      abtd_psi_bounds(p.behavior, p.gvfs[0].target);
  CHECK(psi0 == doctest::Approx(1.0));
  CHECK(psi_max == doctest::Approx(2.0));
}
