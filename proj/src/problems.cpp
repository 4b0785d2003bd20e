#include "problems.hpp"

#include <algorithm>
#include <stdexcept>

#include "collision.hpp"
#include "evaluation.hpp"
#include "fourrooms.hpp"

namespace offtd {

namespace {

void finish_ground_truth(Problem& p) {
  p.d_b = stationary_distribution(p.dyn, p.behavior);
  const std::vector<double> zeros(static_cast<std::size_t>(p.n_states), 0.0);
  p.v_true.clear();
  p.zero_error.clear();
  for (const GvfSpec& g : p.gvfs) {
    p.v_true.push_back(true_values(p.dyn, g));
    p.zero_error.push_back(weighted_rve(zeros, p.v_true.back(), p.d_b, g.interest));
  }
}

Problem make_collision(std::uint64_t feature_seed) {
  Problem p;
  p.name = "collision";
  p.n_states = collision::kNumStates;
  p.n_actions = collision::kNumActions;
  p.feature_dim = collision::kFeatureDim;
  p.default_steps = 20000;
  p.episodic = true;
  p.behavior = collision::behavior_policy();
  p.dyn = collision::dynamics();
  p.start_dist = collision::start_distribution();
  Rng rng(feature_seed);
  p.features = collision::make_features(rng);
  p.gvfs = {collision::gvf()};
  p.feature_maker = [](Rng& r) { return collision::make_features(r); };
  finish_ground_truth(p);
  return p;
}

Problem make_fourrooms(const std::string& name, bool high_variance,
                       const std::string& map_text) {
  const fourrooms::GridMap map = fourrooms::GridMap::parse(
      map_text.empty() ? fourrooms::GridMap::default_map_text() : map_text);
  const fourrooms::TileCoder coder(4, 2.0, map.rows, map.cols);
  Problem p;
  p.name = name;
  p.n_states = map.n_states();
  p.n_actions = fourrooms::kNumActions;
  p.feature_dim = coder.dim();
  p.default_steps = 50000;
  p.episodic = false;
  p.behavior = high_variance ? fourrooms::high_variance_policy(map)
                             : fourrooms::equiprobable_policy(map);
  p.dyn = fourrooms::dynamics(map);
  p.start_dist.assign(static_cast<std::size_t>(p.n_states), 0.0);
  p.start_dist[static_cast<std::size_t>(map.start_id)] = 1.0;
  p.features = fourrooms::make_features(map, coder);
  p.gvfs = fourrooms::make_gvfs(map);
  finish_ground_truth(p);
  return p;
}

}  // namespace

double Problem::combined_error(
    const std::vector<std::vector<double>>& predictions) const {
  if (predictions.size() != gvfs.size()) {
    throw std::invalid_argument("combined_error: one prediction set per GVF");
  }
  double acc = 0.0;
  for (std::size_t g = 0; g < gvfs.size(); ++g) {
    acc += weighted_rve(predictions[g], v_true[g], d_b, gvfs[g].interest);
  }
  return acc / static_cast<double>(gvfs.size());
}

double Problem::zero_combined_error() const {
  double acc = 0.0;
  for (double e : zero_error) acc += e;
  return acc / static_cast<double>(zero_error.size());
}

Problem make_problem(const std::string& name, std::uint64_t feature_seed,
                     const std::string& map_text) {
  if (name == "collision") return make_collision(feature_seed);
  if (name == "fourrooms") return make_fourrooms(name, false, map_text);
  if (name == "fourrooms_hv") return make_fourrooms(name, true, map_text);
  throw std::invalid_argument("unknown problem '" + name + "'");
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"collision", "fourrooms",
                                                 "fourrooms_hv"};
  return names;
}

std::pair<double, double> abtd_psi_bounds(const TabularPolicy& behavior,
                                          const TabularPolicy& target) {
  double lo = 0.0;
  double hi = 0.0;
  bool seen = false;
  for (int s = 0; s < behavior.n_states; ++s) {
    for (int a = 0; a < behavior.n_actions; ++a) {
      const double b = behavior.at(s, a);
      if (b <= 0.0) continue;
      const double u = std::max(b, target.at(s, a));
      if (!seen) {
        lo = hi = u;
        seen = true;
      } else {
        lo = std::min(lo, u);
        hi = std::max(hi, u);
      }
    }
  }
  if (!seen) throw std::invalid_argument("abtd_psi_bounds: empty behavior support");
  return {1.0 / hi, 1.0 / lo};
}

}  // namespace offtd
