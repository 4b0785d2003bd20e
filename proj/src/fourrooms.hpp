#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace offtd::fourrooms {

inline constexpr int kNumActions = 4;  // 0=U 1=D 2=L 3=R
inline constexpr std::array<std::pair<int, int>, 4> kMoves = {
    std::pair{-1, 0}, std::pair{1, 0}, std::pair{0, -1}, std::pair{0, 1}};
inline constexpr const char* kActionLetters = "UDLR";
inline constexpr double kGamma = 0.9;

// Gridworld parsed from an ASCII map: '#' wall, '.' free, 'H' hallway,
// 'S' behavior start, digits 1..9 high-variance states (each digit needs a
// matching "d:A" token on a trailing action line). State ids number the
// free cells row-major. Rooms are the connected components of free cells
// with the hallways removed.
struct GridMap {
  int rows = 0, cols = 0;                  // interior size
  std::vector<std::string> grid;           // interior characters
  std::vector<std::pair<int, int>> cells;  // state id -> (r, c)
  std::vector<int> cell_id;                // r*cols + c -> state id or -1
  std::vector<int> hallway_ids;            // ascending
  int start_id = -1;
  std::vector<std::pair<int, int>> hv;     // (state id, designated action)
  std::vector<int> room_of;                // state id -> room index, hallway -> -1
  int n_rooms = 0;

  int n_states() const { return static_cast<int>(cells.size()); }
  int id_at(int r, int c) const {
    if (r < 0 || r >= rows || c < 0 || c >= cols) return -1;
    return cell_id[static_cast<std::size_t>(r) * cols + c];
  }
  // Deterministic move; walls and borders leave the agent in place.
  int step_cell(int id, int a) const;

  static GridMap parse(const std::string& text);
  // Byte-identical to assets/fourrooms.map (test-enforced).
  static const std::string& default_map_text();
};

// BFS over free cells (moves are reversible, so plain BFS suffices).
std::vector<int> bfs_distance(const GridMap& m, int goal_id);

// Uniform over the actions that strictly decrease BFS distance to the goal;
// at the goal cell itself the policy is uniform (it is out of every room, so
// the choice never enters an update).
TabularPolicy shortest_path_policy(const GridMap& m, int goal_id);

TabularPolicy equiprobable_policy(const GridMap& m);

// Behavior with 0.97 on the designated action and 0.01 elsewhere at the
// digit-marked states; equiprobable everywhere else.
TabularPolicy high_variance_policy(const GridMap& m);

Dynamics dynamics(const GridMap& m);

// Grid tile coding: `tilings` overlapping 2D grids of square tiles, tiling k
// offset by k/tilings of the tile width in both dimensions. Every cell
// activates exactly one tile per tiling.
struct TileCoder {
  int tilings = 4;
  double tile_width = 2.0;
  int rows = 0, cols = 0;

  TileCoder(int tilings_, double width_, int rows_, int cols_);
  int tiles_r() const { return tiles_r_; }
  int tiles_c() const { return tiles_c_; }
  int dim() const { return tilings * tiles_r_ * tiles_c_; }
  FeatureVector encode(int r, int c) const;

 private:
  int tiles_r_ = 0, tiles_c_ = 0;
};

// Per-state features for a map under the standard coder (4 tilings, 2x2).
std::vector<FeatureVector> make_features(const GridMap& m, const TileCoder& coder);

// The eight prediction targets: for each room (ascending) and each adjacent
// hallway (ascending), the shortest-path policy to that hallway with
// cumulant 1 on stepping into it, discount 0.9 strictly inside the room and
// 0 across any boundary, and interest marking the room.
std::vector<GvfSpec> make_gvfs(const GridMap& m);

}  // namespace offtd::fourrooms
