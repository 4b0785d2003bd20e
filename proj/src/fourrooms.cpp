#include "fourrooms.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace offtd::fourrooms {

namespace {

[[noreturn]] void fail(const std::string& msg) {
  throw std::runtime_error("fourrooms map: " + msg);
}

}  // namespace

int GridMap::step_cell(int id, int a) const {
  const auto [r, c] = cells[static_cast<std::size_t>(id)];
  const int nid = id_at(r + kMoves[static_cast<std::size_t>(a)].first,
                        c + kMoves[static_cast<std::size_t>(a)].second);
  return nid < 0 ? id : nid;
}

GridMap GridMap::parse(const std::string& text) {
  std::vector<std::string> grid_lines;
  std::vector<std::string> extra_lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!extra_lines.empty()) fail("grid lines must be contiguous");
      grid_lines.push_back(line);
    } else {
      extra_lines.push_back(line);
    }
  }
  if (grid_lines.size() < 3) fail("grid too small");
  const std::size_t width = grid_lines[0].size();
  for (const auto& l : grid_lines) {
    if (l.size() != width) fail("ragged grid");
  }
  for (char ch : grid_lines.front()) {
    if (ch != '#') fail("top border must be walls");
  }
  for (char ch : grid_lines.back()) {
    if (ch != '#') fail("bottom border must be walls");
  }

  GridMap m;
  m.rows = static_cast<int>(grid_lines.size()) - 2;
  m.cols = static_cast<int>(width) - 2;
  if (m.rows <= 0 || m.cols <= 0) fail("empty interior");
  m.grid.resize(static_cast<std::size_t>(m.rows));
  m.cell_id.assign(static_cast<std::size_t>(m.rows) * m.cols, -1);

  std::vector<std::pair<int, int>> digit_states;  // (digit, state id)
  for (int r = 0; r < m.rows; ++r) {
    const std::string& l = grid_lines[static_cast<std::size_t>(r) + 1];
    if (l.front() != '#' || l.back() != '#') fail("side borders must be walls");
    m.grid[static_cast<std::size_t>(r)] = l.substr(1, static_cast<std::size_t>(m.cols));
    for (int c = 0; c < m.cols; ++c) {
      const char ch = m.grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      if (ch == '#') continue;
      if (ch != '.' && ch != 'H' && ch != 'S' && !(ch >= '1' && ch <= '9')) {
        fail(std::string("unknown cell character '") + ch + "'");
      }
      const int id = static_cast<int>(m.cells.size());
      m.cells.emplace_back(r, c);
      m.cell_id[static_cast<std::size_t>(r) * m.cols + c] = id;
      if (ch == 'H') m.hallway_ids.push_back(id);
      if (ch == 'S') {
        if (m.start_id >= 0) fail("multiple start cells");
        m.start_id = id;
      }
      if (ch >= '1' && ch <= '9') digit_states.emplace_back(ch - '0', id);
    }
  }
  if (m.start_id < 0) fail("missing start cell 'S'");

  // Trailing "d:A" tokens assign the designated action of each digit state.
  std::vector<int> digit_action(10, -1);
  for (const auto& l : extra_lines) {
    std::istringstream toks(l);
    std::string tok;
    while (toks >> tok) {
      if (tok.size() != 3 || tok[1] != ':' || !std::isdigit(tok[0])) {
        fail("bad action token '" + tok + "' (want d:A)");
      }
      const char* pos = std::strchr(kActionLetters, tok[2]);
      if (pos == nullptr) fail("bad action letter in '" + tok + "'");
      digit_action[static_cast<std::size_t>(tok[0] - '0')] =
          static_cast<int>(pos - kActionLetters);
    }
  }
  std::sort(digit_states.begin(), digit_states.end());
  for (const auto& [digit, id] : digit_states) {
    if (digit_action[static_cast<std::size_t>(digit)] < 0) {
      fail("digit state " + std::to_string(digit) + " has no action token");
    }
    m.hv.emplace_back(id, digit_action[static_cast<std::size_t>(digit)]);
  }

  // Rooms: connected components of free cells with hallways removed.
  m.room_of.assign(m.cells.size(), -1);
  for (int h : m.hallway_ids) m.room_of[static_cast<std::size_t>(h)] = -2;
  for (int s = 0; s < m.n_states(); ++s) {
    if (m.room_of[static_cast<std::size_t>(s)] != -1) continue;
    const int room = m.n_rooms++;
    std::deque<int> q{s};
    m.room_of[static_cast<std::size_t>(s)] = room;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int a = 0; a < kNumActions; ++a) {
        const int v = m.step_cell(u, a);
        if (m.room_of[static_cast<std::size_t>(v)] == -1) {
          m.room_of[static_cast<std::size_t>(v)] = room;
          q.push_back(v);
        }
      }
    }
  }
  for (int h : m.hallway_ids) m.room_of[static_cast<std::size_t>(h)] = -1;
  return m;
}

const std::string& GridMap::default_map_text() {
  static const std::string text =
      "#############\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "#...1.H.2...#\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "##H####.....#\n"
      "#.....###H###\n"
      "#.....#.....#\n"
      "#.....#.....#\n"
      "#...3.H.4...#\n"
      "#S....#.....#\n"
      "#############\n"
      "1:R 2:L 3:R 4:L\n";
  return text;
}

std::vector<int> bfs_distance(const GridMap& m, int goal_id) {
  std::vector<int> dist(m.cells.size(), -1);
  std::deque<int> q{goal_id};
  dist[static_cast<std::size_t>(goal_id)] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int a = 0; a < kNumActions; ++a) {
      const int v = m.step_cell(u, a);
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push_back(v);
      }
    }
  }
  return dist;
}

TabularPolicy shortest_path_policy(const GridMap& m, int goal_id) {
  const std::vector<int> dist = bfs_distance(m, goal_id);
  TabularPolicy pi(m.n_states(), kNumActions);
  for (int s = 0; s < m.n_states(); ++s) {
    if (s == goal_id) {
      for (int a = 0; a < kNumActions; ++a) pi.set(s, a, 0.25);
      continue;
    }
    if (dist[static_cast<std::size_t>(s)] < 0) fail("goal unreachable");
    std::vector<int> best;
    for (int a = 0; a < kNumActions; ++a) {
      const int v = m.step_cell(s, a);
      if (v != s && dist[static_cast<std::size_t>(v)] ==
                        dist[static_cast<std::size_t>(s)] - 1) {
        best.push_back(a);
      }
    }
    if (best.empty()) fail("no distance-decreasing action");
    for (int a : best) pi.set(s, a, 1.0 / static_cast<double>(best.size()));
  }
  return pi;
}

TabularPolicy equiprobable_policy(const GridMap& m) {
  TabularPolicy b(m.n_states(), kNumActions);
  for (int s = 0; s < m.n_states(); ++s) {
    for (int a = 0; a < kNumActions; ++a) b.set(s, a, 0.25);
  }
  return b;
}

TabularPolicy high_variance_policy(const GridMap& m) {
  if (m.hv.empty()) fail("no high-variance states marked on the map");
  TabularPolicy b = equiprobable_policy(m);
  for (const auto& [id, act] : m.hv) {
    for (int a = 0; a < kNumActions; ++a) {
      b.set(id, a, a == act ? 0.97 : 0.01);
    }
  }
  return b;
}

Dynamics dynamics(const GridMap& m) {
  Dynamics dyn(m.n_states(), kNumActions);
  for (int s = 0; s < m.n_states(); ++s) {
    for (int a = 0; a < kNumActions; ++a) {
      dyn.at(s, a) = {{m.step_cell(s, a), 1.0}};
    }
  }
  return dyn;
}

TileCoder::TileCoder(int tilings_, double width_, int rows_, int cols_)
    : tilings(tilings_), tile_width(width_), rows(rows_), cols(cols_) {
  const double max_off =
      (tilings - 1) * tile_width / static_cast<double>(tilings);
  tiles_r_ = static_cast<int>(std::floor(((rows - 1) + max_off) / tile_width)) + 1;
  tiles_c_ = static_cast<int>(std::floor(((cols - 1) + max_off) / tile_width)) + 1;
}

FeatureVector TileCoder::encode(int r, int c) const {
  FeatureVector f;
  f.dim = dim();
  f.idx.reserve(static_cast<std::size_t>(tilings));
  for (int k = 0; k < tilings; ++k) {
    const double off = k * tile_width / static_cast<double>(tilings);
    const int tr = static_cast<int>(std::floor((r + off) / tile_width));
    const int tc = static_cast<int>(std::floor((c + off) / tile_width));
    f.idx.push_back(k * tiles_r_ * tiles_c_ + tr * tiles_c_ + tc);
  }
  return f;
}

std::vector<FeatureVector> make_features(const GridMap& m,
                                         const TileCoder& coder) {
  std::vector<FeatureVector> feats;
  feats.reserve(m.cells.size());
  for (const auto& [r, c] : m.cells) feats.push_back(coder.encode(r, c));
  return feats;
}

std::vector<GvfSpec> make_gvfs(const GridMap& m) {
  std::vector<GvfSpec> gvfs;
  const int na = kNumActions;
  for (int room = 0; room < m.n_rooms; ++room) {
    for (int h : m.hallway_ids) {
      bool adjacent = false;
      for (int a = 0; a < na && !adjacent; ++a) {
        const int v = m.step_cell(h, a);
        adjacent = v != h && m.room_of[static_cast<std::size_t>(v)] == room;
      }
      if (!adjacent) continue;

      GvfSpec g;
      const auto [hr, hc] = m.cells[static_cast<std::size_t>(h)];
      g.name = "room" + std::to_string(room) + "@" + std::to_string(hr) + "-" +
               std::to_string(hc);
      g.target = shortest_path_policy(m, h);
      g.cumulant.assign(static_cast<std::size_t>(m.n_states()) * na, 0.0);
      g.discount.assign(static_cast<std::size_t>(m.n_states()) * na, 0.0);
      g.interest.assign(static_cast<std::size_t>(m.n_states()), 0.0);
      for (int s = 0; s < m.n_states(); ++s) {
        const bool in_room = m.room_of[static_cast<std::size_t>(s)] == room;
        if (in_room) g.interest[static_cast<std::size_t>(s)] = 1.0;
        for (int a = 0; a < na; ++a) {
          const int v = m.step_cell(s, a);
          const std::size_t k = static_cast<std::size_t>(s) * na + a;
          if (in_room && v == h) g.cumulant[k] = 1.0;
          if (in_room && m.room_of[static_cast<std::size_t>(v)] == room) {
            g.discount[k] = kGamma;
          }
        }
      }
      gvfs.push_back(std::move(g));
    }
  }
  return gvfs;
}

}  // namespace offtd::fourrooms
