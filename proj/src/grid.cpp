#include "behex/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "behex/rng.hpp"

namespace behex::world {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, double fill)
    : width_(width), height_(height), resolution_(resolution) {
  if (width < 1 || height < 1) throw std::domain_error("OccupancyGrid: positive dimensions");
  if (!(resolution > 0.0)) throw std::domain_error("OccupancyGrid: positive resolution");
  if (!(fill >= 0.0 && fill <= 100.0)) throw std::domain_error("OccupancyGrid: fill in [0,100]");
  values_.assign(static_cast<std::size_t>(width) * height, fill);
}

void OccupancyGrid::set(int x, int y, double v) {
  if (!in_bounds(x, y)) throw std::out_of_range("OccupancyGrid::set: out of bounds");
  if (!(v >= 0.0 && v <= 100.0)) throw std::domain_error("OccupancyGrid::set: value in [0,100]");
  values_[idx(x, y)] = v;
}

double OccupancyGrid::diagonal() const {
  return std::hypot(static_cast<double>(width_), static_cast<double>(height_)) * resolution_;
}

bool OccupancyGrid::is_ground_truth() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0 || v == 100.0; });
}

GridParseError::GridParseError(int line_no, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}

OccupancyGrid parse_grid(std::istream& in) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw GridParseError(1, "missing OGRID header");
  ++line_no;
  std::istringstream hs(line);
  std::string magic;
  int w = 0, h = 0;
  double res = 0.0;
  if (!(hs >> magic >> w >> h >> res) || magic != "OGRID")
    throw GridParseError(line_no, "expected 'OGRID <width> <height> <resolution>'");
  if (w < 1 || h < 1 || !(res > 0.0)) throw GridParseError(line_no, "bad grid dimensions");

  OccupancyGrid grid(w, h, res);
  for (int y = 0; y < h; ++y) {
    if (!std::getline(in, line)) throw GridParseError(line_no + 1, "unexpected end of file");
    ++line_no;
    std::istringstream ls(line);
    for (int x = 0; x < w; ++x) {
      double v;
      if (!(ls >> v)) throw GridParseError(line_no, "expected " + std::to_string(w) + " values");
      if (!(v >= 0.0 && v <= 100.0))
        throw GridParseError(line_no, "value out of range [0,100]");
      grid.set(x, y, v);
    }
    double extra;
    if (ls >> extra) throw GridParseError(line_no, "too many values on row");
  }
  return grid;
}

void write_grid(const OccupancyGrid& grid, std::ostream& out) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", grid.resolution());
  out << "OGRID " << grid.width() << ' ' << grid.height() << ' ' << buf << '\n';
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      std::snprintf(buf, sizeof buf, "%.17g", grid.at(x, y));
      out << (x ? " " : "") << buf;
    }
    out << '\n';
  }
}

OccupancyGrid load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_grid_file: cannot open " + path);
  return parse_grid(in);
}

void save_grid_file(const OccupancyGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_grid_file: cannot open " + path);
  write_grid(grid, out);
  if (!out) throw std::runtime_error("save_grid_file: write failed for " + path);
}

MapKind map_kind_from_string(const std::string& s) {
  if (s == "open") return MapKind::kOpen;
  if (s == "rooms") return MapKind::kRooms;
  if (s == "corridors") return MapKind::kCorridors;
  throw std::domain_error("unknown map kind: " + s);
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kOpen: return "open";
    case MapKind::kRooms: return "rooms";
    case MapKind::kCorridors: return "corridors";
  }
  return "?";
}

bool free_space_connected(const OccupancyGrid& grid) {
  const int w = grid.width(), h = grid.height();
  int total_free = 0;
  Cell start{-1, -1};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (grid.at(x, y) == 0.0) {
        ++total_free;
        if (start.x < 0) start = {x, y};
      }
  if (total_free == 0) return false;
  std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
  std::deque<Cell> q{start};
  seen[static_cast<std::size_t>(start.y) * w + start.x] = 1;
  int reached = 0;
  while (!q.empty()) {
    const Cell c = q.front();
    q.pop_front();
    ++reached;
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int nx = c.x + dx[d], ny = c.y + dy[d];
      if (!grid.in_bounds(nx, ny) || grid.at(nx, ny) != 0.0) continue;
      auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
      if (!s) {
        s = 1;
        q.push_back({nx, ny});
      }
    }
  }
  return reached == total_free;
}

namespace {

void draw_border(OccupancyGrid& g) {
  for (int x = 0; x < g.width(); ++x) {
    g.set(x, 0, 100.0);
    g.set(x, g.height() - 1, 100.0);
  }
  for (int y = 0; y < g.height(); ++y) {
    g.set(0, y, 100.0);
    g.set(g.width() - 1, y, 100.0);
  }
}

// Recursive binary partition with door gaps; walls one cell thick.
void split_rooms(OccupancyGrid& g, Rng& rng, int x0, int y0, int x1, int y1, int depth) {
  const int w = x1 - x0 + 1, h = y1 - y0 + 1;
  const int min_room = 7;
  if (depth <= 0 || (w < 2 * min_room + 1 && h < 2 * min_room + 1)) return;
  const bool vertical = (w == h) ? rng.uniform() < 0.5 : (w > h);
  if (vertical && w < 2 * min_room + 1) return;
  if (!vertical && h < 2 * min_room + 1) return;
  if (vertical) {
    const int wx = rng.uniform_int(x0 + min_room, x1 - min_room);
    const int door = rng.uniform_int(y0, y1 - 1);
    for (int y = y0; y <= y1; ++y)
      if (y != door && y != door + 1) g.set(wx, y, 100.0);
    split_rooms(g, rng, x0, y0, wx - 1, y1, depth - 1);
    split_rooms(g, rng, wx + 1, y0, x1, y1, depth - 1);
  } else {
    const int wy = rng.uniform_int(y0 + min_room, y1 - min_room);
    const int door = rng.uniform_int(x0, x1 - 1);
    for (int x = x0; x <= x1; ++x)
      if (x != door && x != door + 1) g.set(x, wy, 100.0);
    split_rooms(g, rng, x0, y0, x1, wy - 1, depth - 1);
    split_rooms(g, rng, x0, wy + 1, x1, y1, depth - 1);
  }
}

OccupancyGrid make_open(int w, int h, double res) {
  OccupancyGrid g(w, h, res, 0.0);
  draw_border(g);
  return g;
}

OccupancyGrid make_rooms(int w, int h, double res, Rng& rng) {
  OccupancyGrid g(w, h, res, 0.0);
  draw_border(g);
  split_rooms(g, rng, 1, 1, w - 2, h - 2, 5);
  return g;
}

// Randomized-DFS maze on a coarse lattice, carved as 2-cell-wide corridors.
OccupancyGrid make_corridors(int w, int h, double res, Rng& rng) {
  OccupancyGrid g(w, h, res, 100.0);
  const int step = 3;
  const int cols = (w - 3) / step + 1, rows = (h - 3) / step + 1;
  auto carve = [&](int cx, int cy) {
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) g.set(1 + cx * step + dx, 1 + cy * step + dy, 0.0);
  };
  auto carve_between = [&](int ax, int ay, int bx, int by) {
    const int x0 = 1 + std::min(ax, bx) * step, x1 = 1 + std::max(ax, bx) * step + 1;
    const int y0 = 1 + std::min(ay, by) * step, y1 = 1 + std::max(ay, by) * step + 1;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x) g.set(x, y, 0.0);
  };
  std::vector<char> seen(static_cast<std::size_t>(cols) * rows, 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  seen[0] = 1;
  carve(0, 0);
  while (!stack.empty()) {
    auto [cx, cy] = stack.back();
    std::vector<std::pair<int, int>> nbrs;
    const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int nx = cx + dx[d], ny = cy + dy[d];
      if (nx < 0 || nx >= cols || ny < 0 || ny >= rows) continue;
      if (!seen[static_cast<std::size_t>(ny) * cols + nx]) nbrs.emplace_back(nx, ny);
    }
    if (nbrs.empty()) {
      stack.pop_back();
      continue;
    }
    const auto [nx, ny] = nbrs[rng.uniform_int(0, static_cast<int>(nbrs.size()) - 1)];
    seen[static_cast<std::size_t>(ny) * cols + nx] = 1;
    carve(nx, ny);
    carve_between(cx, cy, nx, ny);
    stack.emplace_back(nx, ny);
  }
  return g;
}

}  // namespace

OccupancyGrid generate_map(MapKind kind, int width, int height, std::uint64_t seed,
                           double resolution) {
  if (width < 20 || height < 20) throw std::domain_error("generate_map: size must be >= 20x20");
  for (int attempt = 0; attempt < 32; ++attempt) {
    Rng rng(Rng::mix(seed, {static_cast<std::uint64_t>(attempt)}));
    OccupancyGrid g;
    switch (kind) {
      case MapKind::kOpen: g = make_open(width, height, resolution); break;
      case MapKind::kRooms: g = make_rooms(width, height, resolution, rng); break;
      case MapKind::kCorridors: g = make_corridors(width, height, resolution, rng); break;
    }
    if (free_space_connected(g)) return g;
  }
  throw std::runtime_error("generate_map: failed to produce connected free space");
}

}  // namespace behex::world
