#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace behex::world {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
};

// Dense 2D occupancy map. Values live in [0,100]: 0 free, 100 obstacle,
// anything between is uncertain. Row y = 0 is the first line of the OGRID
// file (top of the map). Ground-truth grids contain only {0, 100}.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution = 0.1, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t size() const { return values_.size(); }

  bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
  bool in_bounds(Cell c) const { return in_bounds(c.x, c.y); }

  double at(int x, int y) const { return values_[idx(x, y)]; }
  double at(Cell c) const { return at(c.x, c.y); }
  void set(int x, int y, double v);
  void set(Cell c, double v) { set(c.x, c.y, v); }

  const std::vector<double>& values() const { return values_; }

  // Euclidean length of the map diagonal, in map units.
  double diagonal() const;

  bool is_ground_truth() const;  // every value exactly 0 or 100

  bool operator==(const OccupancyGrid&) const = default;

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.1;
  std::vector<double> values_;
};

struct GridParseError : std::runtime_error {
  int line;
  GridParseError(int line_no, const std::string& what);
};

// ASCII grid format: header "OGRID <width> <height> <resolution>" followed
// by `height` lines of `width` space-separated values in [0,100]. Values are
// written with 17 significant digits so a save/load round trip is bit-exact.
OccupancyGrid load_grid_file(const std::string& path);
void save_grid_file(const OccupancyGrid& grid, const std::string& path);
OccupancyGrid parse_grid(std::istream& in);
void write_grid(const OccupancyGrid& grid, std::ostream& out);

enum class MapKind { kOpen, kRooms, kCorridors };
MapKind map_kind_from_string(const std::string& s);
std::string to_string(MapKind kind);

// Ground-truth map generator: {0,100} values, connected free space (checked
// by flood fill; throws after repeated failures). Deterministic in the seed.
OccupancyGrid generate_map(MapKind kind, int width, int height, std::uint64_t seed,
                           double resolution = 0.1);

// Flood-fill check used by generate_map and the tests.
bool free_space_connected(const OccupancyGrid& grid);

}  // namespace behex::world
