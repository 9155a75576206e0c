#pragma once

#include <array>
#include <cstddef>
#include <compare>
#include <string>
#include <vector>

namespace coevgan {

/// Cell address on the toroidal grid. Row-major ordering is used for all tie rules.
struct GridCoord {
  int row = 0;
  int col = 0;

  auto operator<=>(const GridCoord&) const = default;
};

std::string to_string(const GridCoord& c);

/// Square torus with one generator/discriminator pair per cell.
struct GridConfig {
  static constexpr int kNeighborhoodSize = 5;

  int grid_dim = 1;

  int population_size() const { return grid_dim * grid_dim; }
  bool contains(const GridCoord& c) const {
    return c.row >= 0 && c.row < grid_dim && c.col >= 0 && c.col < grid_dim;
  }
  /// Row-major index of `c`.
  std::size_t index_of(const GridCoord& c) const;
  GridCoord coord_of(std::size_t index) const;
  std::vector<GridCoord> all_cells() const;
};

using Neighborhood = std::array<GridCoord, GridConfig::kNeighborhoodSize>;

/// [center, west, north, east, south] with wraparound on both axes.
/// Grids smaller than 3x3 produce repeated coordinates.
Neighborhood neighborhood(const GridCoord& center, const GridConfig& cfg);

/// Cells whose neighborhood contains `center`, sorted row-major, without duplicates.
std::vector<GridCoord> overlap_listeners(const GridCoord& center, const GridConfig& cfg);

}  // namespace coevgan
