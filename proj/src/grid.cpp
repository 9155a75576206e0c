#include "coevgan/grid.hpp"

#include <algorithm>
#include <stdexcept>

namespace coevgan {

std::string to_string(const GridCoord& c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

std::size_t GridConfig::index_of(const GridCoord& c) const {
  if (!contains(c)) throw std::domain_error("grid coordinate out of range: " + to_string(c));
  return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(grid_dim) +
         static_cast<std::size_t>(c.col);
}

GridCoord GridConfig::coord_of(std::size_t index) const {
  if (index >= static_cast<std::size_t>(population_size()))
    throw std::domain_error("cell index out of range: " + std::to_string(index));
  const auto m = static_cast<std::size_t>(grid_dim);
  return {static_cast<int>(index / m), static_cast<int>(index % m)};
}

std::vector<GridCoord> GridConfig::all_cells() const {
  std::vector<GridCoord> cells;
  cells.reserve(static_cast<std::size_t>(population_size()));
  for (int r = 0; r < grid_dim; ++r)
    for (int c = 0; c < grid_dim; ++c) cells.push_back({r, c});
  return cells;
}

Neighborhood neighborhood(const GridCoord& center, const GridConfig& cfg) {
  if (cfg.grid_dim < 1) throw std::domain_error("grid dimension must be >= 1");
  if (!cfg.contains(center))
    throw std::domain_error("grid coordinate out of range: " + to_string(center));
  const int m = cfg.grid_dim;
  auto wrap = [m](int v) { return ((v % m) + m) % m; };
  return {{
      center,
      {center.row, wrap(center.col - 1)},
      {wrap(center.row - 1), center.col},
      {center.row, wrap(center.col + 1)},
      {wrap(center.row + 1), center.col},
  }};
}

std::vector<GridCoord> overlap_listeners(const GridCoord& center, const GridConfig& cfg) {
  if (!cfg.contains(center))
    throw std::domain_error("grid coordinate out of range: " + to_string(center));
  std::vector<GridCoord> out;
  for (const auto& cell : cfg.all_cells()) {
    const auto n = neighborhood(cell, cfg);
    if (std::find(n.begin(), n.end(), center) != n.end()) out.push_back(cell);
  }
  return out;
}

}  // namespace coevgan
