#include "coevgan/heatmaps.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "coevgan/metrics.hpp"
#include "coevgan/parallel.hpp"
#include "coevgan/rng.hpp"

namespace coevgan {

void HeatmapResult::validate() const {
  if (matrix.size() != row_axis.size()) throw std::invalid_argument("heatmap rows do not match row axis");
  for (const auto& row : matrix) {
    if (row.size() != col_axis.size()) throw std::invalid_argument("heatmap columns do not match column axis");
    for (double v : row)
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("heatmap value outside [0, 1]");
  }
}

double HeatmapResult::mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& row : matrix)
    for (double v : row) sum += v, ++n;
  return n ? sum / static_cast<double>(n) : 0.0;
}

double HeatmapResult::diagonal_mean() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < row_axis.size(); ++i)
    for (std::size_t j = 0; j < col_axis.size(); ++j)
      if (row_axis[i] == col_axis[j]) sum += matrix[i][j], ++n;
  return n ? sum / static_cast<double>(n) : 0.0;
}

std::vector<double> heatmap_axis(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("heatmap step must be > 0");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> axis(n);
  // Multiply rather than accumulate so long axes hit their end points exactly.
  for (std::size_t k = 0; k < n; ++k) axis[k] = lo + static_cast<double>(k) * step;
  return axis;
}

QuadrantSummary quadrant_summary(const HeatmapResult& h) {
  double sum[2][2] = {};
  int count[2][2] = {};
  for (std::size_t i = 0; i < h.row_axis.size(); ++i)
    for (std::size_t j = 0; j < h.col_axis.size(); ++j) {
      const int a = h.row_axis[i] < 0.0 ? 0 : 1;
      const int b = h.col_axis[j] < 0.0 ? 0 : 1;
      sum[a][b] += h.matrix[i][j];
      ++count[a][b];
    }
  auto avg = [&](int a, int b) { return count[a][b] ? sum[a][b] / count[a][b] : 0.0; };
  return {avg(0, 0), avg(0, 1), avg(1, 0), avg(1, 1)};
}

namespace {

// Runs `trial(rng)` repetitions times per cell on a bounded pool; each (cell, rep)
// pair owns a derived stream so the matrix does not depend on scheduling.
template <class Trial>
HeatmapResult sweep(std::vector<double> rows, std::vector<double> cols, int reps, std::uint64_t seed,
                    unsigned workers, Trial trial) {
  HeatmapResult h;
  h.row_axis = std::move(rows);
  h.col_axis = std::move(cols);
  h.repetitions = reps;
  const std::size_t nr = h.row_axis.size(), nc = h.col_axis.size();
  h.matrix.assign(nr, std::vector<double>(nc, 0.0));
  parallel_for(nr * nc, workers, [&](std::size_t cell) {
    const std::size_t i = cell / nc, j = cell % nc;
    int hits = 0;
    for (int r = 0; r < reps; ++r) {
      Rng rng(derive_seed(seed, cell, static_cast<std::uint64_t>(r)));
      hits += trial(h.row_axis[i], h.col_axis[j], rng) ? 1 : 0;
    }
    h.matrix[i][j] = static_cast<double>(hits) / reps;
  });
  return h;
}

}  // namespace

HeatmapResult mode_collapse_heatmap(const ModeHeatmapSpec& spec, std::uint64_t seed, unsigned workers) {
  const auto axis = heatmap_axis(spec.lo, spec.hi, spec.step);
  const double half = spec.step / 2.0;
  auto h = sweep(axis, axis, spec.repetitions, seed, workers, [&](double a, double b, Rng& rng) {
    std::vector<toy::ToyGenerator> gens(spec.coev.population);
    for (auto& g : gens) g = {rng.uniform(a - half, a + half), rng.uniform(b - half, b + half)};
    std::vector<toy::ToyDiscriminator> discs(spec.coev.population);
    for (auto& d : discs) {
      std::array<double, 4> b4;
      for (auto& x : b4) x = rng.uniform(spec.disc_init_lo, spec.disc_init_hi);
      d = toy::ToyDiscriminator::from_unsorted(b4);
    }
    const auto res = toy::run_simple_coevolution(spec.target, gens, discs, spec.coev, rng);
    return toy::generator_distance(res.best_generator, spec.target) < spec.success_threshold;
  });
  h.row_label = "mu1";
  h.col_label = "mu2";
  return h;
}

HeatmapResult discriminator_collapse_heatmap(const DiscHeatmapSpec& spec, std::uint64_t seed, unsigned workers) {
  const auto axis = heatmap_axis(spec.lo, spec.hi, spec.step);
  const double half = spec.step / 2.0;
  auto coev = spec.coev;
  coev.train_generators = false;
  auto h = sweep(axis, axis, spec.repetitions, seed, workers, [&](double a, double b, Rng& rng) {
    std::vector<toy::ToyGenerator> gens(coev.population, spec.frozen_generator);
    std::vector<toy::ToyDiscriminator> discs(coev.population);
    for (auto& d : discs)
      d = toy::ToyDiscriminator::from_unsorted({rng.uniform(a - half, a + half), rng.uniform(a - half, a + half),
                                                rng.uniform(b - half, b + half), rng.uniform(b - half, b + half)});
    const auto res = toy::run_simple_coevolution(spec.target, gens, discs, coev, rng);
    return toy::expected_mass(spec.target, res.best_discriminator) >= spec.escape_threshold;
  });
  h.row_label = "left_interval";
  h.col_label = "right_interval";
  return h;
}

}  // namespace coevgan
