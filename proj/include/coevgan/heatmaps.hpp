#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coevgan/config.hpp"

namespace coevgan {

/// Success probability per initialization cell. matrix[i][j] belongs to
/// (row_axis[i], col_axis[j]).
struct HeatmapResult {
  std::string row_label;
  std::string col_label;
  std::vector<double> row_axis;
  std::vector<double> col_axis;
  std::vector<std::vector<double>> matrix;
  int repetitions = 0;

  void validate() const;
  double mean() const;
  /// Mean over cells with row_axis[i] == col_axis[j].
  double diagonal_mean() const;
};

/// lo, lo + step, ... up to hi (inclusive, with a small tolerance for rounding).
std::vector<double> heatmap_axis(double lo, double hi, double step);

/// Mean success per sign quadrant of (row, col); a zero axis value counts as positive.
struct QuadrantSummary {
  double neg_neg = 0.0;
  double neg_pos = 0.0;
  double pos_neg = 0.0;
  double pos_pos = 0.0;
};
QuadrantSummary quadrant_summary(const HeatmapResult& h);

/// Generator means start uniformly within +-step/2 of (mu1, mu2); success when the
/// best final generator lies within success_threshold of the target.
HeatmapResult mode_collapse_heatmap(const ModeHeatmapSpec& spec, std::uint64_t seed, unsigned workers = 0);

/// Generators stay frozen; discriminator bounds (l1, r1) start within +-step/2 of the
/// row value and (l2, r2) of the column value. Success when the best final
/// discriminator captures at least escape_threshold of the target mass.
HeatmapResult discriminator_collapse_heatmap(const DiscHeatmapSpec& spec, std::uint64_t seed,
                                             unsigned workers = 0);

}  // namespace coevgan
