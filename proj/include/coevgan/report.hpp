#pragma once

#include <istream>
#include <ostream>
#include <string>

#include "coevgan/heatmaps.hpp"

namespace coevgan {

/// Comment lines (`# ...`) first, then `rows\cols,c0,c1,...` and one line per row.
void write_heatmap_csv(const HeatmapResult& h, std::ostream& out, const std::string& header = "");
/// Inverse of write_heatmap_csv; comments are skipped. Malformed input throws
/// ConfigError with field "input".
HeatmapResult read_heatmap_csv(std::istream& in);

/// Plain (P2) graymap, 1.0 -> white. Each matrix entry becomes a cell_pixels square;
/// the first matrix row is the top of the image. `header` lines become PGM comments.
std::string render_pgm(const HeatmapResult& h, int cell_pixels, const std::string& header = "");

/// Fixed-width text rendering of a heatmap.
std::string render_heatmap_table(const HeatmapResult& h);
/// Any comma-separated table (comments skipped) as aligned columns.
std::string render_csv_table(std::istream& in);

/// True when the first data line looks like a heatmap header.
bool looks_like_heatmap(std::istream& in);

}  // namespace coevgan
