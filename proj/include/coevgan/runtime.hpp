#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "coevgan/backend.hpp"
#include "coevgan/coevolution.hpp"
#include "coevgan/grid.hpp"
#include "coevgan/mixture.hpp"

namespace coevgan {

/// The center pair a cell publishes at the end of an epoch. Epoch 0 is the initial state.
struct CellSnapshot {
  GridCoord cell;
  Individual generator;
  Individual discriminator;
  int epoch = 0;
};

/// One latest-snapshot slot per cell. Readers never block writers: a read returns
/// whichever complete snapshot was last installed.
class SnapshotBoard {
 public:
  explicit SnapshotBoard(GridConfig grid);

  /// Installs `snap` in its cell's slot. The stamp must be 0 for the first publication
  /// and previous + 1 afterwards; anything else throws std::logic_error.
  void publish(CellSnapshot snap);
  /// Null until the cell has published.
  std::shared_ptr<const CellSnapshot> latest(const GridCoord& cell) const;
  const GridConfig& grid() const { return grid_; }

 private:
  GridConfig grid_;
  std::vector<std::shared_ptr<const CellSnapshot>> slots_;
  std::unique_ptr<std::mutex[]> writer_locks_;
};

struct GatherResult {
  NeighborhoodState state;
  std::uint64_t migrations = 0;
  /// Largest |expected_stamp - observed stamp| over the gathered neighbors.
  int skew = 0;
};

/// Keeps `own`'s center pair and appends the latest center pair of each distinct
/// neighbor slot (W, N, E, S) other than the cell itself. On grids of side >= 3 this
/// yields five members and four migrations.
GatherResult gather(const SnapshotBoard& board, const NeighborhoodState& own, int expected_stamp);

enum class ExecutionMode { Lockstep, Async };
enum class MixtureScoring { WeightedSum, SampledEnsemble };

std::string to_string(ExecutionMode m);
std::string to_string(MixtureScoring s);

struct GridRunConfig {
  int grid_dim = 3;
  Method method = Method::Lipizzaner;
  TrainConfig train;
  MixtureEvolutionConfig mixture;
  MixtureScoring scoring = MixtureScoring::WeightedSum;
  ExecutionMode mode = ExecutionMode::Lockstep;
  std::uint64_t seed = 1;
  /// Lockstep worker threads; 0 picks min(cells, hardware threads).
  unsigned workers = 0;
};

struct TraceRow {
  GridCoord cell;
  int epoch = 0;
  double best_g_fitness = 0.0;
  double best_d_fitness = 0.0;
  double mixture_score = 0.0;
};

struct GridResult {
  GridRunConfig config;
  std::vector<NeighborhoodState> final_states;  // row-major, one per cell
  std::vector<CellEnsemble> ensembles;          // one per cell (per bootstrap subset for PaGAN)
  std::size_t best_index = 0;
  Counters counters;
  std::vector<Counters> cell_counters;
  std::vector<int> gather_calls;
  std::vector<TraceRow> trace;  // sorted by (epoch, cell)
  int max_epoch_skew = 0;

  const CellEnsemble& best() const { return ensembles.at(best_index); }
  /// Final center generator of every cell, row-major.
  std::vector<Params> center_generators() const;
};

/// Runs every cell for cfg.train.epochs epochs of {gather, train, evolve mixture}.
/// A failing cell aborts the run; the rethrown error names the cell and epoch and keeps
/// the NumericError type when that was the cause.
GridResult run_grid(const Backend& backend, const GridRunConfig& cfg);

/// Headline numbers of a finished run.
struct RunMetrics {
  double ensemble_score = 0.0;  // backend ensemble score of the best ensemble
  double tvd = 0.0;             // neural backend only, NaN otherwise
  double low_quality = 0.0;     // neural backend only, NaN otherwise
  double mixture_score = 0.0;   // evolved score of the best ensemble
  SummaryStats l2;              // over final center generators of all cells
};

/// Scores the best ensemble with a stream derived from the run seed.
RunMetrics evaluate_run(const Backend& backend, const GridResult& result);

/// Mixture-weight stream of a cell, independent of its training stream.
Rng mixture_rng(std::uint64_t master_seed, const GridCoord& cell);

/// `cell,epoch,best_g_fitness,best_d_fitness,mixture_score` rows.
void write_progress_csv(const GridResult& result, std::ostream& out);

}  // namespace coevgan
