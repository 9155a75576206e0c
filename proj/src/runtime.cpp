#include "coevgan/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "coevgan/errors.hpp"

namespace coevgan {

SnapshotBoard::SnapshotBoard(GridConfig grid)
    : grid_(grid),
      slots_(static_cast<std::size_t>(grid.population_size())),
      writer_locks_(std::make_unique<std::mutex[]>(slots_.size())) {}

void SnapshotBoard::publish(CellSnapshot snap) {
  if (!grid_.contains(snap.cell)) throw std::domain_error("snapshot for a cell outside the grid");
  const auto idx = grid_.index_of(snap.cell);
  std::lock_guard lock(writer_locks_[idx]);
  const auto prev = std::atomic_load(&slots_[idx]);
  const int expected = prev ? prev->epoch + 1 : 0;
  if (snap.epoch != expected)
    throw std::logic_error("cell " + to_string(snap.cell) + " published stamp " +
                           std::to_string(snap.epoch) + ", expected " + std::to_string(expected));
  std::atomic_store(&slots_[idx], std::shared_ptr<const CellSnapshot>(
                                      std::make_shared<CellSnapshot>(std::move(snap))));
}

std::shared_ptr<const CellSnapshot> SnapshotBoard::latest(const GridCoord& cell) const {
  return std::atomic_load(&slots_[grid_.index_of(cell)]);
}

GatherResult gather(const SnapshotBoard& board, const NeighborhoodState& own, int expected_stamp) {
  own.validate();
  GatherResult r;
  r.state.cell = own.cell;
  r.state.generators.push_back(own.generators[0]);
  r.state.discriminators.push_back(own.discriminators[0]);
  const auto hood = neighborhood(own.cell, board.grid());
  for (std::size_t k = 1; k < hood.size(); ++k) {
    if (hood[k] == own.cell) continue;
    const auto snap = board.latest(hood[k]);
    if (!snap) throw std::logic_error("neighbor " + to_string(hood[k]) + " has not published yet");
    r.state.generators.push_back(snap->generator);
    r.state.discriminators.push_back(snap->discriminator);
    r.skew = std::max(r.skew, std::abs(expected_stamp - snap->epoch));
    ++r.migrations;
  }
  return r;
}

std::string to_string(ExecutionMode m) { return m == ExecutionMode::Lockstep ? "lockstep" : "async"; }

std::string to_string(MixtureScoring s) {
  return s == MixtureScoring::WeightedSum ? "weighted-sum" : "sampled-ensemble";
}

std::vector<Params> GridResult::center_generators() const {
  std::vector<Params> out;
  out.reserve(final_states.size());
  for (const auto& s : final_states) out.push_back(s.generators.at(0).params);
  return out;
}

Rng mixture_rng(std::uint64_t master_seed, const GridCoord& cell) {
  return Rng(derive_seed(mix_seed(master_seed ^ 0x6d69787475726521ULL), static_cast<std::uint64_t>(cell.row),
                         static_cast<std::uint64_t>(cell.col)));
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CellWorker {
  NeighborhoodState state;
  MixtureWeights weights;
  std::vector<double> generator_scores;
  double mixture_score = kNaN;
  Rng train{0};
  Rng mix{0};
  Counters counters;
  int gathers = 0;
  int skew = 0;
  std::vector<TraceRow> trace;
};

struct CellFailure {
  std::exception_ptr error;
  int epoch = 0;
};

MixtureEvolution evolve_cell_mixture(const Backend& backend, const std::vector<Params>& gens,
                                     const MixtureWeights& init, MixtureScoring scoring,
                                     const MixtureEvolutionConfig& mcfg, Rng& rng,
                                     std::vector<double>& scores_out) {
  scores_out.clear();
  for (const auto& g : gens) scores_out.push_back(backend.generator_score(g, rng));
  if (scoring == MixtureScoring::WeightedSum)
    return evolve_mixture(init, weighted_sum_scorer(scores_out), mcfg, rng);
  const MixtureScorer sampled = [&](const MixtureWeights& w) { return backend.ensemble_score(gens, w, rng); };
  return evolve_mixture(init, sampled, mcfg, rng);
}

std::vector<Params> generator_params(const NeighborhoodState& s) {
  std::vector<Params> out;
  for (const auto& g : s.generators) out.push_back(g.params);
  return out;
}

void run_epoch(CellWorker& w, int epoch, const Backend& backend, const GridRunConfig& cfg,
               const SnapshotBoard& board) {
  const bool migrate = method_migrates(cfg.method) || (cfg.method == Method::IsoCoGAN && epoch == 1);
  if (migrate) {
    auto g = gather(board, w.state, epoch - 1);
    w.state = std::move(g.state);
    w.counters.migrations += g.migrations;
    w.skew = std::max(w.skew, g.skew);
    ++w.gathers;
  }
  const auto batches = backend.epoch_batches(w.train);
  TrainConfig tc = cfg.train;
  tc.tournament_size = std::min(tc.tournament_size, w.state.size());
  const bool selects = method_selects(cfg.method);
  w.state = selects ? coevolutionary_epoch(std::move(w.state), backend, batches, tc, w.train, w.counters)
                    : spagan_epoch(std::move(w.state), backend, batches, tc, w.train, w.counters);

  TraceRow row{w.state.cell, epoch, kNaN, kNaN, kNaN};
  if (selects) {
    row.best_g_fitness = w.state.generators[0].fitness;
    row.best_d_fitness = w.state.discriminators[0].fitness;
  }
  if (cfg.method == Method::PaGAN) {
    // Mixtures are built only after training, from bootstrapped subsets.
    row.mixture_score = backend.generator_score(w.state.generators[0].params, w.mix);
  } else {
    if (w.weights.size() != w.state.size()) w.weights = MixtureWeights::uniform(w.state.size());
    const auto evo = evolve_cell_mixture(backend, generator_params(w.state), w.weights, cfg.scoring,
                                         cfg.mixture, w.mix, w.generator_scores);
    w.weights = evo.weights;
    w.mixture_score = row.mixture_score = evo.score;
  }
  w.trace.push_back(row);
}

CellSnapshot snapshot_of(const CellWorker& w, int epoch) {
  return {w.state.cell, w.state.generators[0], w.state.discriminators[0], epoch};
}

[[noreturn]] void rethrow_cell_failure(const GridCoord& cell, const CellFailure& f) {
  const std::string where = "cell " + to_string(cell) + " epoch " + std::to_string(f.epoch) + ": ";
  try {
    std::rethrow_exception(f.error);
  } catch (const NumericError& e) {
    throw NumericError(where + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(where + e.what());
  }
}

void run_lockstep(std::vector<CellWorker>& workers, const Backend& backend, const GridRunConfig& cfg,
                  SnapshotBoard& board) {
  const std::size_t n = workers.size();
  unsigned threads = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<CellFailure> failures(n);
  for (int epoch = 1; epoch <= cfg.train.epochs; ++epoch) {
    auto work = [&](unsigned t) {
      for (std::size_t i = t; i < n; i += threads) {
        try {
          run_epoch(workers[i], epoch, backend, cfg, board);
        } catch (...) {
          failures[i] = {std::current_exception(), epoch};
        }
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }
    for (std::size_t i = 0; i < n; ++i)
      if (failures[i].error) rethrow_cell_failure(board.grid().coord_of(i), failures[i]);
    // Barrier passed: publish in fixed row-major order.
    for (auto& w : workers) board.publish(snapshot_of(w, epoch));
  }
}

void run_async(std::vector<CellWorker>& workers, const Backend& backend, const GridRunConfig& cfg,
               SnapshotBoard& board) {
  const std::size_t n = workers.size();
  std::vector<CellFailure> failures(n);
  std::atomic<bool> abort{false};
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < n; ++i)
      pool.emplace_back([&, i] {
        for (int epoch = 1; epoch <= cfg.train.epochs && !abort.load(); ++epoch) {
          try {
            run_epoch(workers[i], epoch, backend, cfg, board);
            board.publish(snapshot_of(workers[i], epoch));
          } catch (...) {
            failures[i] = {std::current_exception(), epoch};
            abort.store(true);
            return;
          }
        }
      });
  }
  for (std::size_t i = 0; i < n; ++i)
    if (failures[i].error) rethrow_cell_failure(board.grid().coord_of(i), failures[i]);
}

}  // namespace

GridResult run_grid(const Backend& backend, const GridRunConfig& cfg) {
  if (cfg.grid_dim < 1) throw ConfigError("run.grid_dim", "must be >= 1");
  cfg.train.validate(std::max<std::size_t>(cfg.train.tournament_size, 1));
  if (cfg.train.tournament_size > static_cast<std::size_t>(GridConfig::kNeighborhoodSize))
    throw ConfigError("train.tournament_size", "must not exceed the neighborhood size 5");
  try {
    cfg.mixture.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError("mixture", e.what());
  }

  const GridConfig grid{cfg.grid_dim};
  const auto cells = grid.all_cells();
  SnapshotBoard board(grid);
  std::vector<CellWorker> workers(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& w = workers[i];
    w.train = cell_rng(cfg.seed, cells[i]);
    w.mix = mixture_rng(cfg.seed, cells[i]);
    w.state = init_cell(cells[i], backend, cfg.train.initial_learning_rate, w.train);
    w.weights = MixtureWeights::uniform(1);
    board.publish(snapshot_of(w, 0));
  }

  if (cfg.mode == ExecutionMode::Lockstep)
    run_lockstep(workers, backend, cfg, board);
  else
    run_async(workers, backend, cfg, board);

  GridResult r;
  r.config = cfg;
  for (auto& w : workers) {
    r.counters += w.counters;
    r.cell_counters.push_back(w.counters);
    r.gather_calls.push_back(w.gathers);
    r.max_epoch_skew = std::max(r.max_epoch_skew, w.skew);
    r.trace.insert(r.trace.end(), w.trace.begin(), w.trace.end());
    r.final_states.push_back(w.state);
  }
  std::stable_sort(r.trace.begin(), r.trace.end(), [&](const TraceRow& a, const TraceRow& b) {
    return a.epoch != b.epoch ? a.epoch < b.epoch : a.cell < b.cell;
  });

  if (cfg.method == Method::PaGAN) {
    const auto pool = r.center_generators();
    const std::size_t s = std::min<std::size_t>(GridConfig::kNeighborhoodSize, pool.size());
    Rng rng(derive_seed(cfg.seed, 0x626f6f74ULL));
    const auto subsets = bootstrap_subpopulations(pool.size(), s, rng);
    MixtureEvolutionConfig mcfg = cfg.mixture;
    mcfg.generations *= cfg.train.epochs;  // same total ES budget as the spatial methods
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      CellEnsemble e;
      e.cell = grid.coord_of(k);
      for (auto idx : subsets[k]) e.generators.push_back(pool[idx]);
      const auto evo = evolve_cell_mixture(backend, e.generators, MixtureWeights::uniform(s),
                                           cfg.scoring, mcfg, rng, e.generator_scores);
      e.weights = evo.weights;
      e.score = evo.score;
      r.ensembles.push_back(std::move(e));
    }
  } else {
    for (const auto& w : workers)
      r.ensembles.push_back({w.state.cell, generator_params(w.state), w.weights, w.generator_scores,
                             w.mixture_score});
  }
  const auto& best = best_ensemble(r.ensembles);
  r.best_index = static_cast<std::size_t>(&best - r.ensembles.data());
  return r;
}

RunMetrics evaluate_run(const Backend& backend, const GridResult& result) {
  RunMetrics m;
  const auto& best = result.best();
  Rng rng(derive_seed(result.config.seed, 0x6576616cULL));
  m.mixture_score = best.score;
  m.tvd = m.low_quality = kNaN;
  if (const auto* neural = dynamic_cast<const NeuralBackend*>(&backend)) {
    const auto a = neural->assess(
        neural->sample_ensemble(best.generators, best.weights, neural->config().score_samples, rng));
    m.tvd = ensemble_tvd(a);
    m.low_quality = a.low_quality_fraction();
    m.ensemble_score = m.tvd + m.low_quality;
  } else {
    m.ensemble_score = backend.ensemble_score(best.generators, best.weights, rng);
  }
  const auto centers = result.center_generators();
  m.l2 = l2_diversity(centers).stats;
  return m;
}

namespace {
std::string fmt_num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace

void write_progress_csv(const GridResult& result, std::ostream& out) {
  out << "cell,epoch,best_g_fitness,best_d_fitness,mixture_score\n";
  for (const auto& t : result.trace)
    out << t.cell.row << '-' << t.cell.col << ',' << t.epoch << ',' << fmt_num(t.best_g_fitness) << ','
        << fmt_num(t.best_d_fitness) << ',' << fmt_num(t.mixture_score) << '\n';
}

}  // namespace coevgan
