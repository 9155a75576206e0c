#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coevgan/backend.hpp"
#include "coevgan/grid.hpp"
#include "coevgan/rng.hpp"

namespace coevgan {

enum class Role { Generator, Discriminator };

/// One network. `fitness` is a cached minimize-me average loss for either role.
struct Individual {
  Role role = Role::Generator;
  Params params;
  double learning_rate = 1e-3;
  double fitness = 0.0;

  bool operator==(const Individual&) const = default;
};

/// Sub-populations around one cell; index 0 holds the cell's own (center) networks.
/// The cell's learning rate n_delta is carried by its center individuals.
struct NeighborhoodState {
  GridCoord cell;
  std::vector<Individual> generators;
  std::vector<Individual> discriminators;

  std::size_t size() const { return generators.size(); }
  double learning_rate() const { return generators.at(0).learning_rate; }
  void validate() const;
};

enum class Method { Lipizzaner, SPaGAN, IsoCoGAN, PaGAN };

std::string to_string(Method m);
/// Case-insensitive; throws std::invalid_argument on an unknown name.
Method parse_method(const std::string& name);
bool method_migrates(Method m);
bool method_selects(Method m);

struct TrainConfig {
  int epochs = 5;                      // T
  std::size_t tournament_size = 2;     // tau
  double lr_mutation_prob = 0.5;       // beta
  double lr_mutation_scale = 0.01;
  double initial_learning_rate = 0.05;
  Method method = Method::Lipizzaner;

  void validate(std::size_t subpopulation) const;
};

/// Instrumentation counters. Every field is a plain event count.
struct Counters {
  std::uint64_t pairwise_evaluations = 0;
  std::uint64_t gradient_updates = 0;
  std::uint64_t migrations = 0;
  std::uint64_t selections = 0;

  Counters& operator+=(const Counters& o);
  bool operator==(const Counters&) const = default;
};

/// Entry (i, j) is generator i against discriminator j. `generator` holds the
/// generator's loss, `discriminator` the discriminator's own loss.
struct LossMatrix {
  nn::Matrix generator;
  nn::Matrix discriminator;
};

struct Fitness {
  std::vector<double> generators;
  std::vector<double> discriminators;
};

/// |gens| x |discs| backend evaluations, each counted once.
LossMatrix evaluate_all_pairs(const Backend& backend, std::span<const Individual> gens,
                              std::span<const Individual> discs, const nn::MiniBatch& batch,
                              Counters& counters);

/// Generator i: mean of row i of the generator losses. Discriminator j: mean of
/// column j of the discriminator losses.
Fitness fitness_from_matrix(const LossMatrix& m);
/// Single adversarial matrix (the generator minimizes it, the discriminator maximizes
/// it); discriminator fitness is the negated column mean.
Fitness fitness_from_matrix(const nn::Matrix& adversarial);

/// Best of `tau` distinct contestants drawn uniformly; lowest index wins ties.
std::size_t tournament_select(std::span<const double> fitness, std::size_t tau, Rng& rng);

/// Worst member of each role is overwritten by a copy of the best, then the best is
/// swapped into index 0. Ties resolve to the lowest index. Fitnesses are cached on
/// the individuals.
NeighborhoodState replace_and_center(NeighborhoodState neigh, const Fitness& fitness);

/// With probability beta: lr * exp(scale * N(0,1)), clamped to [1e-6, 1].
double mutate_learning_rate(double lr, double beta, double scale, Rng& rng);

/// Trains only the center pair, each against a uniformly drawn adversary, once per batch.
NeighborhoodState spagan_epoch(NeighborhoodState neigh, const Backend& backend,
                               std::span<const nn::MiniBatch> batches, const TrainConfig& cfg,
                               Rng& rng, Counters& counters);

/// Evaluate, select, train every member, re-evaluate, replace the worst, recenter.
NeighborhoodState coevolutionary_epoch(NeighborhoodState neigh, const Backend& backend,
                                       std::span<const nn::MiniBatch> batches,
                                       const TrainConfig& cfg, Rng& rng, Counters& counters);

/// Fresh single-pair state for a cell, initialized from `rng`.
NeighborhoodState init_cell(const GridCoord& cell, const Backend& backend, double learning_rate,
                            Rng& rng);

/// The random stream a cell uses for initialization and training.
Rng cell_rng(std::uint64_t master_seed, const GridCoord& cell);

/// `n` independent GAN pairs trained for cfg.epochs with no exchange. Pair k uses the
/// stream of cell (k / width, k % width) for width = ceil(sqrt(n)), so it matches the
/// grid runtime. `launch_order` permutes the processing order only.
std::vector<NeighborhoodState> pagan_train(const Backend& backend, const TrainConfig& cfg,
                                           std::size_t n, std::uint64_t master_seed,
                                           Counters& counters,
                                           std::span<const std::size_t> launch_order = {});

/// `n` subsets of size `s` of {0..n-1}, each drawn without replacement.
std::vector<std::vector<std::size_t>> bootstrap_subpopulations(std::size_t n, std::size_t s, Rng& rng);

}  // namespace coevgan
