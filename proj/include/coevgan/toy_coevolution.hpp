#pragma once

#include <cstddef>
#include <vector>

#include "coevgan/rng.hpp"
#include "coevgan/toy_model.hpp"

namespace coevgan::toy {

enum class FitnessAggregate { WorstCase, Mean };

/// All-vs-all competitive coevolution of two fixed-size populations with
/// tournament selection, Gaussian mutation and (mu + lambda) replacement.
struct SimpleCoevConfig {
  std::size_t population = 10;
  int generations = 100;
  std::size_t tournament_size = 3;
  double step = 1.0;
  /// Per-coordinate mutation probability; at least one coordinate always moves.
  double gene_probability = 0.5;
  FitnessAggregate generator_fitness = FitnessAggregate::WorstCase;
  FitnessAggregate discriminator_fitness = FitnessAggregate::Mean;
  bool train_generators = true;
  bool train_discriminators = true;
};

struct SimpleCoevResult {
  ToyGenerator best_generator;
  ToyDiscriminator best_discriminator;
  double best_generator_fitness = 0.0;
  double best_discriminator_fitness = 0.0;
  std::vector<ToyGenerator> generators;
  std::vector<ToyDiscriminator> discriminators;
  std::size_t loss_evaluations = 0;
};

/// Fitness values are stored as minimize-me scalars for both roles: a generator's
/// fitness aggregates toy_loss over the discriminators, a discriminator's aggregates
/// -toy_loss over the generators.
SimpleCoevResult run_simple_coevolution(const ToyTarget& target,
                                        std::vector<ToyGenerator> generators,
                                        std::vector<ToyDiscriminator> discriminators,
                                        const SimpleCoevConfig& cfg, Rng& rng);

}  // namespace coevgan::toy
