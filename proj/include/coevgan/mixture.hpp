#pragma once

#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "coevgan/grid.hpp"
#include "coevgan/rng.hpp"

namespace coevgan {

/// Point on the probability simplex: w_i >= 0, sum w_i = 1.
struct MixtureWeights {
  std::vector<double> w;

  static MixtureWeights uniform(std::size_t n);
  std::size_t size() const { return w.size(); }
  /// Throws std::domain_error when off the simplex (tolerance 1e-9 on the sum).
  void validate() const;
  /// Index of the largest weight, lowest index on ties.
  std::size_t argmax() const;
  bool operator==(const MixtureWeights&) const = default;
};

struct MixtureEvolutionConfig {
  int generations = 10;       // GT
  double mutation_rate = 0.05;  // mu_w, scale of the Gaussian perturbation

  void validate() const;
};

/// Lower is better.
using MixtureScorer = std::function<double(const MixtureWeights&)>;

/// sum w_i * scores_i.
double mixture_score(std::span<const double> scores, const MixtureWeights& weights);
MixtureScorer weighted_sum_scorer(std::vector<double> scores);

/// Adds rate * N(0,1) per coordinate, clamps negatives to zero and renormalizes.
/// Draws again if every coordinate was clamped.
MixtureWeights mutate_weights(const MixtureWeights& weights, double rate, Rng& rng);

struct MixtureEvolution {
  MixtureWeights weights;
  double score = 0.0;
  double initial_score = 0.0;
  std::vector<double> champion_trace;  // champion score after each generation
  int accepted = 0;
};

/// Elitist (1+1)-ES: the offspring replaces the parent only if strictly better.
MixtureEvolution evolve_mixture(const MixtureWeights& init, const MixtureScorer& scorer,
                                const MixtureEvolutionConfig& cfg, Rng& rng);

/// Generator index for each of `count` draws; index i with probability w_i.
std::vector<std::size_t> sample_mixture(const MixtureWeights& weights, std::size_t count, Rng& rng);

/// One cell's final generator sub-population together with its evolved weights.
struct CellEnsemble {
  GridCoord cell;
  std::vector<std::vector<double>> generators;
  MixtureWeights weights;
  std::vector<double> generator_scores;
  double score = 0.0;
};

/// Minimal score; ties go to the earlier cell in row-major order.
/// Throws std::runtime_error on an empty input.
const CellEnsemble& best_ensemble(std::span<const CellEnsemble> cells);

/// Weights, per-generator scores, score and cell coordinate; parameters are omitted.
nlohmann::json to_json(const CellEnsemble& e);

}  // namespace coevgan
