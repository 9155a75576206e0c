#include "coevgan/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coevgan {

MixtureWeights MixtureWeights::uniform(std::size_t n) {
  if (n == 0) throw std::domain_error("mixture over zero generators");
  return {std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

void MixtureWeights::validate() const {
  if (w.empty()) throw std::domain_error("empty mixture weights");
  double sum = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw std::domain_error("negative or NaN mixture weight");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("mixture weights do not sum to 1");
}

std::size_t MixtureWeights::argmax() const {
  return static_cast<std::size_t>(std::max_element(w.begin(), w.end()) - w.begin());
}

void MixtureEvolutionConfig::validate() const {
  if (generations < 0) throw std::domain_error("mixture generations must be >= 0");
  if (!(mutation_rate > 0.0)) throw std::domain_error("mixture mutation rate must be > 0");
}

double mixture_score(std::span<const double> scores, const MixtureWeights& weights) {
  if (scores.size() != weights.size())
    throw std::domain_error("score and weight vectors differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) s += weights.w[i] * scores[i];
  return s;
}

MixtureScorer weighted_sum_scorer(std::vector<double> scores) {
  return [scores = std::move(scores)](const MixtureWeights& w) { return mixture_score(scores, w); };
}

MixtureWeights mutate_weights(const MixtureWeights& weights, double rate, Rng& rng) {
  MixtureWeights out;
  out.w.resize(weights.size());
  for (;;) {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      out.w[i] = std::max(0.0, weights.w[i] + rate * rng.normal());
      sum += out.w[i];
    }
    if (sum > 0.0) {
      for (auto& x : out.w) x /= sum;
      return out;
    }
  }
}

MixtureEvolution evolve_mixture(const MixtureWeights& init, const MixtureScorer& scorer,
                                const MixtureEvolutionConfig& cfg, Rng& rng) {
  init.validate();
  cfg.validate();
  MixtureEvolution r{init, scorer(init), 0.0, {}, 0};
  r.initial_score = r.score;
  r.champion_trace.reserve(static_cast<std::size_t>(cfg.generations));
  for (int gen = 0; gen < cfg.generations; ++gen) {
    auto child = mutate_weights(r.weights, cfg.mutation_rate, rng);
    const double s = scorer(child);
    if (s < r.score) {
      r.weights = std::move(child);
      r.score = s;
      ++r.accepted;
    }
    r.champion_trace.push_back(r.score);
  }
  return r;
}

std::vector<std::size_t> sample_mixture(const MixtureWeights& weights, std::size_t count, Rng& rng) {
  weights.validate();
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.w.begin(), weights.w.end(), cdf.begin());
  std::vector<std::size_t> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto idx = static_cast<std::size_t>(it - cdf.begin());
    out.push_back(std::min(idx, weights.size() - 1));
  }
  return out;
}

const CellEnsemble& best_ensemble(std::span<const CellEnsemble> cells) {
  if (cells.empty()) throw std::runtime_error("no finished cells to pick an ensemble from");
  const CellEnsemble* best = &cells[0];
  for (const auto& c : cells)
    if (c.score < best->score || (c.score == best->score && c.cell < best->cell)) best = &c;
  return *best;
}

nlohmann::json to_json(const CellEnsemble& e) {
  return {{"cell", {e.cell.row, e.cell.col}},
          {"weights", e.weights.w},
          {"generator_scores", e.generator_scores},
          {"score", e.score}};
}

}  // namespace coevgan
