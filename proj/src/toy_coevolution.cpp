#include "coevgan/toy_coevolution.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coevgan::toy {

namespace {

struct Fitness {
  std::vector<double> generators;
  std::vector<double> discriminators;
};

Fitness evaluate(const ToyTarget& target, const std::vector<ToyGenerator>& gens,
                 const std::vector<ToyDiscriminator>& discs, const SimpleCoevConfig& cfg,
                 std::size_t& counter) {
  const std::size_t ng = gens.size();
  const std::size_t nd = discs.size();
  std::vector<double> target_mass(nd);
  for (std::size_t j = 0; j < nd; ++j) target_mass[j] = expected_mass(target, discs[j]);

  Fitness f{std::vector<double>(ng), std::vector<double>(nd)};
  const bool g_worst = cfg.generator_fitness == FitnessAggregate::WorstCase;
  const bool d_worst = cfg.discriminator_fitness == FitnessAggregate::WorstCase;
  std::vector<double> d_acc(nd, d_worst ? -1e300 : 0.0);
  for (std::size_t i = 0; i < ng; ++i) {
    double g_acc = g_worst ? -1e300 : 0.0;
    for (std::size_t j = 0; j < nd; ++j) {
      const double loss = target_mass[j] + 1.0 - expected_mass(gens[i], discs[j]);
      g_acc = g_worst ? std::max(g_acc, loss) : g_acc + loss;
      // The discriminator's worst case is the generator it separates least.
      d_acc[j] = d_worst ? std::max(d_acc[j], -loss) : d_acc[j] - loss;
    }
    f.generators[i] = g_worst ? g_acc : g_acc / static_cast<double>(nd);
  }
  for (std::size_t j = 0; j < nd; ++j)
    f.discriminators[j] = d_worst ? d_acc[j] : d_acc[j] / static_cast<double>(ng);
  counter += ng * nd;
  return f;
}

std::size_t argmin_first(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
}

std::size_t tournament(const std::vector<double>& fitness, std::size_t tau, Rng& rng) {
  const auto contestants = rng.sample_without_replacement(fitness.size(), tau);
  std::size_t best = contestants.front();
  for (auto c : contestants)
    if (fitness[c] < fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
  return best;
}

// Offspring are placed ahead of their parents so that on equal fitness the
// stable truncation keeps the newcomer and populations can drift across plateaus.
template <class T>
std::vector<T> truncate(std::vector<T> merged, const std::vector<double>& fitness,
                        std::size_t keep) {
  std::vector<std::size_t> order(merged.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitness[a] < fitness[b]; });
  std::vector<T> out;
  out.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) out.push_back(merged[order[k]]);
  return out;
}

}  // namespace

SimpleCoevResult run_simple_coevolution(const ToyTarget& target,
                                        std::vector<ToyGenerator> generators,
                                        std::vector<ToyDiscriminator> discriminators,
                                        const SimpleCoevConfig& cfg, Rng& rng) {
  if (generators.empty() || discriminators.empty())
    throw std::domain_error("simple coevolution needs nonempty populations");
  if (cfg.tournament_size < 1 || cfg.tournament_size > generators.size() ||
      cfg.tournament_size > discriminators.size())
    throw std::domain_error("tournament size must be in [1, population size]");
  if (cfg.generations < 0) throw std::domain_error("generations must be >= 0");

  SimpleCoevResult result;
  const std::size_t ng = generators.size();
  const std::size_t nd = discriminators.size();

  for (int gen = 0; gen < cfg.generations; ++gen) {
    const auto fit = evaluate(target, generators, discriminators, cfg, result.loss_evaluations);

    std::vector<ToyGenerator> g_all;
    if (cfg.train_generators) {
      for (std::size_t k = 0; k < ng; ++k) {
        const auto parent = tournament(fit.generators, cfg.tournament_size, rng);
        g_all.push_back(mutate(generators[parent], cfg.step, rng, cfg.gene_probability));
      }
    }
    g_all.insert(g_all.end(), generators.begin(), generators.end());

    std::vector<ToyDiscriminator> d_all;
    if (cfg.train_discriminators) {
      for (std::size_t k = 0; k < nd; ++k) {
        const auto parent = tournament(fit.discriminators, cfg.tournament_size, rng);
        d_all.push_back(mutate(discriminators[parent], cfg.step, rng, cfg.gene_probability));
      }
    }
    d_all.insert(d_all.end(), discriminators.begin(), discriminators.end());

    const auto merged = evaluate(target, g_all, d_all, cfg, result.loss_evaluations);
    generators = truncate(std::move(g_all), merged.generators, ng);
    discriminators = truncate(std::move(d_all), merged.discriminators, nd);
  }

  const auto fit = evaluate(target, generators, discriminators, cfg, result.loss_evaluations);
  const auto bg = argmin_first(fit.generators);
  const auto bd = argmin_first(fit.discriminators);
  result.best_generator = generators[bg];
  result.best_discriminator = discriminators[bd];
  result.best_generator_fitness = fit.generators[bg];
  result.best_discriminator_fitness = fit.discriminators[bd];
  result.generators = std::move(generators);
  result.discriminators = std::move(discriminators);
  return result;
}

}  // namespace coevgan::toy
