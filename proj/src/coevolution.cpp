#include "coevgan/coevolution.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "coevgan/errors.hpp"

namespace coevgan {

void NeighborhoodState::validate() const {
  if (generators.empty() || generators.size() != discriminators.size())
    throw std::domain_error("neighborhood sub-populations must be nonempty and of equal size");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Lipizzaner: return "lipizzaner";
    case Method::SPaGAN: return "spagan";
    case Method::IsoCoGAN: return "isocogan";
    case Method::PaGAN: return "pagan";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (auto m : {Method::Lipizzaner, Method::SPaGAN, Method::IsoCoGAN, Method::PaGAN})
    if (to_string(m) == lower) return m;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected lipizzaner, spagan, isocogan or pagan)");
}

bool method_migrates(Method m) { return m == Method::Lipizzaner || m == Method::SPaGAN; }
bool method_selects(Method m) { return m == Method::Lipizzaner || m == Method::IsoCoGAN; }

void TrainConfig::validate(std::size_t subpopulation) const {
  if (epochs < 1) throw ConfigError("run.epochs", "must be >= 1");
  if (tournament_size < 1 || tournament_size > subpopulation)
    throw ConfigError("train.tournament_size",
                      "must lie in [1, " + std::to_string(subpopulation) + "]");
  if (!(lr_mutation_prob >= 0.0 && lr_mutation_prob <= 1.0))
    throw ConfigError("train.lr_mutation_prob", "must lie in [0, 1]");
  if (!(lr_mutation_scale >= 0.0)) throw ConfigError("train.lr_mutation_scale", "must be >= 0");
  if (!(initial_learning_rate > 0.0)) throw ConfigError("train.learning_rate", "must be > 0");
}

Counters& Counters::operator+=(const Counters& o) {
  pairwise_evaluations += o.pairwise_evaluations;
  gradient_updates += o.gradient_updates;
  migrations += o.migrations;
  selections += o.selections;
  return *this;
}

LossMatrix evaluate_all_pairs(const Backend& backend, std::span<const Individual> gens,
                              std::span<const Individual> discs, const nn::MiniBatch& batch,
                              Counters& counters) {
  if (gens.empty() || discs.empty()) throw std::domain_error("cannot evaluate an empty population");
  const auto rows = static_cast<Eigen::Index>(gens.size());
  const auto cols = static_cast<Eigen::Index>(discs.size());
  LossMatrix m{nn::Matrix(rows, cols), nn::Matrix(rows, cols)};
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      try {
        const auto l = backend.evaluate(gens[static_cast<std::size_t>(i)].params,
                                        discs[static_cast<std::size_t>(j)].params, batch);
        m.generator(i, j) = l.generator;
        m.discriminator(i, j) = l.discriminator;
      } catch (const NumericError& e) {
        throw NumericError("pair (" + std::to_string(i) + "," + std::to_string(j) + "): " + e.what());
      }
      ++counters.pairwise_evaluations;
    }
  return m;
}

Fitness fitness_from_matrix(const LossMatrix& m) {
  Fitness f;
  for (Eigen::Index i = 0; i < m.generator.rows(); ++i) f.generators.push_back(m.generator.row(i).mean());
  for (Eigen::Index j = 0; j < m.discriminator.cols(); ++j)
    f.discriminators.push_back(m.discriminator.col(j).mean());
  return f;
}

Fitness fitness_from_matrix(const nn::Matrix& adversarial) {
  return fitness_from_matrix(LossMatrix{adversarial, -adversarial});
}

std::size_t tournament_select(std::span<const double> fitness, std::size_t tau, Rng& rng) {
  if (tau < 1 || tau > fitness.size())
    throw std::domain_error("tournament size must lie in [1, population size]");
  const auto contestants = rng.sample_without_replacement(fitness.size(), tau);
  std::size_t best = contestants.front();
  for (auto c : contestants)
    if (fitness[c] < fitness[best] || (fitness[c] == fitness[best] && c < best)) best = c;
  return best;
}

namespace {

void replace_role(std::vector<Individual>& pop, const std::vector<double>& fitness) {
  if (pop.size() != fitness.size()) throw std::domain_error("fitness vector does not match population");
  for (std::size_t i = 0; i < pop.size(); ++i) pop[i].fitness = fitness[i];
  std::size_t best = 0, worst = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (fitness[i] < fitness[best]) best = i;
    if (fitness[i] > fitness[worst]) worst = i;
  }
  if (worst != best) pop[worst] = pop[best];
  std::swap(pop[0], pop[best]);
}

}  // namespace

NeighborhoodState replace_and_center(NeighborhoodState neigh, const Fitness& fitness) {
  neigh.validate();
  replace_role(neigh.generators, fitness.generators);
  replace_role(neigh.discriminators, fitness.discriminators);
  return neigh;
}

double mutate_learning_rate(double lr, double beta, double scale, Rng& rng) {
  if (!(lr > 0.0)) throw std::domain_error("learning rate must be positive");
  if (!rng.bernoulli(beta)) return lr;
  return std::clamp(lr * std::exp(scale * rng.normal()), 1e-6, 1.0);
}

NeighborhoodState spagan_epoch(NeighborhoodState neigh, const Backend& backend,
                               std::span<const nn::MiniBatch> batches, const TrainConfig& cfg,
                               Rng& rng, Counters& counters) {
  neigh.validate();
  const std::size_t s = neigh.size();
  double lr = neigh.learning_rate();
  auto& g = neigh.generators[0];
  auto& d = neigh.discriminators[0];
  for (const auto& batch : batches) {
    lr = mutate_learning_rate(lr, cfg.lr_mutation_prob, cfg.lr_mutation_scale, rng);
    const std::size_t dj = rng.index(s);
    g.params = backend.train_generator(g.params, neigh.discriminators[dj].params, batch, lr, rng);
    const std::size_t gi = rng.index(s);
    d.params = backend.train_discriminator(d.params, neigh.generators[gi].params, batch, lr, rng);
    counters.gradient_updates += 2;
  }
  g.learning_rate = d.learning_rate = lr;
  return neigh;
}

NeighborhoodState coevolutionary_epoch(NeighborhoodState neigh, const Backend& backend,
                                       std::span<const nn::MiniBatch> batches,
                                       const TrainConfig& cfg, Rng& rng, Counters& counters) {
  neigh.validate();
  if (batches.empty()) throw std::domain_error("coevolutionary epoch needs at least one batch");
  const std::size_t s = neigh.size();
  const auto& eval_batch = batches[rng.index(batches.size())];

  auto fit = fitness_from_matrix(
      evaluate_all_pairs(backend, neigh.generators, neigh.discriminators, eval_batch, counters));

  std::vector<Individual> gens, discs;
  gens.reserve(s);
  discs.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    gens.push_back(neigh.generators[tournament_select(fit.generators, cfg.tournament_size, rng)]);
    ++counters.selections;
  }
  for (std::size_t k = 0; k < s; ++k) {
    discs.push_back(neigh.discriminators[tournament_select(fit.discriminators, cfg.tournament_size, rng)]);
    ++counters.selections;
  }

  double lr = neigh.learning_rate();
  for (const auto& batch : batches) {
    lr = mutate_learning_rate(lr, cfg.lr_mutation_prob, cfg.lr_mutation_scale, rng);
    for (auto& g : gens) {
      const auto& opponent = discs[rng.index(s)];
      g.params = backend.train_generator(g.params, opponent.params, batch, lr, rng);
      ++counters.gradient_updates;
    }
    for (auto& d : discs) {
      const auto& opponent = gens[rng.index(s)];
      d.params = backend.train_discriminator(d.params, opponent.params, batch, lr, rng);
      ++counters.gradient_updates;
    }
  }
  for (auto& g : gens) g.learning_rate = lr;
  for (auto& d : discs) d.learning_rate = lr;
  neigh.generators = std::move(gens);
  neigh.discriminators = std::move(discs);

  fit = fitness_from_matrix(
      evaluate_all_pairs(backend, neigh.generators, neigh.discriminators, eval_batch, counters));
  return replace_and_center(std::move(neigh), fit);
}

NeighborhoodState init_cell(const GridCoord& cell, const Backend& backend, double learning_rate,
                            Rng& rng) {
  NeighborhoodState n;
  n.cell = cell;
  n.generators.push_back({Role::Generator, backend.init_generator(rng), learning_rate, 0.0});
  n.discriminators.push_back({Role::Discriminator, backend.init_discriminator(rng), learning_rate, 0.0});
  return n;
}

Rng cell_rng(std::uint64_t master_seed, const GridCoord& cell) {
  return Rng(derive_seed(master_seed, static_cast<std::uint64_t>(cell.row),
                         static_cast<std::uint64_t>(cell.col)));
}

std::vector<NeighborhoodState> pagan_train(const Backend& backend, const TrainConfig& cfg,
                                           std::size_t n, std::uint64_t master_seed,
                                           Counters& counters,
                                           std::span<const std::size_t> launch_order) {
  cfg.validate(std::max<std::size_t>(cfg.tournament_size, 1));  // no selection here
  std::vector<std::size_t> order(launch_order.begin(), launch_order.end());
  if (order.empty())
    for (std::size_t k = 0; k < n; ++k) order.push_back(k);
  if (order.size() != n) throw std::domain_error("launch order must list every pair once");
  const auto width = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::vector<NeighborhoodState> out(n);
  std::vector<bool> seen(n, false);
  for (auto k : order) {
    if (k >= n || seen[k]) throw std::domain_error("launch order must list every pair once");
    seen[k] = true;
    const GridCoord cell{static_cast<int>(k / width), static_cast<int>(k % width)};
    Rng rng = cell_rng(master_seed, cell);
    auto state = init_cell(cell, backend, cfg.initial_learning_rate, rng);
    for (int e = 0; e < cfg.epochs; ++e) {
      const auto batches = backend.epoch_batches(rng);
      state = spagan_epoch(std::move(state), backend, batches, cfg, rng, counters);
    }
    out[k] = std::move(state);
  }
  return out;
}

std::vector<std::vector<std::size_t>> bootstrap_subpopulations(std::size_t n, std::size_t s, Rng& rng) {
  if (s > n) throw std::domain_error("subset size exceeds population size");
  std::vector<std::vector<std::size_t>> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.push_back(rng.sample_without_replacement(n, s));
  return out;
}

}  // namespace coevgan
