#include "coevgan/backend.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace coevgan {

Params ToyBackend::init_generator(Rng& rng) const {
  return {rng.uniform(cfg_.generator_init_lo, cfg_.generator_init_hi),
          rng.uniform(cfg_.generator_init_lo, cfg_.generator_init_hi)};
}

Params ToyBackend::init_discriminator(Rng& rng) const {
  std::array<double, 4> b{};
  for (auto& x : b) x = rng.uniform(cfg_.discriminator_init_lo, cfg_.discriminator_init_hi);
  std::sort(b.begin(), b.end());
  return {b.begin(), b.end()};
}

std::vector<nn::MiniBatch> ToyBackend::epoch_batches(Rng&) const {
  return std::vector<nn::MiniBatch>(cfg_.batches_per_epoch);
}

namespace {

toy::ToyGenerator toy_gen(const Params& p) {
  if (p.size() != 2) throw std::domain_error("toy generator needs 2 parameters");
  return {p[0], p[1]};
}

toy::ToyDiscriminator toy_disc(const Params& p) {
  if (p.size() != 4) throw std::domain_error("toy discriminator needs 4 parameters");
  return toy::ToyDiscriminator::from_unsorted({p[0], p[1], p[2], p[3]});
}

}  // namespace

nn::GanLosses ToyBackend::evaluate(const Params& g, const Params& d, const nn::MiniBatch&) const {
  const double l = toy::toy_loss(cfg_.target, toy_gen(g), toy_disc(d));
  return {l, -l};
}

Params ToyBackend::train_generator(const Params& g, const Params&, const nn::MiniBatch&, double,
                                   Rng& rng) const {
  return toy::mutate_toy(g, cfg_.mutation_step, rng);
}

Params ToyBackend::train_discriminator(const Params& d, const Params&, const nn::MiniBatch&, double,
                                       Rng& rng) const {
  const auto m = toy::mutate(toy_disc(d), cfg_.mutation_step, rng);
  const auto b = m.bounds();
  return {b.begin(), b.end()};
}

double ToyBackend::generator_score(const Params& g, Rng&) const {
  return toy::generator_distance(toy_gen(g), cfg_.target);
}

double ToyBackend::ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& rng) const {
  if (gens.size() != w.size()) throw std::domain_error("ensemble and weights differ in length");
  return generator_score(gens[w.argmax()], rng);
}

NeuralBackend::NeuralBackend(NeuralBackendConfig cfg)
    : cfg_(std::move(cfg)),
      gen_arch_(nn::Architecture::generator(cfg_.latent_dim, cfg_.hidden, 2)),
      disc_arch_(nn::Architecture::discriminator(2, cfg_.hidden)),
      data_(nn::make_ring_dataset(cfg_.dataset)) {
  if (cfg_.batch_size == 0) throw std::domain_error("batch size must be positive");
  if (cfg_.batches_per_epoch == 0) throw std::domain_error("batches per epoch must be positive");
  if (cfg_.score_samples == 0) throw std::domain_error("score samples must be positive");
  for (int k = 0; k < cfg_.dataset.modes; ++k) centers_.push_back(cfg_.dataset.center(k));
}

nn::MlpParams NeuralBackend::as_generator(const Params& p) const {
  return nn::MlpParams::unflatten(gen_arch_, p);
}

nn::MlpParams NeuralBackend::as_discriminator(const Params& p) const {
  return nn::MlpParams::unflatten(disc_arch_, p);
}

namespace {
Params flat_of(const nn::MlpParams& p) { return {p.flat().begin(), p.flat().end()}; }
}  // namespace

Params NeuralBackend::init_generator(Rng& rng) const { return flat_of(nn::init_mlp(gen_arch_, rng)); }

Params NeuralBackend::init_discriminator(Rng& rng) const {
  return flat_of(nn::init_mlp(disc_arch_, rng));
}

std::vector<nn::MiniBatch> NeuralBackend::epoch_batches(Rng& rng) const {
  const auto n = static_cast<std::size_t>(data_.points.cols());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<nn::MiniBatch> out(cfg_.batches_per_epoch);
  std::size_t cursor = 0;
  for (auto& b : out) {
    b.real.resize(2, static_cast<Eigen::Index>(cfg_.batch_size));
    for (std::size_t k = 0; k < cfg_.batch_size; ++k, ++cursor)
      b.real.col(static_cast<Eigen::Index>(k)) =
          data_.points.col(static_cast<Eigen::Index>(order[cursor % n]));
    b.latent = nn::sample_latent(cfg_.latent_dim, cfg_.batch_size, rng);
  }
  return out;
}

nn::GanLosses NeuralBackend::evaluate(const Params& g, const Params& d, const nn::MiniBatch& batch) const {
  return nn::evaluate_losses(as_generator(g), as_discriminator(d), batch);
}

Params NeuralBackend::train_generator(const Params& g, const Params& d, const nn::MiniBatch& batch,
                                      double learning_rate, Rng&) const {
  const auto gp = as_generator(g);
  const auto grad = nn::generator_gradient(gp, as_discriminator(d), batch);
  return flat_of(nn::sgd_step(gp, grad.grad, learning_rate));
}

Params NeuralBackend::train_discriminator(const Params& d, const Params& g, const nn::MiniBatch& batch,
                                          double learning_rate, Rng&) const {
  const auto dp = as_discriminator(d);
  const auto grad = nn::discriminator_gradient(dp, as_generator(g), batch);
  return flat_of(nn::sgd_step(dp, grad.grad, learning_rate));
}

ModeAssignment NeuralBackend::assess(const nn::Matrix& samples) const {
  return assign_modes(samples, centers_, cfg_.dataset.stddev, cfg_.reject_sigmas);
}

double NeuralBackend::generator_score(const Params& g, Rng& rng) const {
  const auto z = nn::sample_latent(cfg_.latent_dim, cfg_.score_samples, rng);
  return ensemble_quality_score(assess(nn::generate(as_generator(g), z)));
}

nn::Matrix NeuralBackend::sample_ensemble(std::span<const Params> gens, const MixtureWeights& w,
                                          std::size_t count, Rng& rng) const {
  if (gens.size() != w.size()) throw std::domain_error("ensemble and weights differ in length");
  const auto picks = sample_mixture(w, count, rng);
  std::vector<std::size_t> per(gens.size(), 0);
  for (auto i : picks) ++per[i];
  nn::Matrix out(2, static_cast<Eigen::Index>(count));
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (per[i] == 0) continue;
    const auto z = nn::sample_latent(cfg_.latent_dim, per[i], rng);
    const auto x = nn::generate(as_generator(gens[i]), z);
    out.middleCols(col, x.cols()) = x;
    col += x.cols();
  }
  return out;
}

double NeuralBackend::ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& rng) const {
  return ensemble_quality_score(assess(sample_ensemble(gens, w, cfg_.score_samples, rng)));
}

}  // namespace coevgan
