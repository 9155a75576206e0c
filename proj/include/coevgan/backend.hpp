#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "coevgan/metrics.hpp"
#include "coevgan/mixture.hpp"
#include "coevgan/neural.hpp"
#include "coevgan/rng.hpp"
#include "coevgan/toy_model.hpp"

namespace coevgan {

using Params = std::vector<double>;

/// What the coevolutionary trainers need from a GAN model. Parameters travel as flat
/// vectors so individuals can be copied between cells without knowing the backend.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string name() const = 0;
  virtual Params init_generator(Rng& rng) const = 0;
  virtual Params init_discriminator(Rng& rng) const = 0;

  /// The mini-batches of one training epoch.
  virtual std::vector<nn::MiniBatch> epoch_batches(Rng& rng) const = 0;

  /// Losses of a generator/discriminator pair; both are minimize-me values for their owner.
  virtual nn::GanLosses evaluate(const Params& g, const Params& d, const nn::MiniBatch& batch) const = 0;

  virtual Params train_generator(const Params& g, const Params& d, const nn::MiniBatch& batch,
                                 double learning_rate, Rng& rng) const = 0;
  virtual Params train_discriminator(const Params& d, const Params& g, const nn::MiniBatch& batch,
                                     double learning_rate, Rng& rng) const = 0;

  /// Quality score of a single generator; lower is better.
  virtual double generator_score(const Params& g, Rng& rng) const = 0;
  /// Score of the weighted ensemble as a whole; lower is better.
  virtual double ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& rng) const = 0;
};

struct ToyBackendConfig {
  toy::ToyTarget target;
  double mutation_step = 1.0;
  std::size_t batches_per_epoch = 1;
  double generator_init_lo = -10.0;
  double generator_init_hi = 10.0;
  double discriminator_init_lo = -3.0;
  double discriminator_init_hi = 3.0;
};

/// The analytic two-Gaussian model. Batches carry no data: each one stands for a single
/// exact loss evaluation, and a "training step" is a Gaussian mutation that is always kept.
class ToyBackend final : public Backend {
 public:
  explicit ToyBackend(ToyBackendConfig cfg) : cfg_(cfg) {}

  std::string name() const override { return "toy"; }
  Params init_generator(Rng& rng) const override;
  Params init_discriminator(Rng& rng) const override;
  std::vector<nn::MiniBatch> epoch_batches(Rng& rng) const override;
  nn::GanLosses evaluate(const Params& g, const Params& d, const nn::MiniBatch& batch) const override;
  Params train_generator(const Params& g, const Params& d, const nn::MiniBatch& batch,
                         double learning_rate, Rng& rng) const override;
  Params train_discriminator(const Params& d, const Params& g, const nn::MiniBatch& batch,
                             double learning_rate, Rng& rng) const override;
  /// generator_distance to the target.
  double generator_score(const Params& g, Rng& rng) const override;
  /// Distance of the most heavily weighted generator.
  double ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& rng) const override;

  const ToyBackendConfig& config() const { return cfg_; }

 private:
  ToyBackendConfig cfg_;
};

struct NeuralBackendConfig {
  nn::RingDatasetSpec dataset;
  int latent_dim = 2;
  int hidden = 32;
  std::size_t batch_size = 64;
  std::size_t batches_per_epoch = 4;
  std::size_t score_samples = 1000;
  double reject_sigmas = 3.0;
};

/// MLP generator and discriminator on the ring-of-Gaussians dataset, trained by SGD on BCE.
class NeuralBackend final : public Backend {
 public:
  explicit NeuralBackend(NeuralBackendConfig cfg);

  std::string name() const override { return "neural"; }
  Params init_generator(Rng& rng) const override;
  Params init_discriminator(Rng& rng) const override;
  /// A fresh shuffle of the dataset cut into batches, with new latent draws.
  std::vector<nn::MiniBatch> epoch_batches(Rng& rng) const override;
  nn::GanLosses evaluate(const Params& g, const Params& d, const nn::MiniBatch& batch) const override;
  Params train_generator(const Params& g, const Params& d, const nn::MiniBatch& batch,
                         double learning_rate, Rng& rng) const override;
  Params train_discriminator(const Params& d, const Params& g, const nn::MiniBatch& batch,
                             double learning_rate, Rng& rng) const override;
  /// TVD over mode labels plus the low-quality fraction of `score_samples` draws.
  double generator_score(const Params& g, Rng& rng) const override;
  double ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& rng) const override;

  /// Samples drawn from the weighted ensemble, one column per sample.
  nn::Matrix sample_ensemble(std::span<const Params> gens, const MixtureWeights& w,
                             std::size_t count, Rng& rng) const;
  ModeAssignment assess(const nn::Matrix& samples) const;

  const NeuralBackendConfig& config() const { return cfg_; }
  const nn::RingDataset& dataset() const { return data_; }

 private:
  nn::MlpParams as_generator(const Params& p) const;
  nn::MlpParams as_discriminator(const Params& p) const;

  NeuralBackendConfig cfg_;
  nn::Architecture gen_arch_;
  nn::Architecture disc_arch_;
  nn::RingDataset data_;
  std::vector<std::array<double, 2>> centers_;
};

}  // namespace coevgan
