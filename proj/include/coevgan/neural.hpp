#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "coevgan/mlp.hpp"
#include "coevgan/rng.hpp"

namespace coevgan::nn {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before taking logs.
inline constexpr double kProbClamp = 1e-7;

/// Measuring function of the adversarial objective. Only binary cross-entropy
/// (phi = log) is provided.
struct LossSpec {
  enum class Kind { BinaryCrossEntropy };
  Kind kind = Kind::BinaryCrossEntropy;
};

/// Real samples and latent inputs, one column per item. Both have the same count.
struct MiniBatch {
  Matrix real;
  Matrix latent;

  std::size_t size() const { return static_cast<std::size_t>(real.cols()); }
  void validate() const;
};

struct GanLosses {
  double generator = 0.0;
  double discriminator = 0.0;
};

struct GanGradients {
  GanLosses losses;
  MlpParams generator_grad;
  MlpParams discriminator_grad;
};

/// Deterministic forward pass of the generator; columns of `latent` are samples.
Matrix generate(const MlpParams& generator, const Matrix& latent);

/// Forward-only evaluation. Discriminator loss is
/// -mean log D(x) - mean log(1 - D(G(z))); generator loss is -mean log D(G(z)).
GanLosses evaluate_losses(const MlpParams& generator, const MlpParams& discriminator,
                          const MiniBatch& batch, const LossSpec& spec = {});

/// Both losses and the full gradient of each network w.r.t. its own loss.
GanGradients bce_loss_and_grads(const MlpParams& generator, const MlpParams& discriminator,
                                const MiniBatch& batch, const LossSpec& spec = {});

struct SideGradient {
  double loss = 0.0;
  MlpParams grad;
};

/// Gradient of the non-saturating generator loss only.
SideGradient generator_gradient(const MlpParams& generator, const MlpParams& discriminator,
                                const MiniBatch& batch, const LossSpec& spec = {});
/// Gradient of the discriminator loss only.
SideGradient discriminator_gradient(const MlpParams& discriminator, const MlpParams& generator,
                                    const MiniBatch& batch, const LossSpec& spec = {});

/// params - learning_rate * grads. Throws NumericError on a nonfinite result.
MlpParams sgd_step(const MlpParams& params, const MlpParams& grads, double learning_rate);

/// Standard-normal latent vectors.
Matrix sample_latent(int latent_dim, std::size_t count, Rng& rng);

struct RingDatasetSpec {
  int modes = 8;
  double radius = 2.0;
  double stddev = 0.05;
  std::size_t samples = 512;
  std::uint64_t seed = 1;

  void validate() const;
  std::array<double, 2> center(int mode) const;
};

struct RingDataset {
  RingDatasetSpec spec;
  Matrix points;            // 2 x samples
  std::vector<int> labels;  // generating mode of each column
};

/// Each sample picks a mode uniformly, then adds isotropic Gaussian noise around
/// that mode's center on the circle.
RingDataset make_ring_dataset(const RingDatasetSpec& spec);

void write_dataset_csv(const RingDataset& data, const std::filesystem::path& path);
/// Reads `x,y,mode_label` rows. The spec field is left at its defaults apart from
/// the mode count, which is inferred from the labels.
RingDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace coevgan::nn
