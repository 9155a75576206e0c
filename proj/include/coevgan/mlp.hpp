#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "coevgan/rng.hpp"

namespace coevgan::nn {

using Matrix = Eigen::MatrixXd;

enum class OutputActivation { Linear, Sigmoid };

/// Fully connected layer widths, input first. Hidden layers use tanh.
struct Architecture {
  std::vector<int> widths;
  OutputActivation output = OutputActivation::Linear;

  std::size_t layer_count() const { return widths.empty() ? 0 : widths.size() - 1; }
  int input_dim() const { return widths.front(); }
  int output_dim() const { return widths.back(); }
  std::size_t parameter_count() const;
  /// Offset of layer `l`'s weight block inside the flat vector; its bias follows it.
  std::size_t weight_offset(std::size_t l) const;
  bool operator==(const Architecture&) const = default;

  static Architecture generator(int latent_dim = 2, int hidden = 32, int out_dim = 2);
  static Architecture discriminator(int in_dim = 2, int hidden = 32);
};

/// Network parameters stored as one flat vector. Layer l holds a column-major
/// (widths[l+1] x widths[l]) weight block followed by a widths[l+1] bias.
class MlpParams {
 public:
  MlpParams() = default;
  explicit MlpParams(Architecture arch);
  /// Throws std::domain_error if the size does not match the architecture.
  static MlpParams unflatten(Architecture arch, std::vector<double> values);

  const Architecture& architecture() const { return arch_; }
  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }
  std::size_t size() const { return values_.size(); }

  Eigen::Map<const Matrix> weight(std::size_t l) const;
  Eigen::Map<Matrix> weight(std::size_t l);
  Eigen::Map<const Eigen::VectorXd> bias(std::size_t l) const;
  Eigen::Map<Eigen::VectorXd> bias(std::size_t l);

  bool all_finite() const;
  bool operator==(const MlpParams&) const = default;

 private:
  Architecture arch_;
  std::vector<double> values_;
};

/// Weights and biases uniform in [-a, a] with a = 1/sqrt(fan_in).
MlpParams init_mlp(const Architecture& arch, Rng& rng);

struct ForwardCache {
  /// activations[0] is the input; activations[l + 1] the output of layer l
  /// (after tanh for hidden layers, pre-activation logits for the last layer).
  std::vector<Matrix> activations;
};

/// Columns are samples. Returns the last layer's output after the configured
/// output activation.
Matrix forward(const MlpParams& params, const Matrix& input, ForwardCache* cache = nullptr);

struct Backward {
  MlpParams grad;
  Matrix input_grad;
};

/// Back-propagates `output_grad`, the derivative w.r.t. the last layer's pre-activation
/// output (logits for sigmoid networks).
Backward backward(const MlpParams& params, const ForwardCache& cache, const Matrix& output_grad);

}  // namespace coevgan::nn
