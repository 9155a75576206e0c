#include "coevgan/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coevgan::nn {

std::size_t Architecture::parameter_count() const { return weight_offset(layer_count()); }

std::size_t Architecture::weight_offset(std::size_t l) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k < l; ++k) {
    const auto in = static_cast<std::size_t>(widths[k]);
    const auto out = static_cast<std::size_t>(widths[k + 1]);
    off += out * in + out;
  }
  return off;
}

Architecture Architecture::generator(int latent_dim, int hidden, int out_dim) {
  return {{latent_dim, hidden, hidden, out_dim}, OutputActivation::Linear};
}

Architecture Architecture::discriminator(int in_dim, int hidden) {
  return {{in_dim, hidden, hidden, 1}, OutputActivation::Sigmoid};
}

MlpParams::MlpParams(Architecture arch)
    : arch_(std::move(arch)), values_(arch_.parameter_count(), 0.0) {
  if (arch_.widths.size() < 2) throw std::domain_error("architecture needs at least two widths");
  for (int w : arch_.widths)
    if (w < 1) throw std::domain_error("layer widths must be positive");
}

MlpParams MlpParams::unflatten(Architecture arch, std::vector<double> values) {
  MlpParams p(std::move(arch));
  if (values.size() != p.values_.size())
    throw std::domain_error("flat parameter size " + std::to_string(values.size()) +
                            " does not match architecture size " +
                            std::to_string(p.values_.size()));
  p.values_ = std::move(values);
  return p;
}

Eigen::Map<const Matrix> MlpParams::weight(std::size_t l) const {
  return {values_.data() + arch_.weight_offset(l), arch_.widths[l + 1], arch_.widths[l]};
}

Eigen::Map<Matrix> MlpParams::weight(std::size_t l) {
  return {values_.data() + arch_.weight_offset(l), arch_.widths[l + 1], arch_.widths[l]};
}

Eigen::Map<const Eigen::VectorXd> MlpParams::bias(std::size_t l) const {
  const auto off = arch_.weight_offset(l) +
                   static_cast<std::size_t>(arch_.widths[l + 1]) * arch_.widths[l];
  return {values_.data() + off, arch_.widths[l + 1]};
}

Eigen::Map<Eigen::VectorXd> MlpParams::bias(std::size_t l) {
  const auto off = arch_.weight_offset(l) +
                   static_cast<std::size_t>(arch_.widths[l + 1]) * arch_.widths[l];
  return {values_.data() + off, arch_.widths[l + 1]};
}

bool MlpParams::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

MlpParams init_mlp(const Architecture& arch, Rng& rng) {
  MlpParams p(arch);
  for (std::size_t l = 0; l < arch.layer_count(); ++l) {
    const double a = 1.0 / std::sqrt(static_cast<double>(arch.widths[l]));
    auto w = p.weight(l);
    for (Eigen::Index j = 0; j < w.cols(); ++j)
      for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = rng.uniform(-a, a);
    auto b = p.bias(l);
    for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = rng.uniform(-a, a);
  }
  return p;
}

Matrix forward(const MlpParams& params, const Matrix& input, ForwardCache* cache) {
  const auto& arch = params.architecture();
  if (input.rows() != arch.input_dim())
    throw std::domain_error("input dimension " + std::to_string(input.rows()) +
                            " does not match network input " + std::to_string(arch.input_dim()));
  const std::size_t layers = arch.layer_count();
  if (cache) {
    cache->activations.clear();
    cache->activations.reserve(layers + 1);
    cache->activations.push_back(input);
  }
  Matrix a = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Matrix z = params.weight(l) * a;
    z.colwise() += params.bias(l);
    if (l + 1 < layers) z = z.array().tanh().matrix();
    if (cache) cache->activations.push_back(z);
    a = std::move(z);
  }
  if (arch.output == OutputActivation::Sigmoid)
    a = (1.0 / (1.0 + (-a.array()).exp())).matrix();
  return a;
}

Backward backward(const MlpParams& params, const ForwardCache& cache, const Matrix& output_grad) {
  const auto& arch = params.architecture();
  const std::size_t layers = arch.layer_count();
  if (cache.activations.size() != layers + 1)
    throw std::domain_error("forward cache does not match network depth");
  Backward out{MlpParams(arch), Matrix()};
  Matrix delta = output_grad;
  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& a_in = cache.activations[l];
    out.grad.weight(l) = delta * a_in.transpose();
    out.grad.bias(l) = delta.rowwise().sum();
    Matrix back = params.weight(l).transpose() * delta;
    if (l > 0) {
      // a_in = tanh(z), so dz = back * (1 - a_in^2).
      back = (back.array() * (1.0 - a_in.array().square())).matrix();
    }
    delta = std::move(back);
  }
  out.input_grad = std::move(delta);
  return out;
}

}  // namespace coevgan::nn
