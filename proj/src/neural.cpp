#include "coevgan/neural.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "coevgan/errors.hpp"

namespace coevgan::nn {

namespace {

// -log of a clamped probability, and the derivative of that quantity w.r.t. the
// logit (zero where the clamp is active).
struct LogTerm {
  double value;
  double dlogit;
};

LogTerm neg_log_prob(double p, double dlogit_unclamped) {
  if (p < kProbClamp) return {-std::log(kProbClamp), 0.0};
  if (p > 1.0 - kProbClamp) return {-std::log(1.0 - kProbClamp), 0.0};
  return {-std::log(p), dlogit_unclamped};
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string("nonfinite ") + what);
}

struct DiscPass {
  Matrix probs;
  ForwardCache cache;
};

DiscPass run_disc(const MlpParams& d, const Matrix& x) {
  DiscPass p;
  p.probs = forward(d, x, &p.cache);
  return p;
}

void check_pair(const MlpParams& g, const MlpParams& d, const MiniBatch& batch) {
  batch.validate();
  if (g.architecture().input_dim() != batch.latent.rows())
    throw std::domain_error("latent dimension does not match generator input");
  if (g.architecture().output_dim() != d.architecture().input_dim())
    throw std::domain_error("generator output does not match discriminator input");
  if (d.architecture().output_dim() != 1 || d.architecture().output != OutputActivation::Sigmoid)
    throw std::domain_error("discriminator must have a single sigmoid output");
}

}  // namespace

void MiniBatch::validate() const {
  if (real.cols() == 0) throw std::domain_error("empty mini-batch");
  if (real.cols() != latent.cols())
    throw std::domain_error("real and latent parts of a mini-batch differ in size");
}

Matrix generate(const MlpParams& generator, const Matrix& latent) {
  Matrix out = forward(generator, latent);
  if (!out.allFinite()) throw NumericError("nonfinite generator output");
  return out;
}

GanLosses evaluate_losses(const MlpParams& generator, const MlpParams& discriminator,
                          const MiniBatch& batch, const LossSpec&) {
  check_pair(generator, discriminator, batch);
  const Matrix fake = forward(generator, batch.latent);
  const Matrix p_real = forward(discriminator, batch.real);
  const Matrix p_fake = forward(discriminator, fake);
  const double m = static_cast<double>(batch.size());
  GanLosses out;
  for (Eigen::Index i = 0; i < p_real.cols(); ++i)
    out.discriminator += neg_log_prob(p_real(0, i), 0.0).value / m;
  for (Eigen::Index i = 0; i < p_fake.cols(); ++i) {
    out.discriminator += neg_log_prob(1.0 - p_fake(0, i), 0.0).value / m;
    out.generator += neg_log_prob(p_fake(0, i), 0.0).value / m;
  }
  check_finite(out.generator, "generator loss");
  check_finite(out.discriminator, "discriminator loss");
  return out;
}

SideGradient generator_gradient(const MlpParams& generator, const MlpParams& discriminator,
                                const MiniBatch& batch, const LossSpec&) {
  check_pair(generator, discriminator, batch);
  ForwardCache g_cache;
  const Matrix fake = forward(generator, batch.latent, &g_cache);
  const auto dp = run_disc(discriminator, fake);
  const double m = static_cast<double>(batch.size());
  SideGradient out;
  Matrix dlogit(1, dp.probs.cols());
  for (Eigen::Index i = 0; i < dp.probs.cols(); ++i) {
    const double p = dp.probs(0, i);
    const auto t = neg_log_prob(p, (p - 1.0) / m);
    out.loss += t.value / m;
    dlogit(0, i) = t.dlogit;
  }
  const auto d_back = backward(discriminator, dp.cache, dlogit);
  out.grad = backward(generator, g_cache, d_back.input_grad).grad;
  check_finite(out.loss, "generator loss");
  if (!out.grad.all_finite()) throw NumericError("nonfinite generator gradient");
  return out;
}

SideGradient discriminator_gradient(const MlpParams& discriminator, const MlpParams& generator,
                                    const MiniBatch& batch, const LossSpec&) {
  check_pair(generator, discriminator, batch);
  const Matrix fake = forward(generator, batch.latent);
  const double m = static_cast<double>(batch.size());
  SideGradient out;

  const auto real = run_disc(discriminator, batch.real);
  Matrix d_real(1, real.probs.cols());
  for (Eigen::Index i = 0; i < real.probs.cols(); ++i) {
    const double p = real.probs(0, i);
    const auto t = neg_log_prob(p, (p - 1.0) / m);
    out.loss += t.value / m;
    d_real(0, i) = t.dlogit;
  }
  const auto fk = run_disc(discriminator, fake);
  Matrix d_fake(1, fk.probs.cols());
  for (Eigen::Index i = 0; i < fk.probs.cols(); ++i) {
    const double p = fk.probs(0, i);
    const auto t = neg_log_prob(1.0 - p, p / m);
    out.loss += t.value / m;
    d_fake(0, i) = t.dlogit;
  }
  out.grad = backward(discriminator, real.cache, d_real).grad;
  const auto g_fake = backward(discriminator, fk.cache, d_fake).grad;
  auto acc = out.grad.flat();
  const auto add = g_fake.flat();
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += add[k];
  check_finite(out.loss, "discriminator loss");
  if (!out.grad.all_finite()) throw NumericError("nonfinite discriminator gradient");
  return out;
}

GanGradients bce_loss_and_grads(const MlpParams& generator, const MlpParams& discriminator,
                                const MiniBatch& batch, const LossSpec& spec) {
  auto g = generator_gradient(generator, discriminator, batch, spec);
  auto d = discriminator_gradient(discriminator, generator, batch, spec);
  return {{g.loss, d.loss}, std::move(g.grad), std::move(d.grad)};
}

MlpParams sgd_step(const MlpParams& params, const MlpParams& grads, double learning_rate) {
  if (!(learning_rate >= 0.0)) throw std::domain_error("learning rate must be nonnegative");
  if (!(params.architecture() == grads.architecture()))
    throw std::domain_error("gradient shape does not match parameters");
  MlpParams out = params;
  auto p = out.flat();
  const auto g = grads.flat();
  for (std::size_t k = 0; k < p.size(); ++k) {
    p[k] -= learning_rate * g[k];
    if (!std::isfinite(p[k])) throw NumericError("nonfinite parameter after SGD step");
  }
  return out;
}

Matrix sample_latent(int latent_dim, std::size_t count, Rng& rng) {
  Matrix z(latent_dim, static_cast<Eigen::Index>(count));
  for (Eigen::Index j = 0; j < z.cols(); ++j)
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = rng.normal();
  return z;
}

void RingDatasetSpec::validate() const {
  if (modes < 1) throw std::domain_error("ring dataset needs at least one mode");
  if (!(stddev > 0.0)) throw std::domain_error("ring dataset stddev must be positive");
}

std::array<double, 2> RingDatasetSpec::center(int mode) const {
  const double angle = 2.0 * std::numbers::pi * mode / modes;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

RingDataset make_ring_dataset(const RingDatasetSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  RingDataset data{spec, Matrix(2, static_cast<Eigen::Index>(spec.samples)), {}};
  data.labels.resize(spec.samples);
  for (std::size_t k = 0; k < spec.samples; ++k) {
    const int mode = static_cast<int>(rng.index(static_cast<std::size_t>(spec.modes)));
    const auto c = spec.center(mode);
    const auto col = static_cast<Eigen::Index>(k);
    data.points(0, col) = c[0] + spec.stddev * rng.normal();
    data.points(1, col) = c[1] + spec.stddev * rng.normal();
    data.labels[k] = mode;
  }
  return data;
}

void write_dataset_csv(const RingDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.precision(17);
  out << "x,y,mode_label\n";
  for (Eigen::Index k = 0; k < data.points.cols(); ++k)
    out << data.points(0, k) << ',' << data.points(1, k) << ','
        << data.labels[static_cast<std::size_t>(k)] << '\n';
}

RingDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "x,y,mode_label") throw std::runtime_error("unexpected dataset header: " + line);
  std::vector<double> xs, ys;
  RingDataset data;
  int max_label = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double x = 0, y = 0;
    int label = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> x >> c1 >> y >> c2 >> label) || c1 != ',' || c2 != ',')
      throw std::runtime_error("malformed dataset row: " + line);
    xs.push_back(x);
    ys.push_back(y);
    data.labels.push_back(label);
    max_label = std::max(max_label, label);
  }
  data.points.resize(2, static_cast<Eigen::Index>(xs.size()));
  for (std::size_t k = 0; k < xs.size(); ++k) {
    data.points(0, static_cast<Eigen::Index>(k)) = xs[k];
    data.points(1, static_cast<Eigen::Index>(k)) = ys[k];
  }
  data.spec.samples = xs.size();
  data.spec.modes = max_label + 1;
  return data;
}

}  // namespace coevgan::nn
