#include "coevgan/toy_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace coevgan::toy {

namespace {

void require_ordered(const ToyDiscriminator& d) {
  if (!d.ordered())
    throw std::domain_error("discriminator bounds must satisfy l1 <= r1 <= l2 <= r2");
}

}  // namespace

ToyDiscriminator ToyDiscriminator::from_unsorted(std::array<double, 4> b) {
  std::sort(b.begin(), b.end());
  return {b[0], b[1], b[2], b[3]};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double mixture_cdf(double x, std::array<double, 2> means) {
  return 0.5 * normal_cdf(x - means[0]) + 0.5 * normal_cdf(x - means[1]);
}

double mixture_pdf(double x, std::array<double, 2> means) {
  return 0.5 * normal_pdf(x - means[0]) + 0.5 * normal_pdf(x - means[1]);
}

double expected_mass(std::array<double, 2> means, const ToyDiscriminator& disc) {
  require_ordered(disc);
  return (mixture_cdf(disc.r1, means) - mixture_cdf(disc.l1, means)) +
         (mixture_cdf(disc.r2, means) - mixture_cdf(disc.l2, means));
}

double toy_loss(const ToyTarget& target, const ToyGenerator& gen, const ToyDiscriminator& disc) {
  return expected_mass(target, disc) + 1.0 - expected_mass(gen, disc);
}

std::array<double, 6> toy_loss_gradient(const ToyTarget& target, const ToyGenerator& gen,
                                        const ToyDiscriminator& disc) {
  require_ordered(disc);
  const auto mu = gen.means();
  std::array<double, 6> g{};
  // d/dmu of the interval mass [l, r] under N(mu, 1) is pdf(l - mu) - pdf(r - mu).
  for (std::size_t k = 0; k < 2; ++k) {
    const double dm = 0.5 * (normal_pdf(disc.l1 - mu[k]) - normal_pdf(disc.r1 - mu[k]) +
                             normal_pdf(disc.l2 - mu[k]) - normal_pdf(disc.r2 - mu[k]));
    g[k] = -dm;
  }
  auto edge = [&](double x) { return mixture_pdf(x, target.mu_star) - mixture_pdf(x, mu); };
  g[2] = -edge(disc.l1);
  g[3] = edge(disc.r1);
  g[4] = -edge(disc.l2);
  g[5] = edge(disc.r2);
  return g;
}

std::vector<double> mutate_toy(std::span<const double> params, double step, Rng& rng,
                               double gene_probability) {
  std::vector<double> out(params.begin(), params.end());
  if (out.empty()) return out;
  if (gene_probability >= 1.0) {
    for (auto& v : out) v += step * rng.normal();
    return out;
  }
  bool any = false;
  std::vector<bool> mask(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    mask[i] = rng.bernoulli(gene_probability);
    any = any || mask[i];
  }
  if (!any) mask[rng.index(out.size())] = true;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask[i]) out[i] += step * rng.normal();
  return out;
}

ToyGenerator mutate(const ToyGenerator& gen, double step, Rng& rng, double gene_probability) {
  const std::array<double, 2> p{gen.mu1, gen.mu2};
  const auto m = mutate_toy(p, step, rng, gene_probability);
  return {m[0], m[1]};
}

ToyDiscriminator mutate(const ToyDiscriminator& disc, double step, Rng& rng,
                        double gene_probability) {
  const auto b = disc.bounds();
  const auto m = mutate_toy(b, step, rng, gene_probability);
  return ToyDiscriminator::from_unsorted({m[0], m[1], m[2], m[3]});
}

double generator_distance(const ToyGenerator& gen, const ToyTarget& target) {
  auto a = gen.means();
  auto b = target.mu_star;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

}  // namespace coevgan::toy
