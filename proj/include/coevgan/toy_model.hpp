#pragma once

#include <array>
#include <span>
#include <vector>

#include "coevgan/rng.hpp"

namespace coevgan::toy {

/// Equal-weight mixture of two unit-variance Gaussians.
struct ToyGenerator {
  double mu1 = 0.0;
  double mu2 = 0.0;

  std::array<double, 2> means() const { return {mu1, mu2}; }
};

/// Sum of indicators of [l1, r1] and [l2, r2]; requires l1 <= r1 <= l2 <= r2.
struct ToyDiscriminator {
  double l1 = 0.0;
  double r1 = 0.0;
  double l2 = 0.0;
  double r2 = 0.0;

  bool ordered() const { return l1 <= r1 && r1 <= l2 && l2 <= r2; }
  std::array<double, 4> bounds() const { return {l1, r1, l2, r2}; }
  /// Builds a discriminator from arbitrary bounds by sorting them ascending.
  static ToyDiscriminator from_unsorted(std::array<double, 4> b);
};

struct ToyTarget {
  std::array<double, 2> mu_star{-2.0, 2.0};
};

double normal_cdf(double x);
double normal_pdf(double x);

double mixture_cdf(double x, std::array<double, 2> means);
inline double mixture_cdf(double x, const ToyGenerator& gen) { return mixture_cdf(x, gen.means()); }
double mixture_pdf(double x, std::array<double, 2> means);

/// Probability mass the mixture puts inside the discriminator's two intervals.
/// Throws std::domain_error if the interval ordering is violated.
double expected_mass(std::array<double, 2> means, const ToyDiscriminator& disc);
inline double expected_mass(const ToyGenerator& gen, const ToyDiscriminator& disc) {
  return expected_mass(gen.means(), disc);
}
inline double expected_mass(const ToyTarget& target, const ToyDiscriminator& disc) {
  return expected_mass(target.mu_star, disc);
}

/// E_{G*}[D] + 1 - E_{G}[D]. The generator minimizes it, the discriminator maximizes it.
double toy_loss(const ToyTarget& target, const ToyGenerator& gen, const ToyDiscriminator& disc);

/// Partial derivatives of toy_loss in the order (mu1, mu2, l1, r1, l2, r2).
std::array<double, 6> toy_loss_gradient(const ToyTarget& target, const ToyGenerator& gen,
                                        const ToyDiscriminator& disc);

/// Adds step * N(0,1) to each coordinate. With `gene_probability` < 1 each coordinate is
/// perturbed independently with that probability, and at least one always is.
std::vector<double> mutate_toy(std::span<const double> params, double step, Rng& rng,
                               double gene_probability = 1.0);

ToyGenerator mutate(const ToyGenerator& gen, double step, Rng& rng, double gene_probability = 1.0);
/// Mutated bounds are sorted to restore l1 <= r1 <= l2 <= r2.
ToyDiscriminator mutate(const ToyDiscriminator& disc, double step, Rng& rng,
                        double gene_probability = 1.0);

/// Euclidean distance between sorted mean pairs, so component labels do not matter.
double generator_distance(const ToyGenerator& gen, const ToyTarget& target);

}  // namespace coevgan::toy
