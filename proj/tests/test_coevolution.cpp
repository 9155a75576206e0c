#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "coevgan/coevolution.hpp"

using namespace coevgan;

namespace {

ToyBackend toy_backend(std::size_t batches = 4) {
  ToyBackendConfig c;
  c.batches_per_epoch = batches;
  return ToyBackend(c);
}

NeighborhoodState random_neighborhood(const Backend& b, std::size_t s, Rng& rng) {
  NeighborhoodState n;
  for (std::size_t k = 0; k < s; ++k) {
    n.generators.push_back({Role::Generator, b.init_generator(rng), 0.01, 0.0});
    n.discriminators.push_back({Role::Discriminator, b.init_discriminator(rng), 0.01, 0.0});
  }
  return n;
}

}  // namespace

TEST_CASE("methods") {
  CHECK(parse_method("Lipizzaner") == Method::Lipizzaner);
  CHECK(parse_method("PAGAN") == Method::PaGAN);
  CHECK_THROWS_AS(parse_method("wgan"), std::invalid_argument);
  CHECK(method_migrates(Method::SPaGAN));
  CHECK_FALSE(method_selects(Method::SPaGAN));
  CHECK(method_selects(Method::IsoCoGAN));
  CHECK_FALSE(method_migrates(Method::PaGAN));
}

TEST_CASE("evaluate all pairs") {
  auto b = toy_backend();
  Rng rng(1);
  Counters c;
  nn::MiniBatch batch;
  SUBCASE("single pair equals a direct evaluation") {
    auto n = random_neighborhood(b, 1, rng);
    auto m = evaluate_all_pairs(b, n.generators, n.discriminators, batch, c);
    CHECK(m.generator(0, 0) == b.evaluate(n.generators[0].params, n.discriminators[0].params, batch).generator);
    CHECK(c.pairwise_evaluations == 1);
  }
  SUBCASE("generators at the target give a constant 1") {
    auto n = random_neighborhood(b, 3, rng);
    for (auto& g : n.generators) g.params = {-2, 2};
    auto m = evaluate_all_pairs(b, n.generators, n.discriminators, batch, c);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) CHECK(m.generator(i, j) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("2x2 equals four independent loss calls") {
    auto n = random_neighborhood(b, 2, rng);
    auto m = evaluate_all_pairs(b, n.generators, n.discriminators, batch, c);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto& g = n.generators[i].params;
        const auto& d = n.discriminators[j].params;
        const double l = toy::toy_loss({}, {g[0], g[1]},
                                       toy::ToyDiscriminator::from_unsorted({d[0], d[1], d[2], d[3]}));
        CHECK(m.generator(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) == l);
      }
    CHECK(c.pairwise_evaluations == 4);
  }
}

TEST_CASE("fitness from matrix") {
  nn::Matrix m(2, 2);
  m << 1, 3, 2, 4;
  auto f = fitness_from_matrix(m);
  CHECK(f.generators == std::vector<double>{2, 3});
  // Column 1 has the higher adversarial loss: that discriminator is doing better.
  CHECK(f.discriminators == std::vector<double>{-1.5, -3.5});
  CHECK(f.discriminators[1] < f.discriminators[0]);
  nn::Matrix c = nn::Matrix::Constant(3, 3, 0.7);
  auto fc = fitness_from_matrix(c);
  for (double x : fc.generators) CHECK(x == doctest::Approx(0.7));
  for (double x : fc.discriminators) CHECK(x == doctest::Approx(-0.7));
}

TEST_CASE("tournament selection") {
  std::vector<double> fit{0.5, 0.1, 0.9, 0.3, 0.7};
  Rng rng(2);
  CHECK(tournament_select(fit, 5, rng) == 1);
  CHECK_THROWS_AS(tournament_select(fit, 6, rng), std::domain_error);
  CHECK_THROWS_AS(tournament_select(fit, 0, rng), std::domain_error);
  SUBCASE("tau 1 is uniform") {
    std::vector<int> counts(5, 0);
    for (int k = 0; k < 50000; ++k) ++counts[tournament_select(fit, 1, rng)];
    for (int c : counts) CHECK(std::abs(c / 50000.0 - 0.2) < 0.01);
  }
  SUBCASE("tau 2 picks the best with probability 0.4") {
    int hits = 0;
    for (int k = 0; k < 100000; ++k) hits += tournament_select(fit, 2, rng) == 1;
    CHECK(std::abs(hits / 100000.0 - 0.4) < 0.01);
  }
  SUBCASE("ties go to the lowest index") {
    std::vector<double> flat(4, 1.0);
    CHECK(tournament_select(flat, 4, rng) == 0);
  }
}

TEST_CASE("replace and center") {
  Rng rng(3);
  auto b = toy_backend();
  auto n = random_neighborhood(b, 5, rng);
  SUBCASE("equal fitness leaves the center in place") {
    auto out = replace_and_center(n, {std::vector<double>(5, 1.0), std::vector<double>(5, 1.0)});
    CHECK(out.generators[0].params == n.generators[0].params);
    CHECK(out.discriminators[0].params == n.discriminators[0].params);
  }
  SUBCASE("best moves to the center and replaces the worst") {
    Fitness f{{0.4, 0.9, 0.1, 0.5, 0.3}, {0.2, 0.1, 0.3, 0.8, 0.0}};
    auto out = replace_and_center(n, f);
    CHECK(out.generators[0].params == n.generators[2].params);
    CHECK(out.generators[0].fitness == 0.1);
    CHECK(std::count_if(out.generators.begin(), out.generators.end(),
                        [&](const Individual& i) { return i.params == n.generators[2].params; }) == 2);
    CHECK(std::none_of(out.generators.begin(), out.generators.end(),
                       [&](const Individual& i) { return i.params == n.generators[1].params; }));
    CHECK(out.discriminators[0].params == n.discriminators[4].params);
  }
  SUBCASE("never degrades the best fitness") {
    for (int k = 0; k < 200; ++k) {
      Fitness f;
      for (int i = 0; i < 5; ++i) {
        f.generators.push_back(rng.uniform());
        f.discriminators.push_back(rng.uniform());
      }
      auto out = replace_and_center(n, f);
      CHECK(out.generators[0].fitness == *std::min_element(f.generators.begin(), f.generators.end()));
      for (const auto& g : out.generators) CHECK(g.fitness >= out.generators[0].fitness);
      CHECK(out.discriminators[0].fitness ==
            *std::min_element(f.discriminators.begin(), f.discriminators.end()));
    }
  }
}

TEST_CASE("learning rate mutation") {
  Rng rng(4);
  CHECK(mutate_learning_rate(0.3, 0.0, 1.0, rng) == 0.3);
  for (int k = 0; k < 10000; ++k) {
    const double lr = mutate_learning_rate(0.5, 1.0, 5.0, rng);
    CHECK(lr >= 1e-6);
    CHECK(lr <= 1.0);
  }
  std::vector<double> mult;
  for (int k = 0; k < 100000; ++k) mult.push_back(mutate_learning_rate(0.01, 1.0, 0.1, rng) / 0.01);
  std::nth_element(mult.begin(), mult.begin() + 50000, mult.end());
  CHECK(std::abs(mult[50000] - 1.0) < 0.02);
}

TEST_CASE("spagan epoch") {
  Rng rng(5);
  auto b = toy_backend(4);
  auto n = random_neighborhood(b, 5, rng);
  Counters c;
  auto batches = b.epoch_batches(rng);
  auto out = spagan_epoch(n, b, batches, TrainConfig{}, rng, c);
  for (std::size_t k = 1; k < 5; ++k) {
    CHECK(out.generators[k] == n.generators[k]);
    CHECK(out.discriminators[k] == n.discriminators[k]);
  }
  CHECK(out.generators[0].params != n.generators[0].params);
  CHECK(c.gradient_updates == 8);
  CHECK(c.pairwise_evaluations == 0);
  CHECK(c.selections == 0);
}

TEST_CASE("spagan epoch with one pair is plain single-GAN SGD") {
  NeuralBackendConfig nc;
  nc.hidden = 8;
  nc.batch_size = 16;
  nc.batches_per_epoch = 3;
  nc.dataset.samples = 64;
  NeuralBackend b(nc);
  Rng init(6);
  auto n = init_cell({0, 0}, b, 0.05, init);
  TrainConfig cfg;
  cfg.lr_mutation_prob = 0.0;
  Rng rng(7);
  auto batches = b.epoch_batches(rng);
  Counters c;
  auto out = spagan_epoch(n, b, batches, cfg, rng, c);
  auto g = n.generators[0].params;
  auto d = n.discriminators[0].params;
  Rng unused(0);
  for (const auto& batch : batches) {
    g = b.train_generator(g, d, batch, 0.05, unused);
    d = b.train_discriminator(d, g, batch, 0.05, unused);
  }
  CHECK(out.generators[0].params == g);
  CHECK(out.discriminators[0].params == d);
}

TEST_CASE("coevolutionary epoch") {
  auto b = toy_backend(4);
  TrainConfig cfg;
  SUBCASE("counters per epoch") {
    Rng rng(8);
    auto n = random_neighborhood(b, 5, rng);
    Counters c;
    auto out = coevolutionary_epoch(n, b, b.epoch_batches(rng), cfg, rng, c);
    CHECK(c.pairwise_evaluations == 2 * 25);
    CHECK(c.gradient_updates == 2 * 5 * 4);
    CHECK(c.selections == 2 * 5);
    CHECK(c.migrations == 0);
    CHECK(out.size() == 5);
    for (const auto& g : out.generators) CHECK(g.fitness >= out.generators[0].fitness);
  }
  SUBCASE("one pair and tau 1 trains the pair like spagan") {
    cfg.tournament_size = 1;
    Rng rng(9);
    auto n = random_neighborhood(b, 1, rng);
    Counters c;
    auto out = coevolutionary_epoch(n, b, b.epoch_batches(rng), cfg, rng, c);
    CHECK(c.gradient_updates == 8);
    CHECK(out.generators[0].params != n.generators[0].params);
    CHECK(out.generators[0].learning_rate > 0.0);
  }
  SUBCASE("deterministic under a fixed seed") {
    Rng a(10), bb(10);
    auto n1 = random_neighborhood(b, 5, a);
    auto n2 = random_neighborhood(b, 5, bb);
    Counters c;
    auto o1 = coevolutionary_epoch(n1, b, b.epoch_batches(a), cfg, a, c);
    auto o2 = coevolutionary_epoch(n2, b, b.epoch_batches(bb), cfg, bb, c);
    CHECK(o1.generators == o2.generators);
    CHECK(o1.discriminators == o2.discriminators);
  }
}

TEST_CASE("pagan") {
  auto b = toy_backend(2);
  TrainConfig cfg;
  cfg.epochs = 3;
  SUBCASE("one pair matches a hand-rolled single run") {
    Counters c;
    auto out = pagan_train(b, cfg, 1, 42, c);
    Rng rng = cell_rng(42, {0, 0});
    auto n = init_cell({0, 0}, b, cfg.initial_learning_rate, rng);
    Counters c2;
    for (int e = 0; e < 3; ++e) n = spagan_epoch(n, b, b.epoch_batches(rng), cfg, rng, c2);
    CHECK(out[0].generators == n.generators);
    CHECK(c.migrations == 0);
    CHECK(c.pairwise_evaluations == 0);
  }
  SUBCASE("launch order does not matter") {
    Counters c;
    auto a = pagan_train(b, cfg, 4, 7, c);
    std::vector<std::size_t> order{3, 1, 0, 2};
    auto r = pagan_train(b, cfg, 4, 7, c, order);
    for (std::size_t k = 0; k < 4; ++k) CHECK(a[k].generators == r[k].generators);
  }
}

TEST_CASE("bootstrap subpopulations") {
  Rng rng(11);
  for (const auto& s : bootstrap_subpopulations(6, 6, rng))
    CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 6);
  for (const auto& s : bootstrap_subpopulations(6, 1, rng)) CHECK(s.size() == 1);
  CHECK_THROWS_AS(bootstrap_subpopulations(3, 4, rng), std::domain_error);
  std::vector<int> hits(5, 0);
  const int rounds = 20000;  // 5 subsets per round, 10^5 draws
  for (int k = 0; k < rounds; ++k)
    for (const auto& s : bootstrap_subpopulations(5, 3, rng))
      for (auto i : s) ++hits[i];
  for (int h : hits) CHECK(std::abs(h / (5.0 * rounds) - 0.6) < 0.01);
}
