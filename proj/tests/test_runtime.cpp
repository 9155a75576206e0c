#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <sstream>
#include <thread>

#include "coevgan/errors.hpp"
#include "coevgan/runtime.hpp"

using namespace coevgan;

namespace {

ToyBackend toy_backend(std::size_t batches = 4) {
  ToyBackendConfig c;
  c.batches_per_epoch = batches;
  return ToyBackend(c);
}

GridRunConfig grid_cfg(Method m, int dim, int epochs, std::uint64_t seed = 1) {
  GridRunConfig g;
  g.method = m;
  g.grid_dim = dim;
  g.train.method = m;
  g.train.epochs = epochs;
  g.seed = seed;
  return g;
}

CellSnapshot snap(GridCoord c, int epoch, double value = 0.0) {
  CellSnapshot s;
  s.cell = c;
  s.epoch = epoch;
  s.generator = {Role::Generator, Params(16, value), 0.01, 0.0};
  s.discriminator = {Role::Discriminator, Params(16, value), 0.01, 0.0};
  return s;
}

void check_same(const GridResult& a, const GridResult& b) {
  REQUIRE(a.final_states.size() == b.final_states.size());
  for (std::size_t k = 0; k < a.final_states.size(); ++k) {
    CHECK(a.final_states[k].generators == b.final_states[k].generators);
    CHECK(a.final_states[k].discriminators == b.final_states[k].discriminators);
  }
  CHECK(a.counters == b.counters);
  CHECK(a.best_index == b.best_index);
  std::ostringstream ta, tb;
  write_progress_csv(a, ta);
  write_progress_csv(b, tb);
  CHECK(ta.str() == tb.str());
}

// Delegates to the toy backend but fails every generator update.
class FailingBackend final : public Backend {
 public:
  std::string name() const override { return "failing"; }
  Params init_generator(Rng& r) const override { return toy_.init_generator(r); }
  Params init_discriminator(Rng& r) const override { return toy_.init_discriminator(r); }
  std::vector<nn::MiniBatch> epoch_batches(Rng& r) const override { return toy_.epoch_batches(r); }
  nn::GanLosses evaluate(const Params& g, const Params& d, const nn::MiniBatch& b) const override {
    return toy_.evaluate(g, d, b);
  }
  Params train_generator(const Params&, const Params&, const nn::MiniBatch&, double, Rng&) const override {
    throw NumericError("generator update produced NaN");
  }
  Params train_discriminator(const Params& d, const Params& g, const nn::MiniBatch& b, double lr,
                             Rng& r) const override {
    return toy_.train_discriminator(d, g, b, lr, r);
  }
  double generator_score(const Params& g, Rng& r) const override { return toy_.generator_score(g, r); }
  double ensemble_score(std::span<const Params> gens, const MixtureWeights& w, Rng& r) const override {
    return toy_.ensemble_score(gens, w, r);
  }

 private:
  ToyBackend toy_ = toy_backend(1);
};

}  // namespace

TEST_CASE("snapshot board stamps") {
  SnapshotBoard board(GridConfig{2});
  CHECK(board.latest({0, 1}) == nullptr);
  board.publish(snap({0, 1}, 0));
  board.publish(snap({0, 1}, 1));
  CHECK(board.latest({0, 1})->epoch == 1);
  CHECK_THROWS_AS(board.publish(snap({0, 1}, 3)), std::logic_error);
  CHECK_THROWS_AS(board.publish(snap({1, 1}, 1)), std::logic_error);
  CHECK(board.latest({1, 1}) == nullptr);
}

TEST_CASE("gather") {
  auto b = toy_backend();
  Rng rng(1);
  SUBCASE("3x3: center plus four neighbors") {
    SnapshotBoard board(GridConfig{3});
    for (auto c : GridConfig{3}.all_cells()) board.publish(snap(c, 0, 10.0 * c.row + c.col));
    auto own = init_cell({1, 1}, b, 0.01, rng);
    const auto g = gather(board, own, 0);
    CHECK(g.state.size() == 5);
    CHECK(g.migrations == 4);
    CHECK(g.skew == 0);
    CHECK(g.state.generators[0] == own.generators[0]);
    // W, N, E, S of (1,1).
    CHECK(g.state.generators[1].params[0] == 10.0);
    CHECK(g.state.generators[2].params[0] == 1.0);
    CHECK(g.state.generators[3].params[0] == 12.0);
    CHECK(g.state.generators[4].params[0] == 21.0);
  }
  SUBCASE("1x1: nothing to gather") {
    SnapshotBoard board(GridConfig{1});
    board.publish(snap({0, 0}, 0));
    const auto g = gather(board, init_cell({0, 0}, b, 0.01, rng), 0);
    CHECK(g.state.size() == 1);
    CHECK(g.migrations == 0);
  }
  SUBCASE("2x2: wrapped neighbors repeat") {
    SnapshotBoard board(GridConfig{2});
    for (auto c : GridConfig{2}.all_cells()) board.publish(snap(c, 0, 10.0 * c.row + c.col));
    const auto g = gather(board, init_cell({0, 0}, b, 0.01, rng), 0);
    CHECK(g.state.size() == 5);
    CHECK(g.state.generators[1].params == g.state.generators[3].params);
  }
  SUBCASE("stale neighbors are reported as skew") {
    SnapshotBoard board(GridConfig{3});
    for (auto c : GridConfig{3}.all_cells()) board.publish(snap(c, 0));
    board.publish(snap({0, 1}, 1));
    const auto g = gather(board, init_cell({1, 1}, b, 0.01, rng), 2);
    CHECK(g.skew == 2);
  }
}

TEST_CASE("1x1 spagan run") {
  auto b = toy_backend(3);
  const auto r = run_grid(b, grid_cfg(Method::SPaGAN, 1, 4));
  CHECK(r.final_states.size() == 1);
  CHECK(r.counters.gradient_updates == 2 * 3 * 4);
  CHECK(r.counters.migrations == 0);
  CHECK(r.ensembles.size() == 1);
  CHECK(r.trace.size() == 4);
}

TEST_CASE("lockstep runs are reproducible and independent of worker count") {
  auto b = toy_backend(2);
  for (Method m : {Method::Lipizzaner, Method::SPaGAN, Method::IsoCoGAN, Method::PaGAN}) {
    CAPTURE(to_string(m));
    auto cfg = grid_cfg(m, 3, 4, 11);
    cfg.workers = 1;
    const auto a = run_grid(b, cfg);
    cfg.workers = 4;
    const auto c = run_grid(b, cfg);
    check_same(a, c);
    cfg.seed = 12;
    const auto d = run_grid(b, cfg);
    CHECK_FALSE(d.final_states[0].generators == a.final_states[0].generators);
  }
}

TEST_CASE("lipizzaner migrations and gathers") {
  auto b = toy_backend(4);
  const auto r = run_grid(b, grid_cfg(Method::Lipizzaner, 3, 20));
  CHECK(r.counters.migrations == 9 * 20 * 4);
  for (int calls : r.gather_calls) CHECK(calls == 20);
  CHECK(r.max_epoch_skew == 0);
  std::uint64_t sum = 0;
  for (const auto& c : r.cell_counters) sum += c.migrations;
  CHECK(sum == r.counters.migrations);
}

TEST_CASE("isocogan gathers exactly once per cell") {
  auto b = toy_backend(2);
  const auto r = run_grid(b, grid_cfg(Method::IsoCoGAN, 3, 6));
  for (int calls : r.gather_calls) CHECK(calls == 1);
  CHECK(r.counters.migrations == 9 * 4);
  CHECK(r.counters.selections > 0);
}

TEST_CASE("pagan never gathers and ensembles bootstrap subsets") {
  auto b = toy_backend(2);
  const auto r = run_grid(b, grid_cfg(Method::PaGAN, 3, 3));
  for (int calls : r.gather_calls) CHECK(calls == 0);
  CHECK(r.counters.migrations == 0);
  CHECK(r.ensembles.size() == 9);
  for (const auto& e : r.ensembles) CHECK(e.generators.size() == 5);
}

TEST_CASE("async mode") {
  auto b = toy_backend(2);
  SUBCASE("pagan has no communication, so async equals lockstep") {
    auto cfg = grid_cfg(Method::PaGAN, 3, 3, 5);
    const auto lock = run_grid(b, cfg);
    cfg.mode = ExecutionMode::Async;
    const auto async = run_grid(b, cfg);
    for (std::size_t k = 0; k < 9; ++k) CHECK(lock.final_states[k].generators == async.final_states[k].generators);
  }
  SUBCASE("counters do not depend on timing") {
    auto cfg = grid_cfg(Method::Lipizzaner, 3, 5, 5);
    const auto lock = run_grid(b, cfg);
    cfg.mode = ExecutionMode::Async;
    const auto async = run_grid(b, cfg);
    CHECK(async.counters == lock.counters);
    CHECK(async.max_epoch_skew >= 0);
  }
}

TEST_CASE("failures name the cell and keep their type") {
  FailingBackend b;
  for (ExecutionMode mode : {ExecutionMode::Lockstep, ExecutionMode::Async}) {
    auto cfg = grid_cfg(Method::Lipizzaner, 2, 3);
    cfg.mode = mode;
    try {
      run_grid(b, cfg);
      FAIL("expected a NumericError");
    } catch (const NumericError& e) {
      CHECK(std::string(e.what()).rfind("cell (", 0) == 0);
      CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
    }
  }
}

TEST_CASE("run_grid validation") {
  auto b = toy_backend();
  CHECK_THROWS_AS(run_grid(b, grid_cfg(Method::Lipizzaner, 0, 1)), ConfigError);
  auto cfg = grid_cfg(Method::Lipizzaner, 3, 1);
  cfg.train.tournament_size = 6;
  CHECK_THROWS_AS(run_grid(b, cfg), ConfigError);
  cfg.train.tournament_size = 2;
  cfg.mixture.mutation_rate = 0.0;
  CHECK_THROWS_AS(run_grid(b, cfg), ConfigError);
}

TEST_CASE("snapshots are never observed half-written") {
  // One writer republishes a cell with every parameter equal to the epoch number;
  // readers must always see a uniform vector whose value matches the stamp, and
  // stamps must never go backwards.
  SnapshotBoard board(GridConfig{1});
  board.publish(snap({0, 0}, 0, 0.0));
  constexpr int kEpochs = 20000;
  std::atomic<bool> done{false};
  std::atomic<int> torn{0}, regressions{0};
  std::vector<std::jthread> readers;
  for (int t = 0; t < 3; ++t)
    readers.emplace_back([&] {
      int last = 0;
      while (!done) {
        const auto s = board.latest({0, 0});
        const double v = s->generator.params.front();
        for (double x : s->generator.params)
          if (x != v) ++torn;
        for (double x : s->discriminator.params)
          if (x != v) ++torn;
        if (v != s->epoch) ++torn;
        if (s->epoch < last) ++regressions;
        last = s->epoch;
      }
    });
  for (int e = 1; e <= kEpochs; ++e) board.publish(snap({0, 0}, e, e));
  done = true;
  readers.clear();
  CHECK(torn == 0);
  CHECK(regressions == 0);
  CHECK(board.latest({0, 0})->epoch == kEpochs);
}

TEST_CASE("evaluate_run and progress csv") {
  auto b = toy_backend(2);
  const auto r = run_grid(b, grid_cfg(Method::Lipizzaner, 2, 3));
  const auto m = evaluate_run(b, r);
  CHECK(m.ensemble_score >= 0.0);
  CHECK(std::isnan(m.tvd));
  CHECK(m.l2.count == 6);
  std::ostringstream out;
  write_progress_csv(r, out);
  const auto text = out.str();
  CHECK(text.rfind("cell,epoch,best_g_fitness,best_d_fitness,mixture_score\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4 * 3);
}
