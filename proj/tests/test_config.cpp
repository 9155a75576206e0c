#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "coevgan/config.hpp"
#include "coevgan/errors.hpp"

using namespace coevgan;

namespace {

std::string field_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults survive a round trip") {
  const ExperimentConfig d;
  const auto text = serialize_config(d);
  CHECK(parse_config(text) == d);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("round trip of non-default values") {
  const auto cfg = parse_config(
      "[run]\nmethod = isocogan\nbackend = neural\ngrid_dim = 4\nepochs = 7\nseeds = 3, 9,12\nmode = async\n"
      "[train]\nlearning_rate = 0.1234567890123\nlr_mutation_scale = 0.3\n"
      "[mixture]\nscoring = sampled-ensemble\n[neural]\nstddev = 0.2\n"
      "[heatmap_disc]\nlo = -2.5\nhi = 2.5\n[ablation]\nmethods = pagan, spagan\ngrid_dims = 2,3\n");
  CHECK(cfg.method == Method::IsoCoGAN);
  CHECK(cfg.backend == BackendKind::Neural);
  CHECK(cfg.seeds == std::vector<std::uint64_t>{3, 9, 12});
  CHECK(cfg.mode == ExecutionMode::Async);
  CHECK(cfg.train.initial_learning_rate == 0.1234567890123);
  CHECK(cfg.scoring == MixtureScoring::SampledEnsemble);
  CHECK(cfg.ablation.methods == std::vector<Method>{Method::PaGAN, Method::SPaGAN});
  CHECK(parse_config(serialize_config(cfg)) == cfg);
  CHECK(cfg.grid_run(9).train.method == Method::IsoCoGAN);
  CHECK(cfg.grid_run(9).seed == 9);
}

TEST_CASE("every key is serialized and unique") {
  const auto keys = config_keys();
  const auto text = serialize_config(ExperimentConfig{});
  std::set<std::string> seen(keys.begin(), keys.end());
  CHECK(seen.size() == keys.size());
  for (const auto& k : keys) {
    const auto key = k.substr(k.find('.') + 1);
    CHECK_MESSAGE(text.find("\n" + key + " = ") != std::string::npos, k);
  }
}

TEST_CASE("errors name the offending field") {
  CHECK(field_of("[run]\nmethod = wgan\n") == "run.method");
  CHECK(field_of("[run]\nbogus = 1\n") == "run.bogus");
  CHECK(field_of("[nope]\nx = 1\n") == "nope.x");
  CHECK(field_of("stray = 1\n") == "stray");
  CHECK(field_of("[run]\ngrid_dim = three\n") == "run.grid_dim");
  CHECK(field_of("[run]\ngrid_dim = 0\n") == "run.grid_dim");
  CHECK(field_of("[run]\nseeds =\n") == "run.seeds");
  CHECK(field_of("[train]\ntournament_size = 6\n") == "train.tournament_size");
  CHECK(field_of("[train]\nlr_mutation_prob = 1.5\n") == "train.lr_mutation_prob");
  CHECK(field_of("[heatmap_mode]\nstep = 0\n") == "heatmap_mode.step");
  CHECK(field_of("[heatmap_disc]\nlo = 3\nhi = 1\n") == "heatmap_disc.lo");
  CHECK(field_of("[mixture]\nscoring = best\n") == "mixture.scoring");
  CHECK(field_of("[ablation]\nmethods = lipizzaner, gan\n") == "ablation.methods");
  CHECK(field_of("[render]\ncell_pixels = 0\n") == "render.cell_pixels");
}

TEST_CASE("seed override from the environment") {
  const auto path = std::filesystem::temp_directory_path() / "coevgan_test_config.ini";
  std::ofstream(path) << "[run]\nseeds = 4,5\n";
  ::unsetenv(kSeedEnvVar);
  CHECK(load_config(path).seeds == std::vector<std::uint64_t>{4, 5});
  ::setenv(kSeedEnvVar, "77", 1);
  CHECK(load_config(path).seeds == std::vector<std::uint64_t>{77});
  ::setenv(kSeedEnvVar, "x7", 1);
  CHECK_THROWS_AS(load_config(path), ConfigError);
  ::unsetenv(kSeedEnvVar);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}

TEST_CASE("provenance") {
  ExperimentConfig cfg;
  cfg.grid_dim = 5;
  const auto header = provenance_header(cfg, 42);
  CHECK(header.rfind("# master_seed = 42\n", 0) == 0);
  CHECK(header.find("# grid_dim = 5\n") != std::string::npos);
  const auto j = config_to_json(cfg);
  CHECK(j["run"]["grid_dim"] == "5");
  CHECK(j.size() == 9);
}

TEST_CASE("backend factory") {
  ExperimentConfig cfg;
  cfg.batches_per_epoch = 3;
  Rng rng(1);
  CHECK(cfg.make_backend()->name() == "toy");
  CHECK(cfg.make_backend()->epoch_batches(rng).size() == 3);
  cfg.backend = BackendKind::Neural;
  cfg.neural.hidden = 4;
  CHECK(cfg.make_backend()->name() == "neural");
  CHECK(cfg.make_backend()->epoch_batches(rng).size() == 3);
}
