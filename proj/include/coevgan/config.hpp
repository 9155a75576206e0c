#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "coevgan/backend.hpp"
#include "coevgan/coevolution.hpp"
#include "coevgan/runtime.hpp"
#include "coevgan/toy_coevolution.hpp"

namespace coevgan {

enum class BackendKind { Toy, Neural };

std::string to_string(BackendKind b);

/// Mode-collapse sweep: generator means start in [v - step/2, v + step/2] for each pair
/// of axis values v.
struct ModeHeatmapSpec {
  double lo = -10.0;
  double hi = 10.0;
  double step = 1.0;
  int repetitions = 5;
  toy::SimpleCoevConfig coev;
  toy::ToyTarget target;
  double success_threshold = 0.1;
  double disc_init_lo = -3.0;
  double disc_init_hi = 3.0;
};

/// Discriminator-collapse sweep: generators frozen, discriminator bounds (l1, r1) start
/// around axis value a and (l2, r2) around b, each within +-step/2.
struct DiscHeatmapSpec {
  double lo = -3.5;
  double hi = 3.5;
  double step = 1.0;
  int repetitions = 10;
  toy::SimpleCoevConfig coev;
  toy::ToyGenerator frozen_generator{-1.0, 2.5};
  toy::ToyTarget target{{-2.0, 1.0}};
  double escape_threshold = 0.5;
};

struct AblationSpec {
  std::vector<Method> methods{Method::Lipizzaner, Method::SPaGAN, Method::IsoCoGAN, Method::PaGAN};
  std::vector<int> grid_dims{3};
};

struct ExperimentConfig {
  // [run]
  Method method = Method::Lipizzaner;
  BackendKind backend = BackendKind::Toy;
  int grid_dim = 3;
  std::vector<std::uint64_t> seeds{1};
  ExecutionMode mode = ExecutionMode::Lockstep;
  unsigned workers = 0;
  std::string output_dir = "out";
  // [train]
  TrainConfig train;
  // [mixture]
  MixtureEvolutionConfig mixture;
  MixtureScoring scoring = MixtureScoring::WeightedSum;
  // [toy], [neural]
  ToyBackendConfig toy;
  NeuralBackendConfig neural;
  std::size_t batches_per_epoch = 4;  // shared by both backends
  // campaigns
  ModeHeatmapSpec heatmap_mode;
  DiscHeatmapSpec heatmap_disc;
  AblationSpec ablation;
  int cell_pixels = 8;

  /// Cross-field checks. Throws ConfigError naming the first offending key.
  void validate() const;
  GridRunConfig grid_run(std::uint64_t seed) const;
  std::unique_ptr<Backend> make_backend() const;
  std::uint64_t master_seed() const { return seeds.front(); }

  bool operator==(const ExperimentConfig& o) const;
};

/// Parses INI text. Unknown sections or keys and malformed values throw ConfigError.
ExperimentConfig parse_config(const std::string& text);
/// Every key, including defaults, so the output fully determines the run.
std::string serialize_config(const ExperimentConfig& cfg);
/// Reads a file and applies the COEVGAN_SEED environment override (seed only).
ExperimentConfig load_config(const std::filesystem::path& path);

inline constexpr const char* kSeedEnvVar = "COEVGAN_SEED";
void apply_env_overrides(ExperimentConfig& cfg);

/// Section -> key -> value strings, for JSON provenance blocks.
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// `prefix`-commented INI lines plus the master seed, for CSV/PGM headers.
std::string provenance_header(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& prefix = "# ");

/// Every recognised key as "section.key".
std::vector<std::string> config_keys();

}  // namespace coevgan
