#pragma once

#include <exception>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "coevgan/config.hpp"

namespace coevgan {

/// Process exit codes shared by the CLI and the acceptance runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitConfig = 2,
  kExitNumeric = 3,
  kExitAudit = 4,
};

/// Each command writes into `out_dir` (created if missing) and prints a short summary
/// to `log`. Every file carries the resolved config and master seed. Errors propagate
/// as ConfigError / NumericError / AuditFailure; see exit_code_for.

/// run_grid for every seed: progress_<seed>.csv, ensembles_<seed>.json, and one
/// metrics.csv / run.json over all seeds.
void cmd_run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
/// heatmap_mode.{csv,json,pgm}.
void cmd_heatmap_mode(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
/// heatmap_disc.{csv,json,pgm}.
void cmd_heatmap_disc(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
/// ablation.csv, ablation_runs.csv, ablation.json, ablation.txt. Throws AuditFailure
/// after writing if any run's counters disagree with the closed form.
void cmd_ablate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
/// Heatmap CSVs become .pgm + .txt; other CSVs become aligned .txt tables.
void cmd_render(const std::vector<std::filesystem::path>& inputs, int cell_pixels,
                const std::filesystem::path& out_dir, std::ostream& log);
/// Runs every method in cfg.ablation.methods once on cfg.grid_dim with the master seed
/// and checks its counters; writes audit.csv and audit.json, throws AuditFailure on
/// mismatch.
void cmd_audit(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// Maps an exception to its exit code and prints it to `err`.
int exit_code_for(std::exception_ptr e, std::ostream& err);

}  // namespace coevgan
