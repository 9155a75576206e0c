#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "coevgan/audit.hpp"
#include "coevgan/config.hpp"
#include "coevgan/metrics.hpp"
#include "coevgan/runtime.hpp"

namespace coevgan {

struct AblationRun {
  Method method = Method::Lipizzaner;
  int grid_dim = 3;
  std::uint64_t seed = 1;
  RunMetrics metrics;
  Counters counters;
  AuditReport audit;
};

/// One table row: statistics over seeds for a (method, grid size) pair.
struct AblationRow {
  Method method = Method::Lipizzaner;
  int grid_dim = 3;
  SummaryStats ensemble_score;
  SummaryStats tvd;
  SummaryStats l2;  // per-run mean pairwise distance of final center generators
  bool audit_passed = true;
};

struct AblationReport {
  std::vector<AblationRun> runs;  // method-major, then grid size, then seed
  std::vector<AblationRow> rows;

  const AblationRow& row(Method m, int grid_dim) const;
};

/// Every method x grid size x seed of cfg.ablation on cfg's backend. Runs are spread
/// over a bounded pool; each run is itself deterministic so the report is too.
AblationReport run_ablation(const ExperimentConfig& cfg);

/// Long format: one line per (method, grid, metric) with Mean/Std/Median/Iqr/Min/Max.
void write_ablation_csv(const AblationReport& report, std::ostream& out);
/// One line per run, including the audited counters.
void write_ablation_runs_csv(const AblationReport& report, std::ostream& out);

}  // namespace coevgan
