#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coevgan/coevolution.hpp"
#include "coevgan/grid.hpp"

namespace coevgan {

struct AuditRow {
  std::string counter;
  std::string formula;
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;

  bool ok() const { return expected == actual; }
};

struct AuditReport {
  Method method = Method::Lipizzaner;
  int grid_dim = 0;
  int epochs = 0;
  int batches = 0;
  std::vector<AuditRow> rows;
  /// All-pairs evaluations one panmictic epoch pair would cost at the same population
  /// (2 N^2 per epoch); reported for comparison, not checked.
  std::uint64_t panmictic_pairwise = 0;

  bool passed() const;
};

/// Members per sub-population on an m x m torus: the center plus every neighbor slot
/// that is not the cell itself.
std::size_t effective_subpopulation(int grid_dim);

/// Compares recorded counters with their closed-form values for `method`.
AuditReport audit_interactions(const Counters& counters, Method method, const GridConfig& grid,
                               int epochs, int batches);

/// Throws AuditFailure listing every mismatching counter.
void require_passed(const AuditReport& report);

}  // namespace coevgan
