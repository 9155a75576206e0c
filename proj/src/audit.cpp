#include "coevgan/audit.hpp"

#include "coevgan/errors.hpp"

namespace coevgan {

bool AuditReport::passed() const {
  for (const auto& r : rows)
    if (!r.ok()) return false;
  return true;
}

std::size_t effective_subpopulation(int grid_dim) {
  return grid_dim == 1 ? 1 : static_cast<std::size_t>(GridConfig::kNeighborhoodSize);
}

AuditReport audit_interactions(const Counters& counters, Method method, const GridConfig& grid,
                               int epochs, int batches) {
  const std::uint64_t n = static_cast<std::uint64_t>(grid.population_size());
  const std::uint64_t s = effective_subpopulation(grid.grid_dim);
  const std::uint64_t t = static_cast<std::uint64_t>(epochs);
  const std::uint64_t b = static_cast<std::uint64_t>(batches);

  AuditReport r{method, grid.grid_dim, epochs, batches, {}, 2 * n * n * t};
  const bool coev = method_selects(method);
  r.rows.push_back({"pairwise_evaluations", coev ? "2*s^2*N*T" : "0", coev ? 2 * s * s * n * t : 0,
                    counters.pairwise_evaluations});
  r.rows.push_back({"gradient_updates", coev ? "2*s*B*N*T" : "2*B*N*T",
                    coev ? 2 * s * b * n * t : 2 * b * n * t, counters.gradient_updates});
  switch (method) {
    case Method::Lipizzaner:
    case Method::SPaGAN:
      r.rows.push_back({"migrations", "(s-1)*N*T", (s - 1) * n * t, counters.migrations});
      break;
    case Method::IsoCoGAN:
      r.rows.push_back({"migrations", "(s-1)*N", (s - 1) * n, counters.migrations});
      break;
    case Method::PaGAN:
      r.rows.push_back({"migrations", "0", 0, counters.migrations});
      break;
  }
  r.rows.push_back({"selections", coev ? "2*s*N*T" : "0", coev ? 2 * s * n * t : 0, counters.selections});
  return r;
}

void require_passed(const AuditReport& report) {
  std::string msg;
  for (const auto& row : report.rows)
    if (!row.ok())
      msg += " " + row.counter + ": expected " + std::to_string(row.expected) + " (" + row.formula +
             "), recorded " + std::to_string(row.actual) + ";";
  if (!msg.empty()) throw AuditFailure(to_string(report.method) + " audit failed:" + msg);
}

}  // namespace coevgan
