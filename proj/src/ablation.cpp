#include "coevgan/ablation.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "coevgan/parallel.hpp"

namespace coevgan {

const AblationRow& AblationReport::row(Method m, int grid_dim) const {
  for (const auto& r : rows)
    if (r.method == m && r.grid_dim == grid_dim) return r;
  throw std::out_of_range("no ablation row for " + to_string(m) + " on " + std::to_string(grid_dim));
}

AblationReport run_ablation(const ExperimentConfig& cfg) {
  AblationReport report;
  for (Method m : cfg.ablation.methods)
    for (int dim : cfg.ablation.grid_dims)
      for (std::uint64_t seed : cfg.seeds) report.runs.push_back({m, dim, seed, {}, {}, {}});

  const auto backend = cfg.make_backend();
  const unsigned pool = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  parallel_for(report.runs.size(), pool, [&](std::size_t k) {
    auto& run = report.runs[k];
    ExperimentConfig c = cfg;
    c.method = run.method;
    c.grid_dim = run.grid_dim;
    auto g = c.grid_run(run.seed);
    // With several runs in flight, keep each one on its own thread.
    if (report.runs.size() > 1 && pool > 1) g.workers = 1;
    const auto result = run_grid(*backend, g);
    run.metrics = evaluate_run(*backend, result);
    run.counters = result.counters;
    run.audit = audit_interactions(result.counters, run.method, GridConfig{run.grid_dim}, c.train.epochs,
                                   static_cast<int>(cfg.batches_per_epoch));
  });

  for (Method m : cfg.ablation.methods)
    for (int dim : cfg.ablation.grid_dims) {
      std::vector<double> score, tvd, l2;
      bool ok = true;
      for (const auto& r : report.runs)
        if (r.method == m && r.grid_dim == dim) {
          score.push_back(r.metrics.ensemble_score);
          tvd.push_back(r.metrics.tvd);
          l2.push_back(r.metrics.l2.mean);
          ok = ok && r.audit.passed();
        }
      report.rows.push_back({m, dim, summarize(score), summarize(tvd), summarize(l2), ok});
    }
  return report;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_ablation_csv(const AblationReport& report, std::ostream& out) {
  out << "method,grid,metric,mean,std,median,iqr,min,max,runs,audit\n";
  for (const auto& r : report.rows) {
    const std::pair<const char*, const SummaryStats*> metrics[] = {
        {"ensemble_score", &r.ensemble_score}, {"tvd", &r.tvd}, {"l2_diversity", &r.l2}};
    for (const auto& [name, s] : metrics)
      out << to_string(r.method) << ',' << r.grid_dim << 'x' << r.grid_dim << ',' << name << ',' << num(s->mean)
          << ',' << num(s->stddev) << ',' << num(s->median) << ',' << num(s->iqr) << ',' << num(s->min) << ','
          << num(s->max) << ',' << s->count << ',' << (r.audit_passed ? "pass" : "FAIL") << '\n';
  }
}

void write_ablation_runs_csv(const AblationReport& report, std::ostream& out) {
  out << "method,grid,seed,ensemble_score,tvd,low_quality,mixture_score,l2_mean,"
         "pairwise_evaluations,gradient_updates,migrations,selections,audit\n";
  for (const auto& r : report.runs)
    out << to_string(r.method) << ',' << r.grid_dim << 'x' << r.grid_dim << ',' << r.seed << ','
        << num(r.metrics.ensemble_score) << ',' << num(r.metrics.tvd) << ',' << num(r.metrics.low_quality) << ','
        << num(r.metrics.mixture_score) << ',' << num(r.metrics.l2.mean) << ',' << r.counters.pairwise_evaluations
        << ',' << r.counters.gradient_updates << ',' << r.counters.migrations << ',' << r.counters.selections << ','
        << (r.audit.passed() ? "pass" : "FAIL") << '\n';
}

}  // namespace coevgan
