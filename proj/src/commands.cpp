#include "coevgan/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "coevgan/ablation.hpp"
#include "coevgan/audit.hpp"
#include "coevgan/errors.hpp"
#include "coevgan/heatmaps.hpp"
#include "coevgan/report.hpp"
#include "coevgan/runtime.hpp"

namespace coevgan {

namespace fs = std::filesystem;
using nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

fs::path prepare(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

ojson provenance(const ExperimentConfig& cfg, std::uint64_t seed) {
  ojson p;
  p["master_seed"] = seed;
  p["config"] = config_to_json(cfg);
  return p;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

// NaN has no JSON spelling; emit null.
ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson to_json(const Counters& c) {
  return {{"pairwise_evaluations", c.pairwise_evaluations},
          {"gradient_updates", c.gradient_updates},
          {"migrations", c.migrations},
          {"selections", c.selections}};
}

ojson to_json(const AuditReport& a) {
  ojson rows = ojson::array();
  for (const auto& r : a.rows)
    rows.push_back({{"counter", r.counter}, {"formula", r.formula}, {"expected", r.expected},
                    {"actual", r.actual}, {"ok", r.ok()}});
  return {{"method", to_string(a.method)}, {"grid_dim", a.grid_dim}, {"epochs", a.epochs},
          {"batches", a.batches},          {"passed", a.passed()},   {"panmictic_pairwise", a.panmictic_pairwise},
          {"rows", rows}};
}

ojson to_json(const SummaryStats& s) {
  return {{"mean", number(s.mean)},   {"std", number(s.stddev)}, {"median", number(s.median)},
          {"iqr", number(s.iqr)},     {"min", number(s.min)},    {"max", number(s.max)},
          {"count", s.count}};
}

ojson heatmap_json(const HeatmapResult& h) {
  return {{"row_label", h.row_label}, {"col_label", h.col_label}, {"row_axis", h.row_axis},
          {"col_axis", h.col_axis},   {"repetitions", h.repetitions}, {"mean", h.mean()},
          {"diagonal_mean", h.diagonal_mean()}};
}

void emit_heatmap(const HeatmapResult& h, const std::string& stem, ojson summary, const ExperimentConfig& cfg,
                  const fs::path& out_dir, std::ostream& log) {
  const auto seed = cfg.master_seed();
  const auto header = provenance_header(cfg, seed);
  std::ostringstream csv;
  write_heatmap_csv(h, csv, header);
  write_file(out_dir / (stem + ".csv"), csv.str());
  write_file(out_dir / (stem + ".pgm"), render_pgm(h, cfg.cell_pixels, header));
  ojson j;
  j["provenance"] = provenance(cfg, seed);
  j["heatmap"] = heatmap_json(h);
  j["summary"] = std::move(summary);
  write_file(out_dir / (stem + ".json"), dump(j));
  log << render_heatmap_table(h);
}

}  // namespace

void cmd_run(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  prepare(out_dir);
  const auto backend = cfg.make_backend();
  const auto master = cfg.master_seed();
  std::ostringstream metrics;
  metrics << provenance_header(cfg, master);
  metrics << "seed,ensemble_score,tvd,low_quality,mixture_score,l2_mean,l2_std,l2_min,l2_max,"
             "pairwise_evaluations,gradient_updates,migrations,selections,best_cell,max_epoch_skew\n";
  ojson runs = ojson::array();
  for (auto seed : cfg.seeds) {
    const auto result = run_grid(*backend, cfg.grid_run(seed));
    const auto m = evaluate_run(*backend, result);
    const auto& c = result.counters;
    const auto audit =
        audit_interactions(c, cfg.method, GridConfig{cfg.grid_dim}, cfg.train.epochs, static_cast<int>(cfg.batches_per_epoch));
    metrics << seed << ',' << num(m.ensemble_score) << ',' << num(m.tvd) << ',' << num(m.low_quality) << ','
            << num(m.mixture_score) << ',' << num(m.l2.mean) << ',' << num(m.l2.stddev) << ',' << num(m.l2.min)
            << ',' << num(m.l2.max) << ',' << c.pairwise_evaluations << ',' << c.gradient_updates << ','
            << c.migrations << ',' << c.selections << ',' << to_string(result.best().cell) << ','
            << result.max_epoch_skew << '\n';

    std::ostringstream progress;
    progress << provenance_header(cfg, seed);
    write_progress_csv(result, progress);
    write_file(out_dir / ("progress_" + std::to_string(seed) + ".csv"), progress.str());

    ojson ens;
    ens["provenance"] = provenance(cfg, seed);
    ens["best_index"] = result.best_index;
    ens["ensembles"] = ojson::array();
    for (const auto& e : result.ensembles) ens["ensembles"].push_back(ojson::parse(coevgan::to_json(e).dump()));
    write_file(out_dir / ("ensembles_" + std::to_string(seed) + ".json"), dump(ens));

    runs.push_back({{"seed", seed},
                    {"ensemble_score", number(m.ensemble_score)},
                    {"tvd", number(m.tvd)},
                    {"low_quality", number(m.low_quality)},
                    {"mixture_score", number(m.mixture_score)},
                    {"l2_diversity", to_json(m.l2)},
                    {"counters", to_json(c)},
                    {"audit", to_json(audit)},
                    {"best_cell", to_string(result.best().cell)}});
    log << "seed " << seed << ": ensemble score " << num(m.ensemble_score) << ", best cell "
        << to_string(result.best().cell) << ", audit " << (audit.passed() ? "pass" : "FAIL") << '\n';
  }
  write_file(out_dir / "metrics.csv", metrics.str());
  ojson j;
  j["provenance"] = provenance(cfg, master);
  j["runs"] = runs;
  write_file(out_dir / "run.json", dump(j));
}

void cmd_heatmap_mode(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  prepare(out_dir);
  const auto h = mode_collapse_heatmap(cfg.heatmap_mode, cfg.master_seed(), cfg.workers);
  ojson summary = {{"mean_success", h.mean()},
                   {"diagonal_success", h.diagonal_mean()},
                   {"success_threshold", cfg.heatmap_mode.success_threshold}};
  emit_heatmap(h, "heatmap_mode", summary, cfg, out_dir, log);
  log << "mean success " << num(h.mean()) << ", diagonal " << num(h.diagonal_mean()) << '\n';
}

void cmd_heatmap_disc(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  prepare(out_dir);
  const auto h = discriminator_collapse_heatmap(cfg.heatmap_disc, cfg.master_seed(), cfg.workers);
  const auto q = quadrant_summary(h);
  ojson summary = {{"escape_rule", "expected_mass(target, best discriminator) >= escape_threshold"},
                   {"escape_threshold", cfg.heatmap_disc.escape_threshold},
                   {"neg_neg", q.neg_neg},
                   {"neg_pos", q.neg_pos},
                   {"pos_neg", q.pos_neg},
                   {"pos_pos", q.pos_pos}};
  emit_heatmap(h, "heatmap_disc", summary, cfg, out_dir, log);
  log << "quadrants: neg-neg " << num(q.neg_neg) << ", neg-pos " << num(q.neg_pos) << ", pos-neg "
      << num(q.pos_neg) << ", pos-pos " << num(q.pos_pos) << '\n';
}

void cmd_ablate(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  prepare(out_dir);
  const auto report = run_ablation(cfg);
  const auto header = provenance_header(cfg, cfg.master_seed());

  std::ostringstream table, runs_csv;
  table << header;
  write_ablation_csv(report, table);
  runs_csv << header;
  write_ablation_runs_csv(report, runs_csv);
  write_file(out_dir / "ablation.csv", table.str());
  write_file(out_dir / "ablation_runs.csv", runs_csv.str());

  std::istringstream again(table.str());
  const auto text = render_csv_table(again);
  write_file(out_dir / "ablation.txt", text);
  log << text;

  ojson j;
  j["provenance"] = provenance(cfg, cfg.master_seed());
  j["rows"] = ojson::array();
  for (const auto& r : report.rows)
    j["rows"].push_back({{"method", to_string(r.method)},
                         {"grid_dim", r.grid_dim},
                         {"ensemble_score", to_json(r.ensemble_score)},
                         {"tvd", to_json(r.tvd)},
                         {"l2_diversity", to_json(r.l2)},
                         {"audit_passed", r.audit_passed}});
  j["runs"] = ojson::array();
  for (const auto& r : report.runs)
    j["runs"].push_back({{"method", to_string(r.method)},
                         {"grid_dim", r.grid_dim},
                         {"seed", r.seed},
                         {"ensemble_score", number(r.metrics.ensemble_score)},
                         {"tvd", number(r.metrics.tvd)},
                         {"low_quality", number(r.metrics.low_quality)},
                         {"l2_mean", number(r.metrics.l2.mean)},
                         {"counters", to_json(r.counters)},
                         {"audit", to_json(r.audit)}});
  write_file(out_dir / "ablation.json", dump(j));

  for (const auto& r : report.runs) require_passed(r.audit);
}

void cmd_render(const std::vector<fs::path>& inputs, int cell_pixels, const fs::path& out_dir, std::ostream& log) {
  if (inputs.empty()) throw ConfigError("input", "no files to render");
  if (cell_pixels < 1) throw ConfigError("render.cell_pixels", "must be >= 1");
  prepare(out_dir);
  for (const auto& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("input", "cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    // Carry the source's provenance comments into the rendered files.
    std::string header;
    std::istringstream lines(text);
    for (std::string line; std::getline(lines, line);)
      if (line.rfind("# ", 0) == 0 && line.rfind("# heatmap_repetitions", 0) != 0) header += line + "\n";

    const auto stem = out_dir / path.stem();
    std::istringstream probe(text);
    if (looks_like_heatmap(probe)) {
      std::istringstream src(text);
      const auto h = read_heatmap_csv(src);
      write_file(stem.string() + ".pgm", render_pgm(h, cell_pixels, header));
      write_file(stem.string() + ".txt", render_heatmap_table(h));
      log << path.string() << " -> " << stem.string() << ".pgm (" << h.col_axis.size() * cell_pixels << "x"
          << h.row_axis.size() * cell_pixels << ")\n";
    } else {
      std::istringstream src(text);
      write_file(stem.string() + ".txt", render_csv_table(src));
      log << path.string() << " -> " << stem.string() << ".txt\n";
    }
  }
}

void cmd_audit(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& log) {
  prepare(out_dir);
  const auto backend = cfg.make_backend();
  const auto seed = cfg.master_seed();
  std::ostringstream csv;
  csv << provenance_header(cfg, seed);
  csv << "method,grid,epochs,batches,counter,formula,expected,actual,ok\n";
  ojson reports = ojson::array();
  std::vector<AuditReport> all;
  for (Method m : cfg.ablation.methods) {
    ExperimentConfig c = cfg;
    c.method = m;
    const auto result = run_grid(*backend, c.grid_run(seed));
    const auto a = audit_interactions(result.counters, m, GridConfig{cfg.grid_dim}, cfg.train.epochs,
                                      static_cast<int>(cfg.batches_per_epoch));
    for (const auto& r : a.rows)
      csv << to_string(m) << ',' << cfg.grid_dim << 'x' << cfg.grid_dim << ',' << a.epochs << ',' << a.batches << ','
          << r.counter << ',' << r.formula << ',' << r.expected << ',' << r.actual << ',' << (r.ok() ? "pass" : "FAIL")
          << '\n';
    log << to_string(m) << ": " << (a.passed() ? "pass" : "FAIL") << " (pairwise " << result.counters.pairwise_evaluations
        << " vs panmictic " << a.panmictic_pairwise << ")\n";
    reports.push_back(to_json(a));
    all.push_back(a);
  }
  write_file(out_dir / "audit.csv", csv.str());
  ojson j;
  j["provenance"] = provenance(cfg, seed);
  j["reports"] = reports;
  write_file(out_dir / "audit.json", dump(j));
  for (const auto& a : all) require_passed(a);
}

int exit_code_for(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    err << "config error: " << x.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& x) {
    err << "numeric failure: " << x.what() << '\n';
    return kExitNumeric;
  } catch (const AuditFailure& x) {
    err << "audit failure: " << x.what() << '\n';
    return kExitAudit;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << '\n';
    return kExitError;
  }
}

}  // namespace coevgan
