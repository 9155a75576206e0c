#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "coevgan/ablation.hpp"
#include "coevgan/audit.hpp"
#include "coevgan/commands.hpp"
#include "coevgan/config.hpp"
#include "coevgan/errors.hpp"
#include "coevgan/grid.hpp"
#include "coevgan/heatmaps.hpp"
#include "coevgan/metrics.hpp"
#include "coevgan/mixture.hpp"
#include "coevgan/runtime.hpp"
#include "coevgan/toy_model.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace coevgan;

namespace {

py::dict counters_dict(const Counters& c) {
  return py::dict("pairwise_evaluations"_a = c.pairwise_evaluations, "gradient_updates"_a = c.gradient_updates,
                  "migrations"_a = c.migrations, "selections"_a = c.selections);
}

py::dict stats_dict(const SummaryStats& s) {
  return py::dict("mean"_a = s.mean, "std"_a = s.stddev, "median"_a = s.median, "iqr"_a = s.iqr, "min"_a = s.min,
                  "max"_a = s.max, "count"_a = s.count);
}

py::dict heatmap_dict(const HeatmapResult& h) {
  return py::dict("row_label"_a = h.row_label, "col_label"_a = h.col_label, "row_axis"_a = h.row_axis,
                  "col_axis"_a = h.col_axis, "matrix"_a = h.matrix, "repetitions"_a = h.repetitions,
                  "mean"_a = h.mean(), "diagonal_mean"_a = h.diagonal_mean());
}

Counters counters_from(const py::dict& d) {
  Counters c;
  c.pairwise_evaluations = d["pairwise_evaluations"].cast<std::uint64_t>();
  c.gradient_updates = d["gradient_updates"].cast<std::uint64_t>();
  c.migrations = d["migrations"].cast<std::uint64_t>();
  c.selections = d["selections"].cast<std::uint64_t>();
  return c;
}

toy::ToyDiscriminator disc_from(const std::array<double, 4>& b) { return toy::ToyDiscriminator::from_unsorted(b); }

// Commands print to a stream; hand the text back to Python instead.
template <class F>
std::string captured(F&& f) {
  std::ostringstream log;
  py::gil_scoped_release release;
  f(log);
  return log.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spatial coevolutionary GAN training engine";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<AuditFailure>(m, "AuditFailure", PyExc_AssertionError);

  // ---- grid
  m.def("neighborhood", [](int row, int col, int grid_dim) {
    std::vector<std::pair<int, int>> out;
    for (const auto& c : neighborhood({row, col}, GridConfig{grid_dim})) out.emplace_back(c.row, c.col);
    return out;
  }, "row"_a, "col"_a, "grid_dim"_a, "Center, W, N, E, S on the torus.");

  // ---- toy model
  m.def("expected_mass", [](std::array<double, 2> means, std::array<double, 4> bounds) {
    return toy::expected_mass(means, disc_from(bounds));
  }, "means"_a, "bounds"_a);
  m.def("toy_loss", [](std::array<double, 2> target, std::array<double, 2> gen, std::array<double, 4> bounds) {
    return toy::toy_loss(toy::ToyTarget{target}, toy::ToyGenerator{gen[0], gen[1]}, disc_from(bounds));
  }, "target"_a, "generator"_a, "bounds"_a);
  m.def("generator_distance", [](std::array<double, 2> gen, std::array<double, 2> target) {
    return toy::generator_distance({gen[0], gen[1]}, toy::ToyTarget{target});
  }, "generator"_a, "target"_a);

  // ---- metrics
  m.def("tvd", [](std::vector<std::uint64_t> counts, std::optional<std::vector<double>> ideal) {
    if (!ideal) return tvd(ClassDistribution::uniform_ideal(std::move(counts)));
    return tvd(ClassDistribution{std::move(counts), *ideal});
  }, "counts"_a, "ideal"_a = py::none(), "Total variation distance to `ideal` (uniform by default).");
  m.def("l2_diversity", [](const std::vector<std::vector<double>>& params) {
    return stats_dict(l2_diversity(params).stats);
  }, "params"_a);
  m.def("summarize", [](std::vector<double> v) { return stats_dict(summarize(std::move(v))); }, "values"_a);

  // ---- mixture
  m.def("evolve_mixture", [](std::vector<double> scores, std::optional<std::vector<double>> init, int generations,
                             double mutation_rate, std::uint64_t seed) {
    const MixtureWeights w0 = init ? MixtureWeights{*init} : MixtureWeights::uniform(scores.size());
    w0.validate();
    MixtureEvolutionConfig cfg{generations, mutation_rate};
    cfg.validate();
    Rng rng(seed);
    const auto r = evolve_mixture(w0, weighted_sum_scorer(scores), cfg, rng);
    return py::dict("weights"_a = r.weights.w, "score"_a = r.score, "initial_score"_a = r.initial_score,
                    "champion_trace"_a = r.champion_trace, "accepted"_a = r.accepted);
  }, "scores"_a, "init"_a = py::none(), "generations"_a = 10, "mutation_rate"_a = 0.05, "seed"_a = 1,
     "(1+1)-ES over simplex weights for a linear (weighted-sum) score.");

  // ---- config
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_static("parse", &parse_config, "text"_a)
      .def_static("load", [](const std::filesystem::path& p) { return load_config(p); }, "path"_a)
      .def("serialize", [](const ExperimentConfig& c) { return serialize_config(c); })
      .def("validate", &ExperimentConfig::validate)
      .def("to_dict", [](const ExperimentConfig& c) { return py::module_::import("json").attr("loads")(config_to_json(c).dump()); })
      .def_property_readonly("seeds", [](const ExperimentConfig& c) { return c.seeds; })
      .def_property_readonly("method", [](const ExperimentConfig& c) { return to_string(c.method); })
      .def_property_readonly("grid_dim", [](const ExperimentConfig& c) { return c.grid_dim; })
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; })
      .def("__repr__", [](const ExperimentConfig& c) { return "<ExperimentConfig method=" + to_string(c.method) + ">"; });
  m.def("config_keys", &config_keys);

  // ---- runs
  m.def("run_grid", [](const ExperimentConfig& cfg, std::optional<std::uint64_t> seed) {
    const auto backend = cfg.make_backend();
    GridResult r;
    RunMetrics metrics;
    {
      py::gil_scoped_release release;
      r = run_grid(*backend, cfg.grid_run(seed.value_or(cfg.master_seed())));
      metrics = evaluate_run(*backend, r);
    }
    const auto audit = audit_interactions(r.counters, cfg.method, GridConfig{cfg.grid_dim}, cfg.train.epochs,
                                          static_cast<int>(cfg.batches_per_epoch));
    return py::dict("ensemble_score"_a = metrics.ensemble_score, "tvd"_a = metrics.tvd,
                    "low_quality"_a = metrics.low_quality, "mixture_score"_a = metrics.mixture_score,
                    "l2_diversity"_a = stats_dict(metrics.l2), "counters"_a = counters_dict(r.counters),
                    "best_cell"_a = std::make_pair(r.best().cell.row, r.best().cell.col),
                    "best_weights"_a = r.best().weights.w, "center_generators"_a = r.center_generators(),
                    "audit_passed"_a = audit.passed(), "max_epoch_skew"_a = r.max_epoch_skew);
  }, "config"_a, "seed"_a = py::none(), "Train one grid and score its best ensemble.");

  m.def("audit_interactions", [](const py::dict& counters, const std::string& method, int grid_dim, int epochs,
                                 int batches) {
    const auto a = audit_interactions(counters_from(counters), parse_method(method), GridConfig{grid_dim}, epochs, batches);
    py::list rows;
    for (const auto& r : a.rows)
      rows.append(py::dict("counter"_a = r.counter, "formula"_a = r.formula, "expected"_a = r.expected,
                           "actual"_a = r.actual, "ok"_a = r.ok()));
    return py::dict("passed"_a = a.passed(), "rows"_a = rows, "panmictic_pairwise"_a = a.panmictic_pairwise);
  }, "counters"_a, "method"_a, "grid_dim"_a, "epochs"_a, "batches"_a);

  m.def("mode_collapse_heatmap", [](const ExperimentConfig& cfg) {
    HeatmapResult h;
    {
      py::gil_scoped_release release;
      h = mode_collapse_heatmap(cfg.heatmap_mode, cfg.master_seed(), cfg.workers);
    }
    return heatmap_dict(h);
  }, "config"_a);
  m.def("discriminator_collapse_heatmap", [](const ExperimentConfig& cfg) {
    HeatmapResult h;
    {
      py::gil_scoped_release release;
      h = discriminator_collapse_heatmap(cfg.heatmap_disc, cfg.master_seed(), cfg.workers);
    }
    auto d = heatmap_dict(h);
    const auto q = quadrant_summary(h);
    d["quadrants"] = py::dict("neg_neg"_a = q.neg_neg, "neg_pos"_a = q.neg_pos, "pos_neg"_a = q.pos_neg,
                              "pos_pos"_a = q.pos_pos);
    return d;
  }, "config"_a);

  // ---- CLI commands: write files, return the printed summary
  m.def("cmd_run", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_run(c, out, log); });
  }, "config"_a, "out_dir"_a);
  m.def("cmd_heatmap_mode", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_heatmap_mode(c, out, log); });
  }, "config"_a, "out_dir"_a);
  m.def("cmd_heatmap_disc", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_heatmap_disc(c, out, log); });
  }, "config"_a, "out_dir"_a);
  m.def("cmd_ablate", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_ablate(c, out, log); });
  }, "config"_a, "out_dir"_a);
  m.def("cmd_audit", [](const ExperimentConfig& c, const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_audit(c, out, log); });
  }, "config"_a, "out_dir"_a);
  m.def("cmd_render", [](const std::vector<std::filesystem::path>& inputs, int cell_pixels,
                         const std::filesystem::path& out) {
    return captured([&](std::ostream& log) { cmd_render(inputs, cell_pixels, out, log); });
  }, "inputs"_a, "cell_pixels"_a, "out_dir"_a);
}
