// coevgan: command-line front end for the spatial coevolutionary GAN engine.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "coevgan/commands.hpp"
#include "coevgan/config.hpp"

namespace {

using coevgan::ExperimentConfig;

struct Common {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("-c,--config", c.config_path, "INI config file (defaults apply when omitted)");
  sub->add_option("-o,--out", c.out_dir, "output directory (overrides run.output_dir)");
  sub->add_option("--seed", c.seed, "master seed (overrides run.seeds and COEVGAN_SEED)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    cfg = coevgan::load_config(c.config_path);
  } else {
    coevgan::apply_env_overrides(cfg);
  }
  if (c.seed) cfg.seeds = {*c.seed};
  if (!c.out_dir.empty()) cfg.output_dir = c.out_dir;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial coevolutionary GAN training: runs, collapse heatmaps, ablations, audits"};
  app.require_subcommand(1);

  Common run_opts, mode_opts, disc_opts, ablate_opts, audit_opts;
  auto* run = app.add_subcommand("run", "train one grid per seed; metrics CSV, progress CSV, ensemble JSON");
  add_common(run, run_opts);
  auto* mode = app.add_subcommand("heatmap-mode", "mode-collapse success heatmap on the toy model");
  add_common(mode, mode_opts);
  auto* disc = app.add_subcommand("heatmap-disc", "discriminator-collapse escape heatmap on the toy model");
  add_common(disc, disc_opts);
  auto* ablate = app.add_subcommand("ablate", "method x grid x seed ablation table with interaction audits");
  add_common(ablate, ablate_opts);
  auto* audit = app.add_subcommand("audit", "check interaction counters against closed forms (exit 4 on mismatch)");
  add_common(audit, audit_opts);

  std::vector<std::string> inputs;
  std::string render_out = ".";
  int cell_pixels = 0;
  std::string render_config;
  auto* render = app.add_subcommand("render", "heatmap CSV -> PGM + text; other CSV -> text table");
  render->add_option("inputs", inputs, "CSV files")->required();
  render->add_option("-o,--out", render_out, "output directory");
  render->add_option("--cell-pixels", cell_pixels, "pixels per heatmap cell (default: render.cell_pixels)");
  render->add_option("-c,--config", render_config, "config supplying render.cell_pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : coevgan::kExitConfig;
  }

  try {
    if (*render) {
      ExperimentConfig cfg;
      if (!render_config.empty()) cfg = coevgan::load_config(render_config);
      if (cell_pixels == 0) cell_pixels = cfg.cell_pixels;
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      coevgan::cmd_render(paths, cell_pixels, render_out, std::cout);
      return coevgan::kExitOk;
    }
    const std::pair<CLI::App*, const Common*> subs[] = {
        {run, &run_opts}, {mode, &mode_opts}, {disc, &disc_opts}, {ablate, &ablate_opts}, {audit, &audit_opts}};
    for (const auto& [sub, opts] : subs) {
      if (!*sub) continue;
      const auto cfg = resolve(*opts);
      const std::filesystem::path out = cfg.output_dir;
      if (sub == run) coevgan::cmd_run(cfg, out, std::cout);
      if (sub == mode) coevgan::cmd_heatmap_mode(cfg, out, std::cout);
      if (sub == disc) coevgan::cmd_heatmap_disc(cfg, out, std::cout);
      if (sub == ablate) coevgan::cmd_ablate(cfg, out, std::cout);
      if (sub == audit) coevgan::cmd_audit(cfg, out, std::cout);
    }
    return coevgan::kExitOk;
  } catch (...) {
    return coevgan::exit_code_for(std::current_exception(), std::cerr);
  }
}
