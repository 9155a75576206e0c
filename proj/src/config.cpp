#include "coevgan/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "coevgan/errors.hpp"

namespace coevgan {

std::string to_string(BackendKind b) { return b == BackendKind::Toy ? "toy" : "neural"; }

namespace {

// ---- scalar formatting / parsing ------------------------------------------------

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string format_value(int v) { return std::to_string(v); }
std::string format_value(unsigned v) { return std::to_string(v); }
std::string format_value(std::size_t v) { return std::to_string(v); }
std::string format_value(bool v) { return v ? "true" : "false"; }
std::string format_value(const std::string& v) { return v; }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const std::string& field) {
  const std::string v = trim(raw);
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc() || ptr != end)
    throw ConfigError(field, "cannot parse '" + raw + "' as a number");
  return out;
}

template <class T>
T parse_value(const std::string& v, const std::string& field);
template <>
double parse_value<double>(const std::string& v, const std::string& f) { return parse_number<double>(v, f); }
template <>
int parse_value<int>(const std::string& v, const std::string& f) { return parse_number<int>(v, f); }
template <>
unsigned parse_value<unsigned>(const std::string& v, const std::string& f) { return parse_number<unsigned>(v, f); }
template <>
std::size_t parse_value<std::size_t>(const std::string& v, const std::string& f) {
  return parse_number<std::size_t>(v, f);
}
template <>
std::string parse_value<std::string>(const std::string& v, const std::string&) { return trim(v); }

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

// ---- field table ----------------------------------------------------------------

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;

  std::string name() const { return section + "." + key; }
};

template <class T, class Ref>
Field scalar(std::string section, std::string key, Ref ref) {
  const std::string name = section + "." + key;
  return {section, key,
          [ref](const ExperimentConfig& c) { return format_value(ref(const_cast<ExperimentConfig&>(c))); },
          [ref, name](ExperimentConfig& c, const std::string& v) { ref(c) = parse_value<T>(v, name); }};
}

template <class E>
Field enumerated(std::string section, std::string key, E ExperimentConfig::*member,
                 std::vector<std::pair<std::string, E>> names) {
  const std::string name = section + "." + key;
  return {section, key,
          [member, names](const ExperimentConfig& c) {
            for (const auto& [n, e] : names)
              if (e == c.*member) return n;
            return std::string("?");
          },
          [member, names, name](ExperimentConfig& c, const std::string& raw) {
            const std::string v = trim(raw);
            for (const auto& [n, e] : names)
              if (n == v) {
                c.*member = e;
                return;
              }
            std::string options;
            for (const auto& [n, e] : names) options += (options.empty() ? "" : ", ") + n;
            throw ConfigError(name, "unknown value '" + v + "' (expected one of: " + options + ")");
          }};
}

Method parse_method_field(const std::string& v, const std::string& field) {
  try {
    return parse_method(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(field, e.what());
  }
}

const std::vector<Field>& fields() {
  using C = ExperimentConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    // [run]
    f.push_back({"run", "method", [](const C& c) { return to_string(c.method); },
                 [](C& c, const std::string& v) { c.method = parse_method_field(trim(v), "run.method"); }});
    f.push_back(enumerated<BackendKind>("run", "backend", &C::backend,
                                        {{"toy", BackendKind::Toy}, {"neural", BackendKind::Neural}}));
    f.push_back(scalar<int>("run", "grid_dim", [](C& c) -> int& { return c.grid_dim; }));
    f.push_back(scalar<int>("run", "epochs", [](C& c) -> int& { return c.train.epochs; }));
    f.push_back({"run", "seeds",
                 [](const C& c) { return join(c.seeds, [](std::uint64_t s) { return std::to_string(s); }); },
                 [](C& c, const std::string& v) {
                   c.seeds.clear();
                   for (const auto& s : split_list(v)) c.seeds.push_back(parse_number<std::uint64_t>(s, "run.seeds"));
                 }});
    f.push_back(enumerated<ExecutionMode>("run", "mode", &C::mode,
                                          {{"lockstep", ExecutionMode::Lockstep}, {"async", ExecutionMode::Async}}));
    f.push_back(scalar<unsigned>("run", "workers", [](C& c) -> unsigned& { return c.workers; }));
    f.push_back(scalar<std::string>("run", "output_dir", [](C& c) -> std::string& { return c.output_dir; }));
    // [train]
    f.push_back(scalar<std::size_t>("train", "tournament_size",
                                    [](C& c) -> std::size_t& { return c.train.tournament_size; }));
    f.push_back(scalar<double>("train", "lr_mutation_prob", [](C& c) -> double& { return c.train.lr_mutation_prob; }));
    f.push_back(scalar<double>("train", "lr_mutation_scale", [](C& c) -> double& { return c.train.lr_mutation_scale; }));
    f.push_back(scalar<double>("train", "learning_rate", [](C& c) -> double& { return c.train.initial_learning_rate; }));
    f.push_back(scalar<std::size_t>("train", "batches_per_epoch", [](C& c) -> std::size_t& { return c.batches_per_epoch; }));
    // [mixture]
    f.push_back(scalar<int>("mixture", "generations", [](C& c) -> int& { return c.mixture.generations; }));
    f.push_back(scalar<double>("mixture", "mutation_rate", [](C& c) -> double& { return c.mixture.mutation_rate; }));
    f.push_back(enumerated<MixtureScoring>(
        "mixture", "scoring", &C::scoring,
        {{"weighted-sum", MixtureScoring::WeightedSum}, {"sampled-ensemble", MixtureScoring::SampledEnsemble}}));
    // [toy]
    f.push_back(scalar<double>("toy", "target_mu1", [](C& c) -> double& { return c.toy.target.mu_star[0]; }));
    f.push_back(scalar<double>("toy", "target_mu2", [](C& c) -> double& { return c.toy.target.mu_star[1]; }));
    f.push_back(scalar<double>("toy", "mutation_step", [](C& c) -> double& { return c.toy.mutation_step; }));
    f.push_back(scalar<double>("toy", "generator_init_lo", [](C& c) -> double& { return c.toy.generator_init_lo; }));
    f.push_back(scalar<double>("toy", "generator_init_hi", [](C& c) -> double& { return c.toy.generator_init_hi; }));
    f.push_back(scalar<double>("toy", "discriminator_init_lo",
                               [](C& c) -> double& { return c.toy.discriminator_init_lo; }));
    f.push_back(scalar<double>("toy", "discriminator_init_hi",
                               [](C& c) -> double& { return c.toy.discriminator_init_hi; }));
    // [neural]
    f.push_back(scalar<int>("neural", "modes", [](C& c) -> int& { return c.neural.dataset.modes; }));
    f.push_back(scalar<double>("neural", "radius", [](C& c) -> double& { return c.neural.dataset.radius; }));
    f.push_back(scalar<double>("neural", "stddev", [](C& c) -> double& { return c.neural.dataset.stddev; }));
    f.push_back(scalar<std::size_t>("neural", "dataset_samples",
                                    [](C& c) -> std::size_t& { return c.neural.dataset.samples; }));
    f.push_back({"neural", "dataset_seed", [](const C& c) { return std::to_string(c.neural.dataset.seed); },
                 [](C& c, const std::string& v) {
                   c.neural.dataset.seed = parse_number<std::uint64_t>(trim(v), "neural.dataset_seed");
                 }});
    f.push_back(scalar<int>("neural", "latent_dim", [](C& c) -> int& { return c.neural.latent_dim; }));
    f.push_back(scalar<int>("neural", "hidden", [](C& c) -> int& { return c.neural.hidden; }));
    f.push_back(scalar<std::size_t>("neural", "batch_size", [](C& c) -> std::size_t& { return c.neural.batch_size; }));
    f.push_back(scalar<std::size_t>("neural", "score_samples",
                                    [](C& c) -> std::size_t& { return c.neural.score_samples; }));
    f.push_back(scalar<double>("neural", "reject_sigmas", [](C& c) -> double& { return c.neural.reject_sigmas; }));
    // [heatmap_mode]
    const std::string hm = "heatmap_mode";
    f.push_back(scalar<double>(hm, "lo", [](C& c) -> double& { return c.heatmap_mode.lo; }));
    f.push_back(scalar<double>(hm, "hi", [](C& c) -> double& { return c.heatmap_mode.hi; }));
    f.push_back(scalar<double>(hm, "step", [](C& c) -> double& { return c.heatmap_mode.step; }));
    f.push_back(scalar<int>(hm, "repetitions", [](C& c) -> int& { return c.heatmap_mode.repetitions; }));
    f.push_back(scalar<std::size_t>(hm, "population", [](C& c) -> std::size_t& { return c.heatmap_mode.coev.population; }));
    f.push_back(scalar<int>(hm, "generations", [](C& c) -> int& { return c.heatmap_mode.coev.generations; }));
    f.push_back(scalar<std::size_t>(hm, "tournament_size",
                                    [](C& c) -> std::size_t& { return c.heatmap_mode.coev.tournament_size; }));
    f.push_back(scalar<double>(hm, "mutation_step", [](C& c) -> double& { return c.heatmap_mode.coev.step; }));
    f.push_back(scalar<double>(hm, "gene_probability",
                               [](C& c) -> double& { return c.heatmap_mode.coev.gene_probability; }));
    f.push_back(scalar<double>(hm, "success_threshold", [](C& c) -> double& { return c.heatmap_mode.success_threshold; }));
    f.push_back(scalar<double>(hm, "target_mu1", [](C& c) -> double& { return c.heatmap_mode.target.mu_star[0]; }));
    f.push_back(scalar<double>(hm, "target_mu2", [](C& c) -> double& { return c.heatmap_mode.target.mu_star[1]; }));
    f.push_back(scalar<double>(hm, "disc_init_lo", [](C& c) -> double& { return c.heatmap_mode.disc_init_lo; }));
    f.push_back(scalar<double>(hm, "disc_init_hi", [](C& c) -> double& { return c.heatmap_mode.disc_init_hi; }));
    // [heatmap_disc]
    const std::string hd = "heatmap_disc";
    f.push_back(scalar<double>(hd, "lo", [](C& c) -> double& { return c.heatmap_disc.lo; }));
    f.push_back(scalar<double>(hd, "hi", [](C& c) -> double& { return c.heatmap_disc.hi; }));
    f.push_back(scalar<double>(hd, "step", [](C& c) -> double& { return c.heatmap_disc.step; }));
    f.push_back(scalar<int>(hd, "repetitions", [](C& c) -> int& { return c.heatmap_disc.repetitions; }));
    f.push_back(scalar<std::size_t>(hd, "population", [](C& c) -> std::size_t& { return c.heatmap_disc.coev.population; }));
    f.push_back(scalar<int>(hd, "generations", [](C& c) -> int& { return c.heatmap_disc.coev.generations; }));
    f.push_back(scalar<std::size_t>(hd, "tournament_size",
                                    [](C& c) -> std::size_t& { return c.heatmap_disc.coev.tournament_size; }));
    f.push_back(scalar<double>(hd, "mutation_step", [](C& c) -> double& { return c.heatmap_disc.coev.step; }));
    f.push_back(scalar<double>(hd, "gene_probability",
                               [](C& c) -> double& { return c.heatmap_disc.coev.gene_probability; }));
    f.push_back(scalar<double>(hd, "escape_threshold", [](C& c) -> double& { return c.heatmap_disc.escape_threshold; }));
    f.push_back(scalar<double>(hd, "generator_mu1", [](C& c) -> double& { return c.heatmap_disc.frozen_generator.mu1; }));
    f.push_back(scalar<double>(hd, "generator_mu2", [](C& c) -> double& { return c.heatmap_disc.frozen_generator.mu2; }));
    f.push_back(scalar<double>(hd, "target_mu1", [](C& c) -> double& { return c.heatmap_disc.target.mu_star[0]; }));
    f.push_back(scalar<double>(hd, "target_mu2", [](C& c) -> double& { return c.heatmap_disc.target.mu_star[1]; }));
    // [ablation]
    f.push_back({"ablation", "methods",
                 [](const C& c) { return join(c.ablation.methods, [](Method m) { return to_string(m); }); },
                 [](C& c, const std::string& v) {
                   c.ablation.methods.clear();
                   for (const auto& s : split_list(v)) c.ablation.methods.push_back(parse_method_field(s, "ablation.methods"));
                 }});
    f.push_back({"ablation", "grid_dims",
                 [](const C& c) { return join(c.ablation.grid_dims, [](int d) { return std::to_string(d); }); },
                 [](C& c, const std::string& v) {
                   c.ablation.grid_dims.clear();
                   for (const auto& s : split_list(v)) c.ablation.grid_dims.push_back(parse_number<int>(s, "ablation.grid_dims"));
                 }});
    // [render]
    f.push_back(scalar<int>("render", "cell_pixels", [](C& c) -> int& { return c.cell_pixels; }));
    return f;
  }();
  return table;
}

void check_heatmap(const std::string& sec, double lo, double hi, double step, int reps,
                   const toy::SimpleCoevConfig& coev) {
  if (!(step > 0.0)) throw ConfigError(sec + ".step", "must be > 0");
  if (!(lo <= hi)) throw ConfigError(sec + ".lo", "must not exceed hi");
  if (reps < 1) throw ConfigError(sec + ".repetitions", "must be >= 1");
  if (coev.population < 1) throw ConfigError(sec + ".population", "must be >= 1");
  if (coev.generations < 0) throw ConfigError(sec + ".generations", "must be >= 0");
  if (coev.tournament_size < 1 || coev.tournament_size > coev.population)
    throw ConfigError(sec + ".tournament_size", "must lie in [1, population]");
  if (!(coev.step > 0.0)) throw ConfigError(sec + ".mutation_step", "must be > 0");
  if (!(coev.gene_probability > 0.0 && coev.gene_probability <= 1.0))
    throw ConfigError(sec + ".gene_probability", "must lie in (0, 1]");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (grid_dim < 1) throw ConfigError("run.grid_dim", "must be >= 1");
  if (seeds.empty()) throw ConfigError("run.seeds", "at least one seed is required");
  train.validate(static_cast<std::size_t>(GridConfig::kNeighborhoodSize));
  if (batches_per_epoch < 1) throw ConfigError("train.batches_per_epoch", "must be >= 1");
  if (mixture.generations < 0) throw ConfigError("mixture.generations", "must be >= 0");
  if (!(mixture.mutation_rate > 0.0)) throw ConfigError("mixture.mutation_rate", "must be > 0");
  if (!(toy.mutation_step >= 0.0)) throw ConfigError("toy.mutation_step", "must be >= 0");
  if (!(toy.generator_init_lo <= toy.generator_init_hi))
    throw ConfigError("toy.generator_init_lo", "must not exceed generator_init_hi");
  if (!(toy.discriminator_init_lo <= toy.discriminator_init_hi))
    throw ConfigError("toy.discriminator_init_lo", "must not exceed discriminator_init_hi");
  if (neural.dataset.modes < 1) throw ConfigError("neural.modes", "must be >= 1");
  if (!(neural.dataset.stddev > 0.0)) throw ConfigError("neural.stddev", "must be > 0");
  if (neural.dataset.samples < 1) throw ConfigError("neural.dataset_samples", "must be >= 1");
  if (neural.latent_dim < 1) throw ConfigError("neural.latent_dim", "must be >= 1");
  if (neural.hidden < 1) throw ConfigError("neural.hidden", "must be >= 1");
  if (neural.batch_size < 1) throw ConfigError("neural.batch_size", "must be >= 1");
  if (neural.score_samples < 1) throw ConfigError("neural.score_samples", "must be >= 1");
  if (!(neural.reject_sigmas > 0.0)) throw ConfigError("neural.reject_sigmas", "must be > 0");
  check_heatmap("heatmap_mode", heatmap_mode.lo, heatmap_mode.hi, heatmap_mode.step, heatmap_mode.repetitions,
                heatmap_mode.coev);
  if (!(heatmap_mode.success_threshold > 0.0))
    throw ConfigError("heatmap_mode.success_threshold", "must be > 0");
  if (!(heatmap_mode.disc_init_lo <= heatmap_mode.disc_init_hi))
    throw ConfigError("heatmap_mode.disc_init_lo", "must not exceed disc_init_hi");
  check_heatmap("heatmap_disc", heatmap_disc.lo, heatmap_disc.hi, heatmap_disc.step, heatmap_disc.repetitions,
                heatmap_disc.coev);
  if (ablation.methods.empty()) throw ConfigError("ablation.methods", "at least one method is required");
  if (ablation.grid_dims.empty()) throw ConfigError("ablation.grid_dims", "at least one grid size is required");
  for (int d : ablation.grid_dims)
    if (d < 1) throw ConfigError("ablation.grid_dims", "grid sizes must be >= 1");
  if (cell_pixels < 1) throw ConfigError("render.cell_pixels", "must be >= 1");
}

GridRunConfig ExperimentConfig::grid_run(std::uint64_t seed) const {
  GridRunConfig g;
  g.grid_dim = grid_dim;
  g.method = method;
  g.train = train;
  g.train.method = method;
  g.mixture = mixture;
  g.scoring = scoring;
  g.mode = mode;
  g.seed = seed;
  g.workers = workers;
  return g;
}

std::unique_ptr<Backend> ExperimentConfig::make_backend() const {
  if (backend == BackendKind::Toy) {
    auto c = toy;
    c.batches_per_epoch = batches_per_epoch;
    return std::make_unique<ToyBackend>(c);
  }
  auto c = neural;
  c.batches_per_epoch = batches_per_epoch;
  return std::make_unique<NeuralBackend>(c);
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return serialize_config(*this) == serialize_config(o);
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("file", e.message() + " at line " + std::to_string(e.line()));
  }
  std::map<std::string, const Field*> index;
  for (const auto& f : fields()) index[f.name()] = &f;

  ExperimentConfig cfg;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError(section, "key outside of any [section]");
    for (const auto& [key, value] : body) {
      const auto it = index.find(section + "." + key);
      if (it == index.end()) throw ConfigError(section + "." + key, "unknown key");
      it->second->set(cfg, value.data());
    }
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out, current;
  for (const auto& f : fields()) {
    if (f.section != current) {
      out += (current.empty() ? "" : "\n") + ("[" + f.section + "]\n");
      current = f.section;
    }
    out += f.key + " = " + f.get(cfg) + "\n";
  }
  return out;
}

void apply_env_overrides(ExperimentConfig& cfg) {
  if (const char* v = std::getenv(kSeedEnvVar); v && *v)
    cfg.seeds = {parse_number<std::uint64_t>(v, kSeedEnvVar)};
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str());
  apply_env_overrides(cfg);
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& f : fields()) out[f.section][f.key] = f.get(cfg);
  return nlohmann::json::parse(out.dump());
}

std::string provenance_header(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& prefix) {
  std::string out = prefix + "master_seed = " + std::to_string(seed) + "\n";
  std::istringstream lines(serialize_config(cfg));
  std::string line;
  while (std::getline(lines, line))
    if (!line.empty()) out += prefix + line + "\n";
  return out;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(f.name());
  return out;
}

}  // namespace coevgan
