#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sigcurate/gram.hpp"
#include "sigcurate/paths.hpp"
#include "sigcurate/select.hpp"
#include "sigcurate/spectra.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace sigcurate;

namespace {

// configuration / validation problems exit with status 2, runtime failures with 1
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class CachePolicy { read, write, off };

CachePolicy parse_cache_policy(const std::string& name) {
  if (name == "read") return CachePolicy::read;
  if (name == "write") return CachePolicy::write;
  if (name == "off") return CachePolicy::off;
  throw ConfigError("unknown cache policy '" + name +
                    "' (expected read, write or off)");
}

struct RunConfig {
  std::string dataset_path;
  std::string dataset_format = "jsonl";
  PathConfig paths;
  KernelConfig kernel;
  Objective objective;
  SelectionConfig selection;
  std::vector<int> budgets;
  int random_draws = 20;
  std::string out_dir = "out";
  CachePolicy cache = CachePolicy::off;
  bool verbose = false;
};

// flag values captured as optionals so explicit flags override the JSON file
struct Overrides {
  std::optional<std::string> config_path;
  std::optional<std::string> dataset;
  std::optional<std::string> format;
  std::optional<std::string> backend;
  std::optional<int> level;
  std::optional<int> refinement;
  std::optional<int> rff_dim;
  std::optional<double> bandwidth;
  std::optional<std::uint64_t> seed;
  std::optional<bool> normalize;
  std::optional<int> m;
  std::optional<double> p;
  std::optional<std::string> algorithm;
  std::optional<double> epsilon;
  std::optional<double> mu;
  std::optional<std::string> objective;
  std::optional<bool> local_search;
  std::optional<int> swap_cap;
  std::optional<bool> pad_to_budget;
  std::optional<bool> augment_time;
  std::optional<int> subsample_stride;
  std::optional<bool> standardize;
  std::optional<std::vector<std::string>> channel_selection;
  std::optional<double> prescale;
  std::optional<std::string> budgets;
  std::optional<int> random_draws;
  std::optional<std::string> out_dir;
  std::optional<std::string> cache;
  bool verbose = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON config file; flags override fields of the same dotted name");
  cmd->add_option("--dataset", o.dataset, "dataset location (dataset.path)");
  cmd->add_option("--format", o.format, "dataset format: jsonl or csv_dir");
  cmd->add_option("--backend", o.backend, "kernel backend: pde, truncated_dp, rfsf_dp, rfsf_trp");
  cmd->add_option("--level", o.level, "signature truncation level L");
  cmd->add_option("--refinement", o.refinement, "PDE dyadic refinement order");
  cmd->add_option("--rff-dim", o.rff_dim, "random Fourier feature count per level");
  cmd->add_option("--bandwidth", o.bandwidth, "RBF base-kernel bandwidth h");
  cmd->add_option("--seed", o.seed, "root seed for kernel features and selection");
  cmd->add_option("--kernel.normalize", o.normalize, "normalize the gram to unit diagonal");
  cmd->add_option("--m", o.m, "selection budget");
  cmd->add_option("--p", o.p, "entropy proportion in [0, 1] for curation");
  cmd->add_option("--algorithm", o.algorithm, "greedy_local, stochastic_greedy or kdpp");
  cmd->add_option("--epsilon", o.epsilon, "stochastic greedy sampling parameter in (0, 1)");
  cmd->add_option("--mu", o.mu, "log-det regularizer");
  cmd->add_option("--objective", o.objective, "entropy or logdet (single-objective curation)");
  cmd->add_option("--selection.local_search", o.local_search, "enable 1-swap local search");
  cmd->add_option("--selection.swap_cap", o.swap_cap, "max improving swaps (0 = 10*m)");
  cmd->add_option("--selection.pad_to_budget", o.pad_to_budget, "pad greedy selections to exactly m");
  cmd->add_option("--paths.augment_time", o.augment_time, "prepend a normalized time coordinate");
  cmd->add_option("--paths.subsample_stride", o.subsample_stride, "keep every k-th step (and the last)");
  cmd->add_option("--paths.standardize", o.standardize, "pooled zero-mean unit-variance scaling");
  cmd->add_option("--paths.channel_selection", o.channel_selection, "channels to concatenate, in order");
  cmd->add_option("--paths.prescale", o.prescale, "multiplier applied to all coordinates");
  cmd->add_option("--budgets", o.budgets, "comma-separated curve budgets");
  cmd->add_option("--random-draws", o.random_draws, "random subsets per curve budget");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--cache", o.cache, "gram cache policy: read, write or off");
  cmd->add_flag("--verbose", o.verbose, "include eigenvalues in reports");
}

std::vector<int> parse_budget_list(const std::string& text) {
  std::vector<int> budgets;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    if (cell.empty()) continue;
    try {
      budgets.push_back(std::stoi(cell));
    } catch (const std::exception&) {
      throw ConfigError("cannot parse budget '" + cell + "'");
    }
  }
  if (budgets.empty()) throw ConfigError("budget list is empty");
  return budgets;
}

template <typename T>
void read_field(const ordered_json& j, const char* section, const char* name,
                T& target) {
  if (!j.contains(section)) return;
  const auto& s = j.at(section);
  if (!s.contains(name)) return;
  try {
    target = s.at(name).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field ") + section + "." + name +
                      ": " + e.what());
  }
}

RunConfig build_config(const Overrides& o) {
  RunConfig cfg;
  if (o.config_path) {
    std::ifstream in(*o.config_path);
    if (!in) throw ConfigError("cannot open config file '" + *o.config_path + "'");
    ordered_json j;
    try {
      j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file '" + *o.config_path + "': " + e.what());
    }
    read_field(j, "dataset", "path", cfg.dataset_path);
    read_field(j, "dataset", "format", cfg.dataset_format);
    read_field(j, "paths", "augment_time", cfg.paths.augment_time);
    read_field(j, "paths", "subsample_stride", cfg.paths.subsample_stride);
    read_field(j, "paths", "standardize", cfg.paths.standardize);
    read_field(j, "paths", "channel_selection", cfg.paths.channel_selection);
    read_field(j, "paths", "prescale", cfg.paths.prescale);
    std::string backend = backend_name(cfg.kernel.backend);
    read_field(j, "kernel", "backend", backend);
    cfg.kernel.backend = parse_backend(backend);
    read_field(j, "kernel", "level", cfg.kernel.level);
    read_field(j, "kernel", "refinement", cfg.kernel.pde_refinement);
    read_field(j, "kernel", "rff_dim", cfg.kernel.rff_dim);
    read_field(j, "kernel", "bandwidth", cfg.kernel.bandwidth);
    read_field(j, "kernel", "seed", cfg.kernel.seed);
    read_field(j, "kernel", "normalize", cfg.kernel.normalize);
    std::string objective = objective_name(cfg.objective.kind);
    read_field(j, "objective", "kind", objective);
    cfg.objective.kind = parse_objective(objective);
    read_field(j, "objective", "mu", cfg.objective.mu);
    read_field(j, "selection", "m", cfg.selection.m);
    read_field(j, "selection", "p", cfg.selection.p);
    std::string algorithm = algorithm_name(cfg.selection.algorithm);
    read_field(j, "selection", "algorithm", algorithm);
    cfg.selection.algorithm = parse_algorithm(algorithm);
    read_field(j, "selection", "epsilon", cfg.selection.epsilon);
    read_field(j, "selection", "seed", cfg.selection.seed);
    read_field(j, "selection", "local_search", cfg.selection.local_search);
    read_field(j, "selection", "swap_cap", cfg.selection.swap_cap);
    read_field(j, "selection", "pad_to_budget", cfg.selection.pad_to_budget);
    read_field(j, "curve", "budgets", cfg.budgets);
    read_field(j, "curve", "random_draws", cfg.random_draws);
    if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    if (j.contains("cache")) cfg.cache = parse_cache_policy(j.at("cache").get<std::string>());
    if (j.contains("verbose")) cfg.verbose = j.at("verbose").get<bool>();
  }

  if (o.dataset) cfg.dataset_path = *o.dataset;
  if (o.format) cfg.dataset_format = *o.format;
  if (o.backend) cfg.kernel.backend = parse_backend(*o.backend);
  if (o.level) cfg.kernel.level = *o.level;
  if (o.refinement) cfg.kernel.pde_refinement = *o.refinement;
  if (o.rff_dim) cfg.kernel.rff_dim = *o.rff_dim;
  if (o.bandwidth) cfg.kernel.bandwidth = *o.bandwidth;
  if (o.seed) {
    cfg.kernel.seed = *o.seed;
    cfg.selection.seed = *o.seed;
  }
  if (o.normalize) cfg.kernel.normalize = *o.normalize;
  if (o.m) cfg.selection.m = *o.m;
  if (o.p) cfg.selection.p = *o.p;
  if (o.algorithm) cfg.selection.algorithm = parse_algorithm(*o.algorithm);
  if (o.epsilon) cfg.selection.epsilon = *o.epsilon;
  if (o.mu) cfg.objective.mu = *o.mu;
  if (o.objective) cfg.objective.kind = parse_objective(*o.objective);
  if (o.local_search) cfg.selection.local_search = *o.local_search;
  if (o.swap_cap) cfg.selection.swap_cap = *o.swap_cap;
  if (o.pad_to_budget) cfg.selection.pad_to_budget = *o.pad_to_budget;
  if (o.augment_time) cfg.paths.augment_time = *o.augment_time;
  if (o.subsample_stride) cfg.paths.subsample_stride = *o.subsample_stride;
  if (o.standardize) cfg.paths.standardize = *o.standardize;
  if (o.channel_selection) cfg.paths.channel_selection = *o.channel_selection;
  if (o.prescale) cfg.paths.prescale = *o.prescale;
  if (o.budgets) cfg.budgets = parse_budget_list(*o.budgets);
  if (o.random_draws) cfg.random_draws = *o.random_draws;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  if (o.cache) cfg.cache = parse_cache_policy(*o.cache);
  if (o.verbose) cfg.verbose = true;
  return cfg;
}

void validate_config(const RunConfig& cfg, bool needs_dataset) {
  if (needs_dataset) {
    if (cfg.dataset_path.empty()) throw ConfigError("no dataset given (--dataset)");
    if (!fs::exists(cfg.dataset_path)) {
      throw ConfigError("dataset path '" + cfg.dataset_path + "' does not exist");
    }
  }
  try {
    cfg.paths.validate();
    cfg.kernel.validate();
    cfg.objective.validate();
    parse_dataset_format(cfg.dataset_format);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (cfg.selection.p < 0.0 || cfg.selection.p > 1.0) {
    throw ConfigError("proportion p must be in [0, 1]");
  }
  if (!(cfg.selection.epsilon > 0.0) || !(cfg.selection.epsilon < 1.0)) {
    throw ConfigError("epsilon must be in (0, 1)");
  }
  if (cfg.random_draws < 1) throw ConfigError("random-draws must be >= 1");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void atomic_write(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json j;
  j["dataset"] = {{"path", cfg.dataset_path}, {"format", cfg.dataset_format}};
  j["paths"] = {{"augment_time", cfg.paths.augment_time},
                {"subsample_stride", cfg.paths.subsample_stride},
                {"standardize", cfg.paths.standardize},
                {"channel_selection", cfg.paths.channel_selection},
                {"prescale", cfg.paths.prescale}};
  j["kernel"] = {{"backend", backend_name(cfg.kernel.backend)},
                 {"level", cfg.kernel.level},
                 {"refinement", cfg.kernel.pde_refinement},
                 {"rff_dim", cfg.kernel.rff_dim},
                 {"bandwidth", cfg.kernel.bandwidth},
                 {"seed", cfg.kernel.seed},
                 {"normalize", cfg.kernel.normalize}};
  j["objective"] = {{"kind", objective_name(cfg.objective.kind)},
                    {"mu", cfg.objective.mu}};
  j["selection"] = {{"m", cfg.selection.m},
                    {"p", cfg.selection.p},
                    {"algorithm", algorithm_name(cfg.selection.algorithm)},
                    {"epsilon", cfg.selection.epsilon},
                    {"seed", cfg.selection.seed},
                    {"local_search", cfg.selection.local_search},
                    {"swap_cap", cfg.selection.swap_cap},
                    {"pad_to_budget", cfg.selection.pad_to_budget}};
  return j;
}

fs::path gram_cache_path(const RunConfig& cfg) {
  return fs::path(cfg.out_dir) / "gram.bin";
}

struct GramResult {
  GramMatrix gram;
  GramDiagnostics diag;
  bool loaded_from_cache = false;
  double compute_ms = 0.0;
};

GramResult resolve_gram(const RunConfig& cfg) {
  GramResult result;
  const fs::path cache_path = gram_cache_path(cfg);
  if (cfg.cache == CachePolicy::read) {
    if (!fs::exists(cache_path)) {
      throw ConfigError("cache policy is 'read' but '" + cache_path.string() +
                        "' does not exist");
    }
    std::string backend;
    std::uint64_t seed = 0;
    result.gram = load_gram(cache_path.string(), &backend, &seed);
    if (backend != backend_name(cfg.kernel.backend) || seed != cfg.kernel.seed) {
      throw ConfigError("cached gram was built with backend=" + backend +
                        " seed=" + std::to_string(seed) +
                        ", which does not match the requested configuration");
    }
    result.loaded_from_cache = true;
    return result;
  }

  validate_config(cfg, /*needs_dataset=*/true);
  const auto demos =
      load_dataset(cfg.dataset_path, parse_dataset_format(cfg.dataset_format));
  const auto trajectories = build_trajectories(demos, cfg.paths);
  const auto start = std::chrono::steady_clock::now();
  result.gram = gram(trajectories, cfg.kernel, &result.diag);
  result.compute_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  if (cfg.cache == CachePolicy::write) {
    fs::create_directories(cfg.out_dir);
    const fs::path tmp = cache_path.string() + ".tmp";
    save_gram(result.gram, tmp.string(), backend_name(cfg.kernel.backend),
              cfg.kernel.seed);
    fs::rename(tmp, cache_path);
  }
  return result;
}

int cmd_gram(const RunConfig& cfg_in) {
  RunConfig cfg = cfg_in;
  if (cfg.cache == CachePolicy::off) cfg.cache = CachePolicy::write;  // the cache is this command's artifact
  const GramResult result = resolve_gram(cfg);
  ordered_json summary;
  summary["n"] = result.gram.size();
  summary["backend"] = backend_name(cfg.kernel.backend);
  summary["normalized"] = result.gram.normalized;
  summary["seed"] = cfg.kernel.seed;
  summary["cache"] = result.loaded_from_cache ? "loaded" : "written";
  summary["path"] = gram_cache_path(cfg).string();
  if (!result.loaded_from_cache) {
    summary["timing_ms"] = result.compute_ms;
    summary["raw_self_kernel_min"] = result.diag.raw_self_min;
    summary["raw_self_kernel_max"] = result.diag.raw_self_max;
    summary["max_one_variation"] = result.diag.max_one_variation;
  }
  atomic_write(fs::path(cfg.out_dir) / "gram_summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_entropy(const RunConfig& cfg) {
  const GramResult result = resolve_gram(cfg);
  const SpectrumReport report = compute_spectrum(result.gram, cfg.objective.mu);
  const std::string json = report.to_json(cfg.verbose) + "\n";
  atomic_write(fs::path(cfg.out_dir) / "spectrum.json", json);
  std::cout << json;
  return 0;
}

int cmd_curate(const RunConfig& cfg, bool objective_flag_given) {
  if (cfg.selection.m < 1) {
    throw ConfigError("curation needs a budget (--m)");
  }
  const GramResult result = resolve_gram(cfg);
  if (cfg.selection.m > result.gram.size()) {
    throw ConfigError("budget m=" + std::to_string(cfg.selection.m) +
                      " exceeds dataset size " +
                      std::to_string(result.gram.size()));
  }

  Selection selection;
  if (objective_flag_given) {
    // single-objective mode: run the configured algorithm directly
    switch (cfg.selection.algorithm) {
      case SelectionAlgorithm::greedy_local:
        selection = greedy_local_search(result.gram, cfg.selection.m,
                                        cfg.objective, cfg.selection);
        break;
      case SelectionAlgorithm::stochastic_greedy:
        selection = stochastic_greedy(result.gram, cfg.selection.m,
                                      cfg.objective, cfg.selection.epsilon,
                                      cfg.selection.seed);
        break;
      case SelectionAlgorithm::kdpp:
        selection = sample_kdpp(result.gram, cfg.selection.m, cfg.objective.mu,
                                cfg.selection.seed);
        break;
    }
  } else {
    selection = faktual_curate(result.gram, cfg.selection.m, cfg.selection.p,
                               cfg.selection, cfg.objective.mu);
  }

  ordered_json j;
  j["indices"] = selection.indices;
  std::vector<std::string> ids;
  ids.reserve(selection.indices.size());
  for (int idx : selection.indices) ids.push_back(result.gram.ids[idx]);
  j["ids"] = ids;
  j["objective"] = objective_name(selection.objective);
  j["trace"] = selection.objective_trace;
  j["config"] = config_echo(cfg);
  j["config"]["mode"] = objective_flag_given ? "single_objective" : "faktual";
  atomic_write(fs::path(cfg.out_dir) / "selection.json", j.dump(2) + "\n");

  std::string id_lines;
  for (const auto& id : ids) id_lines += id + "\n";
  atomic_write(fs::path(cfg.out_dir) / "selected_ids.txt", id_lines);

  std::cout << "selected " << ids.size() << " of " << result.gram.size()
            << " demonstrations -> " << (fs::path(cfg.out_dir) / "selected_ids.txt").string()
            << "\n";
  return 0;
}

int cmd_curve(const RunConfig& cfg) {
  if (cfg.budgets.empty()) {
    throw ConfigError("curve needs --budgets (comma-separated list)");
  }
  const GramResult result = resolve_gram(cfg);
  for (int b : cfg.budgets) {
    if (b < 1 || b > result.gram.size()) {
      throw ConfigError("budget " + std::to_string(b) + " out of [1, " +
                        std::to_string(result.gram.size()) + "]");
    }
  }

  const auto faktual = entropy_curve(result.gram, cfg.budgets,
                                     CurveStrategy::faktual, cfg.selection.seed,
                                     cfg.selection, cfg.objective.mu);
  std::vector<std::vector<double>> random_draws(cfg.budgets.size());
  for (int draw = 0; draw < cfg.random_draws; ++draw) {
    const auto curve = entropy_curve(
        result.gram, cfg.budgets, CurveStrategy::random,
        cfg.selection.seed + static_cast<std::uint64_t>(draw), cfg.selection,
        cfg.objective.mu);
    for (std::size_t i = 0; i < curve.size(); ++i) {
      random_draws[i].push_back(curve[i].second);
    }
  }

  std::string csv =
      "budget,entropy_faktual,entropy_random_mean,entropy_random_min,"
      "entropy_random_max\n";
  for (std::size_t i = 0; i < cfg.budgets.size(); ++i) {
    double mean = 0.0, lo = random_draws[i].front(), hi = random_draws[i].front();
    for (double v : random_draws[i]) {
      mean += v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    mean /= static_cast<double>(random_draws[i].size());
    csv += std::to_string(cfg.budgets[i]) + "," + format_double(faktual[i].second) +
           "," + format_double(mean) + "," + format_double(lo) + "," +
           format_double(hi) + "\n";
  }
  atomic_write(fs::path(cfg.out_dir) / "curve.csv", csv);
  std::cout << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sigcurate: signature-kernel diversity metrics and dataset curation"};
  app.require_subcommand(1);

  Overrides o;
  CLI::App* gram_cmd = app.add_subcommand("gram", "compute and cache the gram matrix");
  CLI::App* entropy_cmd = app.add_subcommand("entropy", "spectral diversity report");
  CLI::App* curate_cmd = app.add_subcommand("curate", "select a diverse m-subset");
  CLI::App* curve_cmd = app.add_subcommand("curve", "entropy vs budget curve");
  for (CLI::App* cmd : {gram_cmd, entropy_cmd, curate_cmd, curve_cmd}) {
    add_common_options(cmd, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig cfg = build_config(o);
    if (gram_cmd->parsed()) {
      validate_config(cfg, cfg.cache != CachePolicy::read);
      return cmd_gram(cfg);
    }
    if (entropy_cmd->parsed()) {
      validate_config(cfg, cfg.cache != CachePolicy::read);
      return cmd_entropy(cfg);
    }
    if (curate_cmd->parsed()) {
      validate_config(cfg, cfg.cache != CachePolicy::read);
      return cmd_curate(cfg, o.objective.has_value());
    }
    if (curve_cmd->parsed()) {
      validate_config(cfg, cfg.cache != CachePolicy::read);
      return cmd_curve(cfg);
    }
    throw ConfigError("no subcommand given");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
