#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "radonlik/error.hpp"
#include "radonlik/harness/experiments.hpp"
#include "radonlik/parallel.hpp"

namespace fs = std::filesystem;
using namespace radonlik;
using namespace radonlik::harness;

namespace {

fs::path output_root(const std::optional<std::string>& flag, const Config& config) {
  if (flag) return *flag;
  if (const char* env = std::getenv("RADONLIK_OUT"); env && *env) return env;
  if (config.output_dir) return *config.output_dir;
  return "out";
}

void print_result(const ExperimentResult& r, const fs::path& dir) {
  std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  (" << dir.string() << ", "
            << r.seconds << " s)\n";
  for (const auto& c : r.report["checks"]) {
    if (!c["pass"].get<bool>()) std::cout << "  failed check: " << c["name"].get<std::string>() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radonlik: likelihoods under different dominating measures"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  double tol = 1e-8;
  std::optional<std::size_t> threads;
  app.add_option("--config", config_path, "YAML experiment config");
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--out", out, "Output directory (overrides RADONLIK_OUT and the config)");
  auto* tol_opt = app.add_option("--tol", tol, "Proportionality tolerance")->default_val(1e-8);
  app.add_option("--threads", threads, "Worker threads, 0 = hardware concurrency");

  std::string chosen;
  for (const auto& name : experiment_names()) {
    auto* sub = app.add_subcommand(name, "Run the " + name + " suite");
    if (name != "proportionality") sub->alias(name + "-proportionality");
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.add_subcommand("all", "Run every suite")->callback([&chosen] { chosen = "all"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Config config;
  try {
    if (config_path) config = load_config(*config_path);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  if (seed) config.seed = *seed;
  if (tol_opt->count() > 0) config.tol = tol;
  if (threads) config.threads = *threads;
  if (!(config.tol > 0.0)) {
    std::cerr << "config error: tol must be positive\n";
    return 2;
  }
  set_thread_count(config.threads);
  const fs::path root = output_root(out, config);

  try {
    if (chosen != "all") {
      const auto r = run_experiment(chosen, config);
      write_outputs(r, root);
      print_result(r, root);
      return r.pass ? 0 : 1;
    }
    bool all_pass = true;
    Json summary = Json::object();
    summary["schema_version"] = kSchemaVersion;
    summary["experiment"] = "all";
    summary["seed"] = config.seed;
    summary["tol"] = config.tol;
    summary["pass"] = false;
    summary["experiments"] = Json::array();
    for (const auto& name : experiment_names()) {
      const auto r = run_experiment(name, config);
      write_outputs(r, root / name);
      print_result(r, root / name);
      all_pass = all_pass && r.pass;
      summary["experiments"].push_back({{"name", name}, {"pass", r.pass}});
    }
    summary["pass"] = all_pass;
    write_json(summary, root / "report.json");
    return all_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
