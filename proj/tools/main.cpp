// riskurn: simulate reinforced sequential risk scoring and audit it.
//
// Subcommands:
//   path        sample individual score trajectories
//   limit-check test simulated endpoints against the Beta limit law
//   cohort      run a grouped population and persist its results
//   validate    emulate a one-shot validation study on a cohort
//   amplify     contrast snapshot-time disparity with full-horizon disparity
//
// Exit codes: 0 success, 1 usage/config error, 2 statistical check failed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "riskurn/config.hpp"
#include "riskurn/io.hpp"
#include "riskurn/ks.hpp"
#include "riskurn/rng.hpp"
#include "riskurn/validation.hpp"
#include "riskurn/version.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitStatFail = 2;

unsigned default_threads() {
  if (const char* env = std::getenv("RISKURN_THREADS")) {
    const long value = std::strtol(env, nullptr, 10);
    if (value > 0) return static_cast<unsigned>(value);
  }
  return 0;  // resolved to hardware concurrency by run_cohort
}

std::ofstream open_output(const fs::path& file) {
  if (file.has_parent_path()) {
    fs::create_directories(file.parent_path());
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + file.string() + "'");
  }
  return out;
}

fs::path ensure_directory(const fs::path& dir) {
  fs::create_directories(dir);
  return dir;
}

void write_json_file(const fs::path& file, const json& doc) {
  auto out = open_output(file);
  out << doc.dump(2) << '\n';
}

// Unbiased single-group cohort: the parallel engine with per-path seed
// streams; bit-identical to looping simulate_path over stream indices.
std::vector<riskurn::DefendantTrajectory> sample_paths(
    const riskurn::UrnParameters& params, std::size_t n, std::size_t horizon,
    std::uint64_t seed, unsigned threads, bool full_paths,
    std::vector<double>* endpoints = nullptr) {
  if (n == 1) {
    std::vector<riskurn::DefendantTrajectory> paths;
    paths.push_back(riskurn::simulate_path(
        params, horizon,
        riskurn::stream_seed(seed, riskurn::seed_domain::defendant, 0)));
    if (endpoints) *endpoints = {paths[0].endpoint()};
    return paths;
  }
  riskurn::CohortConfig config;
  config.population = n;
  config.horizon = horizon;
  config.params = params;
  config.groups = {{"all", 1.0, 0.0, std::nullopt}};
  config.master_seed = seed;
  config.record_full_paths = full_paths;
  auto result = riskurn::run_cohort(config, threads);
  if (endpoints) *endpoints = std::move(result.final_probabilities);
  return std::move(result.trajectories);
}

struct PathArgs {
  riskurn::UrnParameters params;
  std::size_t horizon = 10;
  std::size_t n_paths = 5;
  std::uint64_t seed = 0;
  fs::path out = "paths.csv";
  std::string format = "csv";
  unsigned threads = 0;
};

int cmd_path(const PathArgs& args) {
  const auto paths = sample_paths(args.params, args.n_paths, args.horizon,
                                  args.seed, args.threads, true);
  auto out = open_output(args.out);
  riskurn::write_paths_csv(out, paths, riskurn::delimiter_for(args.format));
  std::cout << "wrote " << args.n_paths << " paths x " << args.horizon
            << " steps to " << args.out.string() << '\n';
  return kExitOk;
}

struct LimitCheckArgs {
  riskurn::UrnParameters params;
  std::size_t horizon = 1000;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  double alpha = 0.01;
  std::size_t hist_bins = 50;
  fs::path out = "limit-check";
  std::string format = "csv";
  unsigned threads = 0;
};

int cmd_limit_check(const LimitCheckArgs& args) {
  std::vector<double> endpoints;
  sample_paths(args.params, args.n_paths, args.horizon, args.seed, args.threads,
               false, &endpoints);
  const auto gof = riskurn::fit_limit_law(endpoints, args.params, args.alpha);
  const auto limit = riskurn::limit_distribution(args.params);

  const fs::path dir = ensure_directory(args.out);
  const char delim = riskurn::delimiter_for(args.format);
  {
    auto out = open_output(dir / ("endpoints." + args.format));
    out << "path_id" << delim << "p_final" << '\n';
    for (std::size_t p = 0; p < endpoints.size(); ++p) {
      out << p << delim << riskurn::format_double(endpoints[p]) << '\n';
    }
  }
  {
    auto out = open_output(dir / ("histogram." + args.format));
    riskurn::write_histogram_csv(out, endpoints, args.hist_bins, delim);
  }
  json report = riskurn::to_json(gof);
  report["limit_law"] = {{"alpha", limit.alpha}, {"beta", limit.beta}};
  report["significance"] = args.alpha;
  write_json_file(dir / "limit_check.json", report);

  const json echo{{"urn",
                   {{"b0", args.params.blue_initial},
                    {"r0", args.params.red_initial},
                    {"k", args.params.increment}}},
                  {"horizon", args.horizon},
                  {"paths", args.n_paths},
                  {"alpha", args.alpha}};
  riskurn::write_manifest(dir, "limit-check", args.seed, echo);

  std::cout << "KS D = " << gof.statistic << " vs threshold " << gof.threshold
            << " (n = " << gof.sample_size << ", Beta(" << limit.alpha << ", "
            << limit.beta << ")) -> " << (gof.passed ? "PASS" : "FAIL") << '\n';
  return gof.passed ? kExitOk : kExitStatFail;
}

struct RunArgs {
  fs::path config_file;
  std::optional<fs::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  unsigned threads = 0;
};

riskurn::ExperimentConfig load_experiment(const RunArgs& args) {
  auto config = riskurn::ExperimentConfig::load(args.config_file);
  if (args.seed) config.cohort.master_seed = *args.seed;
  if (args.out) config.output.directory = *args.out;
  if (args.format) config.output.format = *args.format;
  return config;
}

int cmd_cohort(const RunArgs& args) {
  const auto config = load_experiment(args);
  const auto result = riskurn::run_cohort(config.cohort, args.threads);

  const fs::path dir = ensure_directory(config.output.directory);
  const char delim = riskurn::delimiter_for(config.output.format);
  {
    auto out = open_output(dir / ("endpoints." + config.output.format));
    riskurn::write_endpoints_csv(out, result, delim);
  }
  if (config.cohort.record_full_paths) {
    auto out = open_output(dir / ("trajectories." + config.output.format));
    riskurn::write_trajectories_csv(out, result, delim);
  }
  riskurn::write_manifest(dir, "cohort", config.cohort.master_seed,
                          config.to_json());
  std::cout << "simulated " << config.cohort.population << " defendants over "
            << config.cohort.horizon << " assessments -> " << dir.string()
            << '\n';
  return kExitOk;
}

int cmd_validate(const RunArgs& args) {
  const auto config = load_experiment(args);
  if (!config.snapshot) {
    throw riskurn::ConfigError("snapshot: missing required section");
  }
  if (!config.cohort.record_full_paths) {
    throw riskurn::ConfigError("cohort.record_full_paths: full paths required");
  }
  const auto result = riskurn::run_cohort(config.cohort, args.threads);
  const auto report = riskurn::snapshot_validation(result, *config.snapshot);

  const fs::path dir = ensure_directory(config.output.directory);
  write_json_file(dir / "validation.json", riskurn::to_json(report));
  riskurn::write_manifest(dir, "validate", config.cohort.master_seed,
                          config.to_json());

  std::cout << "snapshot at t=" << report.spec.time << ", lookahead "
            << report.spec.lookahead << ", n=" << report.sample_size << '\n';
  std::cout << "  auc: " << (report.auc ? std::to_string(*report.auc) : "n/a")
            << ", calibration gap: " << report.calibration_gap << '\n';
  std::cout << "  statistical parity gap (score >= "
            << report.spec.threshold << "): " << report.statistical_parity_gap
            << '\n';
  std::cout << "  classification rate gap: " << report.classification_rate_gap
            << ", predictive parity gap: " << report.predictive_parity_gap
            << '\n';
  for (const auto& bin : report.per_bin) {
    if (bin.count == 0) continue;
    std::cout << "  bin [" << bin.lower << ", " << bin.upper
              << "): n=" << bin.count << " mean score " << *bin.mean_score
              << " observed rate " << *bin.observed_rate << '\n';
  }
  return kExitOk;
}

int cmd_amplify(const RunArgs& args, std::size_t bootstrap, double ci_level) {
  const auto config = load_experiment(args);
  if (!config.snapshot) {
    throw riskurn::ConfigError("snapshot: missing required section");
  }
  if (config.cohort.groups.size() < 2) {
    throw riskurn::ConfigError("groups: amplification requires at least two groups");
  }
  if (!config.cohort.record_full_paths) {
    throw riskurn::ConfigError("cohort.record_full_paths: full paths required");
  }
  const auto result = riskurn::run_cohort(config.cohort, args.threads);

  riskurn::AmplificationOptions options;
  options.bootstrap_resamples = bootstrap;
  options.ci_level = ci_level;
  const auto report = riskurn::amplification_report(result, *config.snapshot, options);

  const fs::path dir = ensure_directory(config.output.directory);
  const char delim = riskurn::delimiter_for(config.output.format);
  {
    auto out = open_output(dir / ("disparity." + config.output.format));
    riskurn::write_disparity_csv(out, report.curve, delim);
  }
  write_json_file(dir / "validation.json", riskurn::to_json(report.snapshot));
  write_json_file(dir / "amplification.json", riskurn::to_json(report));
  riskurn::write_manifest(dir, "amplify", config.cohort.master_seed,
                          config.to_json());

  std::cout << "classification rate gap: t=" << report.snapshot.spec.time
            << " -> " << report.snapshot_gap << ", t=" << config.cohort.horizon
            << " -> " << report.final_gap << '\n';
  std::cout << "amplification ratio " << report.ratio << " ("
            << ci_level * 100 << "% CI [" << report.ci_low << ", "
            << report.ci_high << "], " << bootstrap << " resamples)" << '\n';
  return kExitOk;
}

void add_urn_flags(CLI::App* cmd, riskurn::UrnParameters& params) {
  cmd->add_option("--b0", params.blue_initial, "initial high-risk mass")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--r0", params.red_initial, "initial low-risk mass")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--k", params.increment, "reinforcement added per decision")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_run_flags(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config_file, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out, "output directory (overrides config)");
  cmd->add_option("--seed", args.seed, "master seed (overrides config)");
  cmd->add_option("--format", args.format, "csv or tsv (overrides config)")
      ->check(CLI::IsMember({"csv", "tsv"}));
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reinforced risk-scoring simulator and audit harness"};
  app.set_version_flag("--version", riskurn::version);
  app.require_subcommand(1);

  PathArgs path_args;
  path_args.format = "csv";
  auto* path_cmd = app.add_subcommand("path", "sample score trajectories");
  add_urn_flags(path_cmd, path_args.params);
  path_cmd->add_option("--T", path_args.horizon, "assessments per path")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  path_cmd->add_option("--n", path_args.n_paths, "number of paths")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  path_cmd->add_option("--seed", path_args.seed, "master seed")
      ->capture_default_str();
  path_cmd->add_option("--out", path_args.out, "output file")
      ->capture_default_str();
  path_cmd->add_option("--format", path_args.format, "csv or tsv")
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->capture_default_str();
  path_cmd->add_option("--threads", path_args.threads, "worker threads (0 = auto)");

  LimitCheckArgs limit_args;
  auto* limit_cmd =
      app.add_subcommand("limit-check", "test endpoints against the limit law");
  add_urn_flags(limit_cmd, limit_args.params);
  limit_cmd->add_option("--T", limit_args.horizon, "assessments per path")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  limit_cmd->add_option("--n", limit_args.n_paths, "number of paths (>= 100)")
      ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  limit_cmd->add_option("--seed", limit_args.seed, "master seed")
      ->capture_default_str();
  limit_cmd->add_option("--alpha", limit_args.alpha, "significance (0.05 or 0.01)")
      ->check(CLI::IsMember({0.05, 0.01}))
      ->capture_default_str();
  limit_cmd->add_option("--hist-bins", limit_args.hist_bins, "histogram bins")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  limit_cmd->add_option("--out", limit_args.out, "output directory")
      ->capture_default_str();
  limit_cmd->add_option("--format", limit_args.format, "csv or tsv")
      ->check(CLI::IsMember({"csv", "tsv"}))
      ->capture_default_str();
  limit_cmd->add_option("--threads", limit_args.threads, "worker threads (0 = auto)");

  RunArgs cohort_args;
  auto* cohort_cmd = app.add_subcommand("cohort", "run a grouped population");
  add_run_flags(cohort_cmd, cohort_args);

  RunArgs validate_args;
  auto* validate_cmd =
      app.add_subcommand("validate", "one-shot validation study on a cohort");
  add_run_flags(validate_cmd, validate_args);

  RunArgs amplify_args;
  std::size_t bootstrap = 1000;
  double ci_level = 0.99;
  auto* amplify_cmd =
      app.add_subcommand("amplify", "snapshot vs full-horizon disparity");
  add_run_flags(amplify_cmd, amplify_args);
  amplify_cmd->add_option("--bootstrap", bootstrap, "bootstrap resamples")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  amplify_cmd->add_option("--ci-level", ci_level, "confidence level")
      ->check(CLI::Range(0.5, 0.9999))
      ->capture_default_str();

  const unsigned env_threads = default_threads();
  path_args.threads = env_threads;
  limit_args.threads = env_threads;
  cohort_args.threads = env_threads;
  validate_args.threads = env_threads;
  amplify_args.threads = env_threads;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (path_cmd->parsed()) return cmd_path(path_args);
    if (limit_cmd->parsed()) return cmd_limit_check(limit_args);
    if (cohort_cmd->parsed()) return cmd_cohort(cohort_args);
    if (validate_cmd->parsed()) return cmd_validate(validate_args);
    if (amplify_cmd->parsed()) return cmd_amplify(amplify_args, bootstrap, ci_level);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
