// Command-line front end: Monte-Carlo competitive-ratio sweeps over
// controller parameter grids, numerical verification suites, and regret
// scaling measurements.

#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "paceforge/oco.hpp"
#include "paceforge/sweep.hpp"
#include "paceforge/verify.hpp"

namespace {

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

// Flat key=value file mirroring the sweep flags; values loaded as defaults
// so explicit flags override them.
void load_sweep_config(const std::string& path, paceforge::SweepConfig& cfg,
                       std::string& out, std::string& raw_out,
                       std::string& map_name, std::string& error_source) {
  std::ifstream is(path);
  if (!is) throw CLI::ValidationError("--config", "cannot read " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string trimmed;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
    if (trimmed.empty() || trimmed[0] == '#') continue;
    auto eq = trimmed.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError(
          "--config", "line " + std::to_string(lineno) + ": expected key=value");
    std::string key = trimmed.substr(0, eq);
    std::string value = trimmed.substr(eq + 1);
    if (key == "m") cfg.m = std::stoi(value);
    else if (key == "d") cfg.d = std::stoi(value);
    else if (key == "T") cfg.horizon = std::stoi(value);
    else if (key == "instances") cfg.instances = std::stoi(value);
    else if (key == "trials") cfg.trials = std::stoi(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "s") cfg.s_grid = parse_grid(value);
    else if (key == "beta") cfg.beta_grid = parse_grid(value);
    else if (key == "alpha-d") cfg.alpha_d_grid = parse_grid(value);
    else if (key == "alpha-i") cfg.alpha_i_grid = parse_grid(value);
    else if (key == "map") {
      if (value != "quadratic" && value != "entropy" && value != "power")
        throw CLI::ValidationError("--config", "bad map: " + value);
      map_name = value;
    }
    else if (key == "power-q") cfg.power_q = std::stod(value);
    else if (key == "mu1-frac") cfg.mu1_frac = std::stod(value);
    else if (key == "tol") cfg.dual_tol = std::stod(value);
    else if (key == "threads") cfg.threads = std::stoul(value);
    else if (key == "exact-tiny") cfg.exact_tiny = value == "1" || value == "true";
    else if (key == "error-source") {
      if (value != "intended" && value != "taken")
        throw CLI::ValidationError("--config", "bad error-source: " + value);
      error_source = value;
    }
    else if (key == "out") out = value;
    else if (key == "raw-out") raw_out = value;
    else
      throw CLI::ValidationError("--config", "unknown key: " + key);
  }
}

int run_verify(const std::string& suite, const paceforge::VerifyOptions& opt) {
  std::vector<paceforge::PropertyResult> results;
  if (suite == "weights") {
    results = paceforge::verify_weights(opt);
  } else if (suite == "lemmas") {
    results = paceforge::verify_lemmas(opt);
  } else if (suite == "regret") {
    results = paceforge::verify_regret(opt);
  } else {
    results = paceforge::verify_all(opt);
  }
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-36s dev=%-12.3e thr=%-10.1e %s\n", r.name.c_str(),
                r.deviation, r.threshold, r.pass ? "PASS" : "FAIL");
    ok = ok && r.pass;
  }
  std::printf("%s: %zu properties, %s\n", suite.c_str(), results.size(),
              ok ? "all passed" : "FAILURES PRESENT");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convolutional-mirror-descent controllers for online "
               "allocation: sweeps, verification, scaling"};
  app.require_subcommand(1);

  // --- sweep ---
  paceforge::SweepConfig cfg;
  std::string out = "results.csv";
  std::string raw_out;
  std::string map_name = "quadratic";
  std::string error_source = "intended";
  auto* sweep = app.add_subcommand(
      "sweep", "Competitive-ratio sweep over a controller parameter grid");
  std::string config_path;
  sweep->add_option("--config", config_path,
                    "key=value file mirroring every flag; flags override");
  sweep->add_option("--m", cfg.m, "resources");
  sweep->add_option("--d", cfg.d, "actions per request");
  sweep->add_option("--T", cfg.horizon, "requests per sample path");
  sweep->add_option("--instances", cfg.instances, "instance draws");
  sweep->add_option("--trials", cfg.trials, "sample paths per instance");
  sweep->add_option("--seed", cfg.seed, "master seed");
  sweep->add_option("--s", cfg.s_grid, "step-size multipliers (eta=s/sqrt(T))")
      ->delimiter(',');
  sweep->add_option("--beta", cfg.beta_grid, "momentum grid")->delimiter(',');
  sweep->add_option("--alpha-d", cfg.alpha_d_grid, "derivative-weight grid")
      ->delimiter(',');
  sweep->add_option("--alpha-i", cfg.alpha_i_grid, "integral-weight grid")
      ->delimiter(',');
  sweep
      ->add_option("--map", map_name,
                   "response map: quadratic | entropy | power")
      ->check(CLI::IsMember({"quadratic", "entropy", "power"}));
  sweep->add_option("--power-q", cfg.power_q, "power of the power map");
  sweep->add_option("--mu1-frac", cfg.mu1_frac,
                    "initial dual as a fraction of f_bar/rho_j");
  sweep
      ->add_option("--error-source", error_source,
                   "filter input: intended (pre-gate subgradient) | taken "
                   "(post-gate controller error)")
      ->check(CLI::IsMember({"intended", "taken"}));
  sweep->add_option("--tol", cfg.dual_tol, "relative gap target of the "
                    "benchmark certificate");
  sweep->add_option("--threads", cfg.threads, "worker threads (0 = auto)");
  sweep->add_flag("--exact-tiny", cfg.exact_tiny,
                  "benchmark against enumeration (T <= 5 only)");
  sweep->add_option("--out", out, "output CSV path");
  sweep->add_option("--raw-out", raw_out,
                    "per-path records path (default: <out>.raw)");

  // --- verify ---
  std::string suite = "all";
  paceforge::VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "weights | regret | lemmas | all")
      ->check(CLI::IsMember({"weights", "regret", "lemmas", "all"}));
  verify->add_option("--seed", vopt.seed, "suite seed");
  verify->add_option("--threads", vopt.threads, "worker threads (0 = auto)");

  // --- regret-scaling ---
  std::vector<int> horizons = {250, 1000, 4000};
  int scaling_m = 3;
  int scaling_problems = 40;
  std::uint64_t scaling_seed = 2024;
  auto* scaling = app.add_subcommand(
      "regret-scaling",
      "Regret growth of the proportional controller with eta = T^{-1/2}");
  scaling->add_option("--T", horizons, "horizons")->delimiter(',');
  scaling->add_option("--m", scaling_m, "dimension");
  scaling->add_option("--problems", scaling_problems, "problems per horizon");
  scaling->add_option("--seed", scaling_seed, "suite seed");

  // Config defaults load before the parse so that explicit flags override.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        load_sweep_config(argv[i + 1], cfg, out, raw_out, map_name,
                          error_source);
      } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
      }
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      if (map_name == "entropy") cfg.map = paceforge::MapKind::entropy;
      if (map_name == "power") cfg.map = paceforge::MapKind::power_response;
      if (error_source == "taken")
        cfg.error_source = paceforge::ErrorSource::taken_action;
      auto start = std::chrono::steady_clock::now();
      paceforge::SweepResult result = paceforge::run_sweep(cfg);
      paceforge::emit_csv(result, out);
      if (raw_out.empty()) raw_out = out + ".raw";
      paceforge::emit_raw(result, raw_out);
      double secs = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start)
                        .count();
      std::string gap_note;
      if (result.unconverged_paths > 0)
        gap_note = " (" + std::to_string(result.unconverged_paths) +
                   " paths above gap target)";
      std::fprintf(stderr,
                   "sweep: %d paths x %zu cells in %.1fs, mean benchmark gap "
                   "%.4f%%%s -> %s\n",
                   result.paths, result.rows.size() * result.s_grid.size(),
                   secs, 100.0 * result.mean_gap, gap_note.c_str(),
                   out.c_str());
      return 0;
    }
    if (*verify) return run_verify(suite, vopt);
    if (*scaling) {
      std::vector<double> regrets;
      double slope = paceforge::regret_scaling_slope(
          horizons, scaling_m, scaling_problems, scaling_seed, &regrets);
      for (std::size_t i = 0; i < horizons.size(); ++i)
        std::printf("T=%-6d mean_regret=%.4f\n", horizons[i], regrets[i]);
      std::printf("log-log slope = %.4f\n", slope);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
