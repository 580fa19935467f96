#ifndef PACEFORGE_SWEEP_HPP
#define PACEFORGE_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "paceforge/allocation.hpp"
#include "paceforge/mirror_map.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

struct SweepConfig {
  int m = 10;
  int d = 5;
  int horizon = 1000;
  int instances = 20;
  int trials = 10;
  std::uint64_t seed = 1;
  std::vector<double> s_grid = {0.1, 1.0, 10.0, 100.0};  // eta = s / sqrt(T)
  std::vector<double> beta_grid = {0.0, 0.9, 0.99, 0.999};
  std::vector<double> alpha_d_grid = {0.0, 0.25, 0.5, 0.75};
  std::vector<double> alpha_i_grid = {0.0, 0.25, 0.5, 0.75};
  MapKind map = MapKind::quadratic;
  double power_q = 2.0;
  double mu1_frac = 0.0;   // initial dual as a fraction of f_bar / rho_j
  double dual_tol = 1e-4;  // relative certificate gap target
  unsigned threads = 0;    // 0 = hardware concurrency
  bool exact_tiny = false; // benchmark against enumeration (horizon <= 5)
  // Experiments drive the filter with the dual-function subgradient (the
  // pre-gate error); once a resource's budget dies, the post-gate error
  // would let its price collapse and permanently gate most requests.
  ErrorSource error_source = ErrorSource::intended_action;
};

// One output row: a (beta, alpha_D, alpha_I) cell with one competitive-ratio
// column per step-size multiplier.
struct ResultRow {
  double beta = 0.0, alpha_d = 0.0, alpha_i = 0.0;
  std::vector<double> mean_ratio;  // per s, NaN if the cell failed to run
  std::vector<double> ci_half;     // 1.96 * stderr over sample paths
  // Ratio of expectations: total reward / total benchmark across paths.
  // Weights large instances by value; matches the asymptotic definition of
  // the competitive ratio.
  std::vector<double> total_ratio;
  int samples = 0;
  double mean_gap = 0.0;  // mean relative certificate gap of the benchmark
};

struct RawRecord {
  int instance = 0, trial = 0;
  std::string config;
  double reward = 0.0, upper = 0.0, gap = 0.0, clip_rate = 0.0;
};

struct SweepResult {
  std::vector<double> s_grid;
  std::vector<ResultRow> rows;
  std::vector<RawRecord> raw;
  std::vector<std::uint64_t> stream_checksums;  // one per sample path
  int paths = 0;
  double mean_gap = 0.0;
  int unconverged_paths = 0;
};

// Valid (beta, alpha_D, alpha_I) cells, alpha_I + alpha_D <= 1, sorted
// ascending by beta, then alpha_D, then alpha_I.
std::vector<ResultRow> controller_grid(const SweepConfig& cfg);

// Paired Monte-Carlo sweep: every controller cell consumes the identical
// request stream per (instance, trial) and is scored against the same
// certified dual upper bound.
SweepResult run_sweep(const SweepConfig& cfg);

// Pivot CSV: header momentum_beta,alpha_D,alpha_I,s_<v>... one line per
// cell, ratios to 3 decimals. Deterministic bytes given (config, seed).
void emit_csv(const SweepResult& result, std::ostream& os);
void emit_csv(const SweepResult& result, const std::string& path);

// Line-delimited per-path records: instance, trial, config id, reward,
// upper bound, absolute gap, clip rate.
void emit_raw(const SweepResult& result, std::ostream& os);
void emit_raw(const SweepResult& result, const std::string& path);

}  // namespace paceforge

#endif
