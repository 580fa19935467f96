#include "paceforge/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "paceforge/allocation.hpp"
#include "paceforge/errors.hpp"
#include "paceforge/instance_gen.hpp"
#include "paceforge/offline_oracle.hpp"
#include "paceforge/parallel.hpp"
#include "paceforge/pid_mapping.hpp"

namespace paceforge {
namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string config_label(const ResultRow& row, double s) {
  return "b" + fmt_g(row.beta) + "_d" + fmt_g(row.alpha_d) + "_i" +
         fmt_g(row.alpha_i) + "_s" + fmt_g(s);
}

CanonicalParams cell_params(const ResultRow& row, double s, int horizon) {
  CanonicalParams p;
  p.eta = s / std::sqrt(static_cast<double>(horizon));
  p.alpha_i = row.alpha_i;
  p.alpha_d = row.alpha_d;
  p.alpha_p = std::max(0.0, 1.0 - row.alpha_i - row.alpha_d);
  p.beta = row.beta;
  return p;
}

struct PathOutcome {
  double upper = 0.0;
  double gap_rel = 0.0;
  double gap_abs = 0.0;
  double clip_rate = 0.0;
  bool converged = true;
  std::uint64_t checksum = 0;
  std::vector<double> rewards;  // cell-major: row * |s| + s_index
};

}  // namespace

std::vector<ResultRow> controller_grid(const SweepConfig& cfg) {
  std::vector<ResultRow> rows;
  auto sorted = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  for (double beta : sorted(cfg.beta_grid))
    for (double ad : sorted(cfg.alpha_d_grid))
      for (double ai : sorted(cfg.alpha_i_grid)) {
        if (ai + ad > 1.0 + 1e-12) continue;  // negative alpha_P excluded
        ResultRow row;
        row.beta = beta;
        row.alpha_d = ad;
        row.alpha_i = ai;
        rows.push_back(row);
      }
  return rows;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.exact_tiny && cfg.horizon > 5)
    throw InvalidParamsError("exact-tiny benchmark is limited to T <= 5");
  SweepResult result;
  result.s_grid = cfg.s_grid;
  std::sort(result.s_grid.begin(), result.s_grid.end());
  result.rows = controller_grid(cfg);
  const int n_rows = static_cast<int>(result.rows.size());
  const int n_s = static_cast<int>(result.s_grid.size());
  const int paths = cfg.instances * cfg.trials;
  result.paths = paths;
  if (paths == 0 || n_rows == 0 || n_s == 0) {
    result.rows.clear();  // no sample paths, no data rows
    return result;
  }

  std::vector<PathOutcome> outcomes(paths);
  parallel_for(
      static_cast<std::size_t>(paths),
      [&](std::size_t p) {
        const int instance = static_cast<int>(p) / cfg.trials;
        const int trial = static_cast<int>(p) % cfg.trials;
        LpInstanceParams inst =
            gen_lp_params(derive_seed(cfg.seed, instance, 0), cfg.m, cfg.d);
        RequestStream stream = sample_lp_requests(
            inst, cfg.horizon, derive_seed(cfg.seed, instance, trial + 1));
        Vec budget(inst.rho);
        for (double& b : budget) b *= cfg.horizon;

        PathOutcome& out = outcomes[p];
        out.checksum = stream.checksum;
        out.clip_rate = stream.clip_rate;
        if (cfg.exact_tiny) {
          out.upper = exact_opt_enumerated(stream.requests, budget);
        } else {
          DualCertificate cert =
              dual_bound(stream.requests, budget, cfg.dual_tol);
          out.upper = cert.upper;
          out.gap_abs = cert.gap;
          out.gap_rel = cert.upper > 0.0 ? cert.gap / cert.upper : 0.0;
          out.converged = cert.converged;
        }

        out.rewards.assign(static_cast<std::size_t>(n_rows) * n_s, 0.0);
        for (int r = 0; r < n_rows; ++r) {
          for (int si = 0; si < n_s; ++si) {
            CanonicalParams params =
                cell_params(result.rows[r], result.s_grid[si], cfg.horizon);
            double reward = std::numeric_limits<double>::quiet_NaN();
            try {
              TrialConfig tc;
              tc.params = params;
              tc.target = inst.rho;
              if (cfg.map == MapKind::quadratic) {
                tc.map = make_response_map(
                    MapKind::quadratic, cfg.m,
                    std::numeric_limits<double>::infinity());
              } else {
                Vec ceiling =
                    mu_max(cfg.map, inst.rho, stream.f_bar, stream.b_bar,
                           params.eta, params.beta, 1.0, cfg.power_q);
                tc.map =
                    make_response_map(cfg.map, ceiling, cfg.power_q);
              }
              tc.mu1.resize(cfg.m);
              for (int j = 0; j < cfg.m; ++j)
                tc.mu1[j] = cfg.mu1_frac * stream.f_bar / inst.rho[j];
              tc.error_source = cfg.error_source;
              reward = run_trial(stream.requests, tc).total_reward;
            } catch (const StepSizeTooLargeError&) {
              // cell unrunnable for this map/step-size; reported as NaN
            }
            out.rewards[static_cast<std::size_t>(r) * n_s + si] = reward;
          }
        }
      },
      cfg.threads);

  // Sequential aggregation in path order keeps output bytes deterministic.
  result.stream_checksums.reserve(paths);
  double gap_total = 0.0;
  for (const PathOutcome& out : outcomes) {
    result.stream_checksums.push_back(out.checksum);
    gap_total += out.gap_rel;
    if (!out.converged) ++result.unconverged_paths;
  }
  result.mean_gap = gap_total / paths;

  result.raw.reserve(static_cast<std::size_t>(paths) * n_rows * n_s);
  for (int p = 0; p < paths; ++p) {
    const PathOutcome& out = outcomes[p];
    for (int r = 0; r < n_rows; ++r)
      for (int si = 0; si < n_s; ++si) {
        RawRecord rec;
        rec.instance = p / cfg.trials;
        rec.trial = p % cfg.trials;
        rec.config = config_label(result.rows[r], result.s_grid[si]);
        rec.reward = out.rewards[static_cast<std::size_t>(r) * n_s + si];
        rec.upper = out.upper;
        rec.gap = out.gap_abs;
        rec.clip_rate = out.clip_rate;
        result.raw.push_back(std::move(rec));
      }
  }

  for (int r = 0; r < n_rows; ++r) {
    ResultRow& row = result.rows[r];
    row.samples = paths;
    row.mean_gap = result.mean_gap;
    row.mean_ratio.assign(n_s, 0.0);
    row.ci_half.assign(n_s, 0.0);
    row.total_ratio.assign(n_s, 0.0);
    for (int si = 0; si < n_s; ++si) {
      double sum = 0.0, reward_sum = 0.0, upper_sum = 0.0;
      std::vector<double> ratios(paths);
      for (int p = 0; p < paths; ++p) {
        double reward = outcomes[p].rewards[static_cast<std::size_t>(r) * n_s + si];
        double upper = outcomes[p].upper;
        double ratio = upper > 0.0 ? reward / upper
                                   : (reward == 0.0 ? 1.0 : 0.0);
        ratios[p] = ratio;
        sum += ratio;
        reward_sum += reward;
        upper_sum += upper;
      }
      double mean = sum / paths;
      double var = 0.0;
      for (double x : ratios) var += (x - mean) * (x - mean);
      row.mean_ratio[si] = mean;
      row.ci_half[si] =
          paths > 1 ? 1.96 * std::sqrt(var / (static_cast<double>(paths) *
                                              (paths - 1)))
                    : 0.0;
      row.total_ratio[si] = upper_sum > 0.0 ? reward_sum / upper_sum : 1.0;
    }
  }
  return result;
}

void emit_csv(const SweepResult& result, std::ostream& os) {
  os << "momentum_beta,alpha_D,alpha_I";
  for (double s : result.s_grid) os << ",s_" << fmt_g(s);
  os << '\n';
  char buf[32];
  for (const ResultRow& row : result.rows) {
    os << fmt_g(row.beta) << ',' << fmt_g(row.alpha_d) << ','
       << fmt_g(row.alpha_i);
    for (std::size_t si = 0; si < result.s_grid.size(); ++si) {
      double v = si < row.mean_ratio.size()
                     ? row.mean_ratio[si]
                     : std::numeric_limits<double>::quiet_NaN();
      std::snprintf(buf, sizeof buf, "%.3f", v);
      os << ',' << buf;
    }
    os << '\n';
  }
}

void emit_csv(const SweepResult& result, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write CSV: " + path);
  emit_csv(result, os);
}

void emit_raw(const SweepResult& result, std::ostream& os) {
  char buf[128];
  for (const RawRecord& rec : result.raw) {
    std::snprintf(buf, sizeof buf, "%d,%d,%s,%.9g,%.9g,%.9g,%.9g",
                  rec.instance, rec.trial, rec.config.c_str(), rec.reward,
                  rec.upper, rec.gap, rec.clip_rate);
    os << buf << '\n';
  }
}

void emit_raw(const SweepResult& result, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write raw records: " + path);
  emit_raw(result, os);
}

}  // namespace paceforge
