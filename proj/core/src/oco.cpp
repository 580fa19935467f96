#include "paceforge/oco.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paceforge/errors.hpp"

namespace paceforge {

double subgradient_violation(const OcoProblem& problem, Rng& rng,
                             int samples) {
  const std::size_t m = problem.lo.size();
  double worst = 0.0;
  Vec mu(m), nu(m);
  for (const OcoFunction& fn : problem.fns) {
    for (std::size_t j = 0; j < m; ++j)
      mu[j] = rng.uniform(problem.lo[j], problem.hi[j]);
    double w_mu = fn.value(mu);
    Vec g = fn.subgradient(mu);
    for (int s = 0; s < samples; ++s) {
      for (std::size_t j = 0; j < m; ++j)
        nu[j] = rng.uniform(problem.lo[j], problem.hi[j]);
      double lin = w_mu;
      for (std::size_t j = 0; j < m; ++j) lin += g[j] * (nu[j] - mu[j]);
      worst = std::max(worst, lin - fn.value(nu));
    }
  }
  return worst;
}

OcoRun run_oco(const OcoProblem& problem, const CanonicalParams& params,
               const MirrorMap& map, const Vec& mu1, NormPair pair) {
  validate(params);
  const std::size_t m = problem.lo.size();
  if (mu1.size() != m || map.dim() != m)
    throw DimensionError("problem, map and start point dimensions disagree");
  const int T = problem.horizon();
  const double sigma = pair_sigma(map.sigma, pair, m);

  OcoRun run;
  run.mu.reserve(T);
  run.grads.reserve(T);
  run.zs.reserve(T);
  run.losses.reserve(T);
  run.min_margin = std::numeric_limits<double>::infinity();

  Vec mu = mu1;
  FilterState filter = FilterState::zero(m);
  for (int t = 0; t < T; ++t) {
    const OcoFunction& fn = problem.fns[t];
    double loss = fn.value(mu);
    if (!std::isfinite(loss))
      throw NumericError("non-finite loss at t=" + std::to_string(t + 1));
    Vec g = fn.subgradient(mu);
    for (double v : g)
      if (!std::isfinite(v))
        throw NumericError("non-finite subgradient at t=" +
                           std::to_string(t + 1));

    FilterResult filt = filter_gradient(filter, g, params);
    Vec next = mirror_step(mu, filt.z, params.eta, map);

    run.losses.push_back(loss);
    run.mu.push_back(mu);
    run.max_grad_norm = std::max(run.max_grad_norm, primal_norm(pair, g));
    run.max_z_norm = std::max(run.max_z_norm, primal_norm(pair, filt.z));
    run.min_margin = std::min(
        run.min_margin,
        stability_margin(mu, next, filt.z, params.eta, sigma, pair));
    run.grads.push_back(std::move(g));
    run.zs.push_back(std::move(filt.z));

    mu = std::move(next);
    filter = std::move(filt.next);
  }
  if (T == 0) run.min_margin = 0.0;

  double algo_total = 0.0;
  for (double l : run.losses) algo_total += l;
  run.regrets.reserve(problem.comparators.size());
  for (const Vec& comp : problem.comparators) {
    double comp_total = 0.0;
    for (int t = 0; t < T; ++t) comp_total += problem.fns[t].value(comp);
    run.regrets.push_back(algo_total - comp_total);
  }
  return run;
}

BoundReport verify_regret_bound(const OcoProblem& problem,
                                const CanonicalParams& params,
                                const MirrorMap& map, const Vec& mu1,
                                NormPair pair, double g1_hint,
                                double g2_hint) {
  BoundReport report;
  report.run = run_oco(problem, params, map, mu1, pair);
  const int T = problem.horizon();
  WeightSequence weights = canonical_to_weights(params, T);
  InverseSequence inv = toeplitz_inverse(weights);
  for (double a : inv.a) {
    if (a < -1e-9) {
      report.applicable = false;
      report.reason = "negative suffix sums (outside the real-roots regime)";
      return report;
    }
  }
  report.g1 = g1_hint > 0.0 ? g1_hint : report.run.max_grad_norm;
  report.g2 = g2_hint > 0.0 ? g2_hint : report.run.max_z_norm;
  const double sigma = pair_sigma(map.sigma, pair, problem.lo.size());

  report.min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < problem.comparators.size(); ++ci) {
    const Vec& comp = problem.comparators[ci];
    double v1 = bregman(map, comp, mu1);
    double vmax = 0.0;
    for (const Vec& mu_t : report.run.mu)
      vmax = std::max(vmax, bregman(map, comp, mu_t));
    double bound = regret_bound(inv, weights, params.eta, sigma, report.g1,
                                report.g2, v1, vmax);
    double regret = report.run.regrets[ci];
    report.regret.push_back(regret);
    report.bound.push_back(bound);
    report.slack.push_back(bound - regret);
    report.min_slack = std::min(report.min_slack, bound - regret);
  }
  if (problem.comparators.empty()) report.min_slack = 0.0;
  return report;
}

std::vector<Vec> default_comparators(const Vec& lo, const Vec& hi) {
  const std::size_t m = lo.size();
  std::vector<Vec> comps;
  if (m <= 16) {
    for (std::size_t mask = 0; mask < (1ull << m); ++mask) {
      Vec c(m);
      for (std::size_t j = 0; j < m; ++j)
        c[j] = (mask >> j) & 1 ? hi[j] : lo[j];
      comps.push_back(std::move(c));
    }
  }
  const std::size_t gdims = std::min<std::size_t>(m, 3);
  const int levels = 11;
  std::size_t total = 1;
  for (std::size_t j = 0; j < gdims; ++j) total *= levels;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec c = lo;
    std::size_t rem = idx;
    for (std::size_t j = 0; j < gdims; ++j) {
      int level = static_cast<int>(rem % levels);
      rem /= levels;
      c[j] = lo[j] + (hi[j] - lo[j]) * level / (levels - 1);
    }
    comps.push_back(std::move(c));
  }
  return comps;
}

OcoProblem make_linear_problem(int horizon, int m, Rng& rng, double box_hi) {
  OcoProblem problem;
  problem.lo.assign(m, 0.0);
  problem.hi.assign(m, box_hi);
  problem.fns.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    Vec g(m);
    for (int j = 0; j < m; ++j) g[j] = rng.uniform(-1.0, 1.0);
    problem.fns.push_back(OcoFunction{
        [g](const Vec& mu) { return dot(g, mu); },
        [g](const Vec&) { return g; },
    });
  }
  problem.comparators = default_comparators(problem.lo, problem.hi);
  return problem;
}

OcoProblem make_piecewise_problem(int horizon, int m, Rng& rng, int pieces,
                                  double box_hi) {
  OcoProblem problem;
  problem.lo.assign(m, 0.0);
  problem.hi.assign(m, box_hi);
  problem.fns.reserve(horizon);
  for (int t = 0; t < horizon; ++t) {
    std::vector<Vec> slopes(pieces, Vec(m));
    Vec offsets(pieces);
    for (int k = 0; k < pieces; ++k) {
      for (int j = 0; j < m; ++j) slopes[k][j] = rng.uniform(-1.0, 1.0);
      offsets[k] = rng.uniform(-0.5, 0.5);
    }
    auto piece_max = [slopes, offsets](const Vec& mu) {
      int arg = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < slopes.size(); ++k) {
        double v = offsets[k] + dot(slopes[k], mu);
        if (v > best) {
          best = v;
          arg = static_cast<int>(k);
        }
      }
      return std::pair<double, int>(best, arg);
    };
    problem.fns.push_back(OcoFunction{
        [piece_max](const Vec& mu) { return piece_max(mu).first; },
        [piece_max, slopes](const Vec& mu) {
          return slopes[piece_max(mu).second];
        },
    });
  }
  problem.comparators = default_comparators(problem.lo, problem.hi);
  return problem;
}

OcoProblem make_alternating_problem(int horizon) {
  OcoProblem problem;
  problem.lo = {0.0};
  problem.hi = {1.0};
  for (int t = 0; t < horizon; ++t) {
    double g = t % 2 == 0 ? 1.0 : -1.0;
    problem.fns.push_back(OcoFunction{
        [g](const Vec& mu) { return g * mu[0]; },
        [g](const Vec&) { return Vec{g}; },
    });
  }
  problem.comparators = default_comparators(problem.lo, problem.hi);
  return problem;
}

OcoProblem make_quadratic_target_problem(int horizon, const Vec& center,
                                         double box_hi) {
  OcoProblem problem;
  problem.lo.assign(center.size(), 0.0);
  problem.hi.assign(center.size(), box_hi);
  for (int t = 0; t < horizon; ++t) {
    problem.fns.push_back(OcoFunction{
        [center](const Vec& mu) {
          double s = 0.0;
          for (std::size_t j = 0; j < mu.size(); ++j)
            s += (mu[j] - center[j]) * (mu[j] - center[j]);
          return 0.5 * s;
        },
        [center](const Vec& mu) {
          Vec g(mu.size());
          for (std::size_t j = 0; j < mu.size(); ++j)
            g[j] = mu[j] - center[j];
          return g;
        },
    });
  }
  problem.comparators = default_comparators(problem.lo, problem.hi);
  problem.comparators.push_back(center);
  return problem;
}

double stochastic_linear_regret(int horizon, int m, int problems,
                                std::uint64_t seed) {
  double total = 0.0;
  for (int p = 0; p < problems; ++p) {
    Rng rng(derive_seed(seed, p, horizon));
    OcoProblem problem = make_linear_problem(horizon, m, rng);
    CanonicalParams params;  // proportional controller
    params.eta = 1.0 / std::sqrt(static_cast<double>(horizon));
    MirrorMap map = make_response_map(MapKind::quadratic, problem.hi);
    OcoRun run = run_oco(problem, params, map, Vec(m, 0.0), NormPair::l2_l2);
    double best = 0.0;
    for (double r : run.regrets) best = std::max(best, r);
    total += best;
  }
  return total / problems;
}

double regret_scaling_slope(const std::vector<int>& horizons, int m,
                            int problems, std::uint64_t seed,
                            std::vector<double>* regrets_out) {
  std::vector<double> xs, ys;
  for (int T : horizons) {
    double reg = stochastic_linear_regret(T, m, problems, seed);
    if (regrets_out) regrets_out->push_back(reg);
    xs.push_back(std::log(static_cast<double>(T)));
    ys.push_back(std::log(std::max(reg, 1e-12)));
  }
  double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace paceforge
