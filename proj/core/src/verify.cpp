#include "paceforge/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paceforge/allocation.hpp"
#include "paceforge/cmd_core.hpp"
#include "paceforge/instance_gen.hpp"
#include "paceforge/oco.hpp"
#include "paceforge/parallel.hpp"
#include "paceforge/pid_mapping.hpp"
#include "paceforge/rng.hpp"
#include "paceforge/spectral.hpp"

namespace paceforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CanonicalParams make_params(double eta, double ap, double ai, double ad,
                            double beta) {
  CanonicalParams p;
  p.eta = eta;
  p.alpha_p = std::max(0.0, ap);  // 1 - ai - ad can round below zero
  p.alpha_i = ai;
  p.alpha_d = ad;
  p.beta = beta;
  return p;
}

// Random parameters of the requested kind; PID draws until the
// characteristic roots are comfortably real.
CanonicalParams random_kind_params(ControllerKind kind, double eta, Rng& rng) {
  switch (kind) {
    case ControllerKind::P:
      return make_params(eta, 1.0, 0.0, 0.0, 0.0);
    case ControllerKind::PD: {
      double ad = rng.uniform(0.05, 0.9);
      return make_params(eta, 1.0 - ad, 0.0, ad, rng.uniform(0.0, 0.9));
    }
    case ControllerKind::PI: {
      double ai = rng.uniform(0.05, 0.95);
      return make_params(eta, 1.0 - ai, ai, 0.0, rng.uniform(0.0, 0.95));
    }
    case ControllerKind::PID: {
      for (;;) {
        double ad = rng.uniform(0.05, 0.9);
        double ai = rng.uniform(0.05, std::min(0.9, 1.0 - ad));
        double beta = rng.uniform(0.05, 0.95);
        CanonicalParams p =
            make_params(eta, 1.0 - ad - ai, ai, ad, beta);
        RootClassification rc = classify_roots(p);
        double disc = rc.b * rc.b - 4.0 * rc.a * rc.c;
        if (rc.real_roots && disc > 1e-6) return p;
      }
    }
  }
  return make_params(eta, 1.0, 0.0, 0.0, 0.0);
}

}  // namespace

ClosedFormCheck check_closed_forms(int horizon) {
  ClosedFormCheck check;
  auto compare = [&](ControllerKind kind, const CanonicalParams& p) {
    WeightSequence w = canonical_to_weights(p, horizon);
    InverseSequence brute = toeplitz_inverse(w);
    InverseSequence closed = q_closed_form(kind, p, horizon);
    double dev = 0.0;
    for (int i = 0; i < horizon; ++i)
      dev = std::max(dev, std::abs(brute.q[i] - closed.q[i]));
    check.max_deviation = std::max(check.max_deviation, dev);
    ++check.combos;
  };

  compare(ControllerKind::P, make_params(1.0, 1.0, 0.0, 0.0, 0.0));
  for (int i = 1; i <= 19; ++i) {
    double ad = 0.05 * i;
    compare(ControllerKind::PD, make_params(1.0, 1.0 - ad, 0.0, ad, 0.0));
  }
  for (int i = 1; i <= 13; ++i)
    for (int b = 1; b <= 13; ++b) {
      double ai = 0.07 * i;
      double beta = 0.07 * b;
      compare(ControllerKind::PI,
              make_params(1.0, 1.0 - ai, ai, 0.0, beta));
    }
  for (int di = 0; di < 8; ++di)
    for (int ii = 0; ii < 8; ++ii)
      for (int b = 1; b <= 9; ++b) {
        double ad = 0.05 + 0.1 * di;
        double ai = 0.05 + 0.1 * ii;
        double beta = 0.1 * b;
        if (ad + ai > 1.0) continue;
        CanonicalParams p = make_params(1.0, 1.0 - ad - ai, ai, ad, beta);
        if (!classify_roots(p).real_roots) continue;
        compare(ControllerKind::PID, p);
      }
  return check;
}

double check_decomposition(int runs, int horizon, int m, std::uint64_t seed) {
  double worst = 0.0;
  for (int run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, run, 7));
    // Arbitrary valid parameters; the identity is algebraic and does not
    // need the real-roots regime.
    double ai = rng.uniform(0.0, 1.0);
    double ad = rng.uniform(0.0, 1.0 - ai);
    CanonicalParams p = make_params(rng.uniform(0.05, 1.0), 1.0 - ai - ad, ai,
                                    ad, rng.uniform(0.0, 0.95));
    MirrorMap map = make_response_map(MapKind::quadratic, m, 2.0);

    std::vector<Vec> grads(horizon, Vec(m));
    for (auto& g : grads)
      for (double& v : g) v = rng.uniform(-1.0, 1.0);

    std::vector<Vec> zs(horizon), mus(horizon);
    Vec mu(m);
    for (double& v : mu) v = rng.uniform(0.0, 2.0);
    FilterState filter = FilterState::zero(m);
    for (int t = 0; t < horizon; ++t) {
      mus[t] = mu;
      FilterResult f = filter_gradient(filter, grads[t], p);
      zs[t] = f.z;
      mu = mirror_step(mu, f.z, p.eta, map);
      filter = std::move(f.next);
    }

    Vec comparator(m);
    for (double& v : comparator) v = rng.uniform(0.0, 2.0);
    WeightSequence w = canonical_to_weights(p, horizon);
    InverseSequence inv = toeplitz_inverse(w);
    DecompositionSides sides =
        regret_decomposition(w, inv, grads, zs, mus, comparator);
    double scale =
        std::max({1.0, std::abs(sides.lhs), std::abs(sides.rhs)});
    worst = std::max(worst, std::abs(sides.lhs - sides.rhs) / scale);
  }
  return worst;
}

double check_filter_convolution(int runs, int horizon, int m,
                                std::uint64_t seed) {
  double worst = 0.0;
  for (int run = 0; run < runs; ++run) {
    Rng rng(derive_seed(seed, run, 11));
    double ai = rng.uniform(0.0, 1.0);
    double ad = rng.uniform(0.0, 1.0 - ai);
    CanonicalParams p = make_params(rng.uniform(0.01, 2.0), 1.0 - ai - ad, ai,
                                    ad, rng.uniform(0.0, 0.99));
    std::vector<Vec> grads(horizon, Vec(m));
    for (auto& g : grads)
      for (double& v : g) v = rng.uniform(-1.0, 1.0);

    WeightSequence w = canonical_to_weights(p, horizon);
    std::vector<Vec> direct = convolve_gradients(w, grads);
    FilterState filter = FilterState::zero(m);
    for (int t = 0; t < horizon; ++t) {
      FilterResult f = filter_gradient(filter, grads[t], p);
      for (int j = 0; j < m; ++j)
        worst = std::max(worst, std::abs(f.z[j] - direct[t][j]));
      filter = std::move(f.next);
    }
  }
  return worst;
}

CeilingCheck check_iterate_ceiling(int trials_per_kind, int horizon,
                                   std::uint64_t seed, unsigned threads) {
  const ControllerKind kinds[] = {ControllerKind::P, ControllerKind::PD,
                                  ControllerKind::PI, ControllerKind::PID};
  const int total = trials_per_kind * 4;
  const int m = 3, d = 3;
  const double eta = 1.0 / std::sqrt(static_cast<double>(horizon));

  std::vector<CeilingCheck> partial(total);
  parallel_for(
      static_cast<std::size_t>(total),
      [&](std::size_t idx) {
        const ControllerKind kind = kinds[idx / trials_per_kind];
        Rng rng(derive_seed(seed, idx, 23));
        CanonicalParams params = random_kind_params(kind, eta, rng);

        LpInstanceParams inst =
            gen_lp_params(derive_seed(seed, idx, 29), m, d);
        RequestStream stream = sample_lp_requests(
            inst, horizon, derive_seed(seed, idx, 31));

        TrialConfig tc;
        tc.params = params;
        tc.target = inst.rho;
        tc.map = make_response_map(MapKind::quadratic, m, kInf);
        tc.mu1.assign(m, 0.0);
        TrialRecord rec = run_trial(stream.requests, tc);

        Vec ceiling = mu_max(MapKind::quadratic, inst.rho, stream.f_bar,
                             stream.b_bar, params.eta, params.beta, 1.0);
        CeilingCheck& out = partial[idx];
        out.trials = 1;
        out.steps = rec.steps;
        out.min_margin = rec.min_margin;
        out.max_excess = -kInf;
        for (int j = 0; j < m; ++j)
          out.max_excess =
              std::max(out.max_excess, rec.mu_peak[j] - ceiling[j]);
        for (int j = 0; j < m; ++j) {
          double budget = inst.rho[j] * horizon;
          if (rec.total_consumption[j] > budget) out.budget_ok = false;
          if (rec.final_remaining[j] < 0.0) out.budget_ok = false;
        }
      },
      threads);

  CeilingCheck check;
  check.max_excess = -kInf;
  check.min_margin = kInf;
  for (const CeilingCheck& p : partial) {
    check.max_excess = std::max(check.max_excess, p.max_excess);
    check.min_margin = std::min(check.min_margin, p.min_margin);
    check.steps += p.steps;
    check.budget_ok = check.budget_ok && p.budget_ok;
    check.trials += p.trials;
  }
  return check;
}

BoundSuiteCheck check_bound_suite(int problems, std::uint64_t seed,
                                  unsigned threads) {
  std::vector<BoundSuiteCheck> partial(problems);
  parallel_for(
      static_cast<std::size_t>(problems),
      [&](std::size_t idx) {
        Rng rng(derive_seed(seed, idx, 41));
        const int m = 1 + static_cast<int>(idx % 5);
        const int T = 100 + 100 * static_cast<int>(idx % 5);
        const ControllerKind kind =
            static_cast<ControllerKind>(idx % 4);

        double eta = rng.uniform(0.3, 3.0) / std::sqrt(static_cast<double>(T));
        CanonicalParams params = random_kind_params(kind, eta, rng);
        if (kind == ControllerKind::PD && params.alpha_d > 0.75) {
          params.alpha_d = 0.75;
          params.alpha_p = 0.25;
        }

        OcoProblem problem = idx % 2 == 0
                                 ? make_linear_problem(T, m, rng,
                                                       rng.uniform(0.5, 2.0))
                                 : make_piecewise_problem(
                                       T, m, rng, 4, rng.uniform(0.5, 2.0));
        MirrorMap map = make_response_map(MapKind::quadratic, problem.hi);
        BoundReport report = verify_regret_bound(problem, params, map,
                                                 Vec(m, 0.0), NormPair::l2_l2);
        BoundSuiteCheck& out = partial[idx];
        out.problems = 1;
        if (!report.applicable) {
          out.skipped = 1;
          out.min_slack = kInf;
          out.min_margin = kInf;
          return;
        }
        out.min_slack = report.min_slack;
        out.min_margin = report.run.min_margin;

        WeightSequence w = canonical_to_weights(params, T);
        InverseSequence inv = toeplitz_inverse(w);
        Vec comparator(m, 0.0);
        DecompositionSides sides = regret_decomposition(
            w, inv, report.run.grads, report.run.zs, report.run.mu,
            comparator);
        double scale =
            std::max({1.0, std::abs(sides.lhs), std::abs(sides.rhs)});
        out.max_decomposition_dev = std::abs(sides.lhs - sides.rhs) / scale;
      },
      threads);

  BoundSuiteCheck check;
  check.min_slack = kInf;
  check.min_margin = kInf;
  for (const BoundSuiteCheck& p : partial) {
    check.min_slack = std::min(check.min_slack, p.min_slack);
    check.min_margin = std::min(check.min_margin, p.min_margin);
    check.max_decomposition_dev =
        std::max(check.max_decomposition_dev, p.max_decomposition_dev);
    check.problems += p.problems;
    check.skipped += p.skipped;
  }
  return check;
}

std::vector<PropertyResult> verify_weights(const VerifyOptions& opt) {
  std::vector<PropertyResult> results;
  auto add = [&](const std::string& name, double dev, double thr) {
    results.push_back({name, dev, thr, dev <= thr});
  };

  ClosedFormCheck cf = check_closed_forms(opt.grid_horizon);
  add("closed_form_vs_toeplitz", cf.max_deviation, 1e-9);
  add("closed_form_grid_size", cf.combos >= 300 ? 0.0 : 1.0, 0.5);

  // lambda * q convolves to the unit impulse.
  double conv_dev = 0.0;
  double sum_dev = 0.0;
  {
    Rng rng(derive_seed(opt.seed, 1, 3));
    for (int run = 0; run < 40; ++run) {
      double ai = rng.uniform(0.0, 1.0);
      double ad = rng.uniform(0.0, 1.0 - ai);
      CanonicalParams p = make_params(1.0, 1.0 - ai - ad, ai, ad,
                                      rng.uniform(0.0, 0.97));
      const int T = 120;
      WeightSequence w = canonical_to_weights(p, T);
      InverseSequence inv = toeplitz_inverse(w);
      for (int k = 0; k < T; ++k) {
        double s = 0.0;
        for (int i = 0; i <= k; ++i) s += w.lambda[i] * inv.q[k - i];
        conv_dev = std::max(conv_dev, std::abs(s - (k == 0 ? 1.0 : 0.0)));
      }
      double lam_sum = 0.0;
      for (double l : w.lambda) lam_sum += l;
      double tail = p.alpha_i * std::pow(p.beta, T);
      sum_dev = std::max(
          sum_dev, std::abs(lam_sum - (1.0 - p.alpha_d)) - tail);
    }
  }
  add("inverse_convolution_identity", conv_dev, 1e-9);
  add("weight_sum_tail_identity", sum_dev, 1e-12);

  add("filter_equals_direct_convolution",
      check_filter_convolution(50, 100, 5, opt.seed), 1e-11);

  // Monotonicity of the suffix sums and the l1 bound on q.
  double pd_increase = 0.0, pd_head = 0.0, pi_decrease = 0.0, l1_excess = 0.0;
  {
    for (int i = 1; i <= 9; ++i) {
      double ad = 0.1 * i;
      InverseSequence inv = q_closed_form(
          ControllerKind::PD, make_params(1.0, 1.0 - ad, 0.0, ad, 0.0), 200);
      for (std::size_t t = 1; t < inv.a.size(); ++t)
        pd_increase = std::max(pd_increase, inv.a[t] - inv.a[t - 1]);
      pd_head = std::max(pd_head, inv.a[0] - 1.0 / (1.0 - ad));
      for (int b = 1; b <= 9; ++b) {
        double ai = 0.1 * i, beta = 0.1 * b;
        InverseSequence pi_inv = q_closed_form(
            ControllerKind::PI, make_params(1.0, 1.0 - ai, ai, 0.0, beta),
            200);
        for (std::size_t t = 1; t < pi_inv.a.size(); ++t)
          pi_decrease =
              std::max(pi_decrease, pi_inv.a[t - 1] - pi_inv.a[t]);
      }
    }
    for (int di = 1; di <= 7; ++di)
      for (int ii = 1; ii <= 7 && di + ii <= 10; ++ii)
        for (int b = 1; b <= 9; ++b) {
          CanonicalParams p =
              make_params(1.0, 1.0 - 0.1 * di - 0.1 * ii, 0.1 * ii, 0.1 * di,
                          0.1 * b);
          if (!classify_roots(p).real_roots) continue;
          InverseSequence inv =
              q_closed_form(ControllerKind::PID, p, 200);
          double l1 = 0.0;
          for (double q : inv.q) l1 += std::abs(q);
          l1_excess = std::max(l1_excess, l1 - q_abs_sum_bound(p));
        }
  }
  add("pd_suffix_sums_decreasing", pd_increase, 1e-12);
  add("pd_first_suffix_sum_bound", pd_head, 1e-12);
  add("pi_suffix_sums_increasing", pi_decrease, 1e-12);
  add("q_l1_within_root_bound", l1_excess, 1e-9);
  return results;
}

std::vector<PropertyResult> verify_lemmas(const VerifyOptions& opt) {
  std::vector<PropertyResult> results;
  auto add = [&](const std::string& name, double dev, double thr) {
    results.push_back({name, dev, thr, dev <= thr});
  };

  add("decomposition_identity",
      check_decomposition(opt.decomposition_runs, 50, 3, opt.seed), 1e-8);

  CeilingCheck ceiling = check_iterate_ceiling(
      opt.ceiling_trials, opt.ceiling_horizon, opt.seed, opt.threads);
  add("iterate_ceiling_excess", std::max(0.0, ceiling.max_excess), 1e-9);
  add("stability_margin", std::max(0.0, -ceiling.min_margin), 1e-12);
  add("budget_feasibility_exact", ceiling.budget_ok ? 0.0 : 1.0, 0.5);

  // Strong convexity of the divergence on sampled box points.
  double convexity_dev = 0.0;
  {
    Rng rng(derive_seed(opt.seed, 5, 13));
    MirrorMap quad = make_response_map(MapKind::quadratic, 3, 5.0);
    MirrorMap ent = make_response_map(MapKind::entropy, 3, 5.0);
    MirrorMap pow2 = make_response_map(MapKind::power_response, 3, 5.0, 2.0);
    for (int s = 0; s < 400; ++s) {
      Vec x(3), y(3);
      for (int j = 0; j < 3; ++j) {
        x[j] = rng.uniform(1e-3, 5.0);
        y[j] = rng.uniform(1e-3, 5.0);
      }
      Vec diff(3);
      for (int j = 0; j < 3; ++j) diff[j] = x[j] - y[j];
      double l2 = norm2(diff), l1 = norm1(diff);
      convexity_dev = std::max(
          convexity_dev, 0.5 * quad.sigma * l2 * l2 - bregman(quad, x, y));
      double sig_ent = pair_sigma(ent.sigma, NormPair::linf_l1, 3);
      convexity_dev = std::max(
          convexity_dev, 0.5 * sig_ent * l1 * l1 - bregman(ent, x, y));
      double sig_pow = pair_sigma(pow2.sigma, NormPair::linf_l1, 3);
      convexity_dev = std::max(
          convexity_dev, 0.5 * sig_pow * l1 * l1 - bregman(pow2, x, y));
    }
  }
  add("divergence_strong_convexity", convexity_dev, 1e-9);
  return results;
}

std::vector<PropertyResult> verify_regret(const VerifyOptions& opt) {
  std::vector<PropertyResult> results;
  BoundSuiteCheck suite =
      check_bound_suite(opt.bound_problems, opt.seed, opt.threads);
  results.push_back({"regret_bound_slack", std::max(0.0, -suite.min_slack),
                     1e-9, suite.min_slack >= -1e-9});
  results.push_back({"oco_stability_margin",
                     std::max(0.0, -suite.min_margin), 1e-12,
                     suite.min_margin >= -1e-12});
  results.push_back({"oco_decomposition_identity",
                     suite.max_decomposition_dev, 1e-8,
                     suite.max_decomposition_dev <= 1e-8});
  return results;
}

std::vector<PropertyResult> verify_all(const VerifyOptions& opt) {
  std::vector<PropertyResult> all = verify_weights(opt);
  for (auto& r : verify_lemmas(opt)) all.push_back(std::move(r));
  for (auto& r : verify_regret(opt)) all.push_back(std::move(r));
  return all;
}

}  // namespace paceforge
