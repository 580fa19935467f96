#include "paceforge/offline_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "paceforge/allocation.hpp"
#include "paceforge/errors.hpp"

namespace paceforge {
namespace {

// Best adjusted reward of one request at mu, with the maximizing action.
double best_adjusted(const Request& req, const Vec& mu, PrimalAction* action) {
  PrimalAction a = primal_decision(req, mu);
  double v = adjusted_value(req, a, mu);
  if (v < 0.0) {  // zero action dominates
    a = PrimalAction{};
    v = 0.0;
  }
  if (action) *action = a;
  return v;
}

struct GoldenResult {
  double x;
  double value;
};

// Golden-section minimization of a unimodal (here: convex piecewise-linear)
// univariate function on [lo, hi].
template <typename F>
GoldenResult golden_min(const F& f, double lo, double hi, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  GoldenResult best{lo, f(lo)};
  double fhi = f(hi);
  if (fhi < best.value) best = {hi, fhi};

  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

}  // namespace

double dual_value(const Vec& mu, std::span<const Request> requests,
                  const Vec& budget) {
  for (double v : mu)
    if (v < 0.0) throw DomainError("dual variables must be non-negative");
  double total = dot(budget, mu);
  for (const Request& req : requests) total += best_adjusted(req, mu, nullptr);
  return total;
}

double greedy_primal_value(std::span<const Request> requests,
                           const Vec& budget, const Vec& mu) {
  struct Candidate {
    double adjusted;
    int t;
    PrimalAction action;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(requests.size());
  for (int t = 0; t < static_cast<int>(requests.size()); ++t) {
    PrimalAction a;
    double v = best_adjusted(requests[t], mu, &a);
    // Zero-adjusted actions are the marginal ones; they must participate or
    // the bound collapses at a degenerate optimum.
    bool nontrivial = a.vertex >= 0 || a.bid > 0.0;
    if (v >= 0.0 && nontrivial) candidates.push_back({v, t, a});
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& x, const Candidate& y) {
              if (x.adjusted != y.adjusted) return x.adjusted > y.adjusted;
              return x.t < y.t;
            });

  Vec remaining = budget;
  double value = 0.0;
  for (const Candidate& cand : candidates) {
    const Request& req = requests[cand.t];
    Vec b = action_consumption(req, cand.action);
    double reward = action_reward(req, cand.action);
    if (const auto* lp = std::get_if<LpRequest>(&req); lp != nullptr) {
      double frac = 1.0;
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] > 0.0) frac = std::min(frac, remaining[j] / b[j]);
      frac = std::clamp(frac, 0.0, 1.0);
      if (frac <= 0.0) continue;
      value += frac * reward;
      for (std::size_t j = 0; j < b.size(); ++j)
        remaining[j] = std::max(0.0, remaining[j] - frac * b[j]);
    } else {
      // auctions are win/lose; take only if the payment fits
      bool fits = true;
      for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] > remaining[j]) fits = false;
      if (!fits) continue;
      value += reward;
      for (std::size_t j = 0; j < b.size(); ++j) remaining[j] -= b[j];
    }
  }
  return value;
}

DualCertificate dual_bound(std::span<const Request> requests,
                           const Vec& budget, double tol_rel, int max_sweeps) {
  if (!(tol_rel > 0.0)) throw InvalidParamsError("tolerance must be > 0");
  const std::size_t m = budget.size();
  DualCertificate cert;
  cert.mu.assign(m, 0.0);

  // Coordinate bracket: beyond the largest reward of any request consuming
  // resource j, the dual function increases in mu_j.
  Vec hi(m, 0.0);
  for (const Request& req : requests) {
    if (const auto* lp = std::get_if<LpRequest>(&req)) {
      for (int i = 0; i < lp->cols; ++i)
        for (int j = 0; j < lp->rows; ++j)
          if (lp->c(j, i) > 0.0)
            hi[j] = std::max(hi[j], lp->reward[i] / lp->c(j, i));
    } else {
      const auto& au = std::get<AuctionRequest>(req);
      if (au.competing_bid > 0.0)
        hi[0] = std::max(hi[0], au.value / au.competing_bid);
    }
  }

  long evals = 0;
  auto eval = [&](const Vec& mu) {
    ++evals;
    return dual_value(mu, requests, budget);
  };

  Vec mu(m, 0.0);
  double upper = eval(mu);
  cert.mu = mu;
  cert.upper = upper;
  double lower = greedy_primal_value(requests, budget, mu);

  // Phase 1: projected subgradient with Polyak steps against the best
  // feasible value found so far.
  const int sub_iters = 40 + 10 * static_cast<int>(m);
  Vec point = mu;
  for (int k = 0; k < sub_iters; ++k) {
    Vec sub = budget;
    for (const Request& req : requests) {
      PrimalAction a;
      best_adjusted(req, point, &a);
      Vec b = action_consumption(req, a);
      for (std::size_t j = 0; j < m; ++j) sub[j] -= b[j];
    }
    double norm_sq = dot(sub, sub);
    double d = eval(point);
    if (d < cert.upper) {
      cert.upper = d;
      cert.mu = point;
    }
    if (norm_sq <= 0.0) break;
    if (k % 8 == 0)
      lower = std::max(lower, greedy_primal_value(requests, budget, point));
    double step = (d - lower) / norm_sq;
    if (!(step > 0.0)) break;
    for (std::size_t j = 0; j < m; ++j)
      point[j] = std::max(0.0, point[j] - step * sub[j]);
  }

  // Phase 2: cyclic per-coordinate golden-section refinement.
  Vec probe = cert.mu;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double before = cert.upper;
    for (std::size_t j = 0; j < m; ++j) {
      double xtol = 1e-8 * (1.0 + hi[j]);
      auto line = [&](double x) {
        Vec q = probe;
        q[j] = x;
        return eval(q);
      };
      GoldenResult g = golden_min(line, 0.0, hi[j] + 1e-12, xtol);
      probe[j] = g.x;
      if (g.value < cert.upper) {
        cert.upper = g.value;
        cert.mu = probe;
      }
    }
    lower = std::max(lower, greedy_primal_value(requests, budget, probe));
    double gap = cert.upper - lower;
    if (gap <= tol_rel * std::max(std::abs(cert.upper), 1e-300) ||
        before - cert.upper <= 0.25 * tol_rel * std::abs(cert.upper) + 1e-15)
      break;
  }

  lower = std::max(lower, greedy_primal_value(requests, budget, cert.mu));
  cert.lower = std::min(lower, cert.upper);  // guards rounding inversions
  cert.gap = cert.upper - cert.lower;
  cert.converged =
      cert.gap <= tol_rel * std::max(std::abs(cert.upper), 1e-300);
  cert.evals = evals;
  return cert;
}

double exact_opt_enumerated(std::span<const Request> requests,
                            const Vec& budget, int resolution) {
  const int T = static_cast<int>(requests.size());
  if (T == 0) return 0.0;
  for (const Request& req : requests)
    if (!std::holds_alternative<LpRequest>(req))
      throw InvalidParamsError("enumeration oracle covers LP requests only");
  const auto& first = std::get<LpRequest>(requests[0]);
  const int m = first.rows, d = first.cols;

  // Simplex grid at steps of 1/res; includes all vertices for any res >= 1.
  auto grid_size = [&](int res) {
    // number of compositions k_1 + ... + k_d <= res
    double n = 1.0;
    for (int i = 1; i <= d; ++i) n = n * (res + i) / i;
    return n;
  };
  int res = resolution;
  while (res > 1 && std::pow(grid_size(res), T) > 5e7) --res;

  std::vector<Vec> points;  // grid points of the simplex
  Vec work(d, 0.0);
  auto emit = [&](auto&& self, int coord, int left) -> void {
    if (coord == d) {
      points.push_back(work);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      work[coord] = static_cast<double>(k) / res;
      self(self, coord + 1, left - k);
    }
    work[coord] = 0.0;
  };
  emit(emit, 0, res);

  // Per-request reward and consumption of every grid point.
  struct Option {
    double reward;
    Vec consumption;
  };
  std::vector<std::vector<Option>> options(T);
  for (int t = 0; t < T; ++t) {
    const auto& lp = std::get<LpRequest>(requests[t]);
    options[t].reserve(points.size());
    for (const Vec& x : points) {
      Option opt;
      opt.reward = dot(lp.reward, x);
      opt.consumption.assign(m, 0.0);
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < d; ++i)
          opt.consumption[j] += lp.c(j, i) * x[i];
      options[t].push_back(std::move(opt));
    }
  }

  double best = 0.0;
  // Per-depth cumulative consumption. An add-then-undo running total would
  // accumulate rounding drift across subtrees and poison the feasibility
  // slack; rebuilding each level from its parent keeps the error at T adds.
  std::vector<Vec> used(T + 1, Vec(m, 0.0));
  auto dfs = [&](auto&& self, int t, double reward) -> void {
    if (t == T) {
      best = std::max(best, reward);
      return;
    }
    for (const Option& opt : options[t]) {
      bool fits = true;
      for (int j = 0; j < m; ++j) {
        used[t + 1][j] = used[t][j] + opt.consumption[j];
        if (used[t + 1][j] > budget[j] + 1e-12) fits = false;
      }
      if (!fits) continue;
      self(self, t + 1, reward + opt.reward);
    }
  };
  dfs(dfs, 0, 0.0);
  return best;
}

}  // namespace paceforge
