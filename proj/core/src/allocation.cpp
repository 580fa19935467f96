#include "paceforge/allocation.hpp"

#include <cmath>
#include <limits>

#include "paceforge/errors.hpp"

namespace paceforge {

double action_reward(const Request& req, const PrimalAction& action) {
  if (const auto* lp = std::get_if<LpRequest>(&req)) {
    return action.vertex < 0 ? 0.0 : lp->reward[action.vertex];
  }
  const auto& au = std::get<AuctionRequest>(req);
  return action.bid >= au.competing_bid ? au.value - au.competing_bid : 0.0;
}

Vec action_consumption(const Request& req, const PrimalAction& action) {
  if (const auto* lp = std::get_if<LpRequest>(&req)) {
    Vec b(lp->rows, 0.0);
    if (action.vertex >= 0)
      for (int j = 0; j < lp->rows; ++j) b[j] = lp->c(j, action.vertex);
    return b;
  }
  const auto& au = std::get<AuctionRequest>(req);
  return Vec{action.bid >= au.competing_bid ? au.competing_bid : 0.0};
}

PrimalAction primal_decision(const Request& req, const Vec& mu) {
  PrimalAction action;
  if (const auto* lp = std::get_if<LpRequest>(&req)) {
    if (static_cast<int>(mu.size()) != lp->rows)
      throw DimensionError("dual variable does not match resource count");
    double best = 0.0;
    for (int i = 0; i < lp->cols; ++i) {
      double opp = 0.0;
      for (int j = 0; j < lp->rows; ++j) opp += mu[j] * lp->c(j, i);
      double score = lp->reward[i] - opp;
      if (score > best) {  // strict: zero-value vertices stay untaken
        best = score;
        action.vertex = i;
      }
    }
    return action;
  }
  const auto& au = std::get<AuctionRequest>(req);
  if (mu.size() != 1)
    throw DimensionError("auction requests pace a single resource");
  action.bid = au.value / (1.0 + mu[0]);
  return action;
}

double adjusted_value(const Request& req, const PrimalAction& action,
                      const Vec& mu) {
  Vec b = action_consumption(req, action);
  return action_reward(req, action) - dot(mu, b);
}

StepResult step_allocation(const DualState& state, const Request& req,
                           const TrialConfig& cfg) {
  const std::size_t m = state.mu.size();
  StepResult res;
  res.record.intended = primal_decision(req, state.mu);

  Vec intended_b = action_consumption(req, res.record.intended);
  bool fits = true;
  for (std::size_t j = 0; j < m; ++j)
    if (intended_b[j] > state.remaining[j]) fits = false;

  PrimalAction taken = res.record.intended;
  if (!fits) {
    taken = PrimalAction{};  // all-or-nothing gate: fall back to zero action
    res.record.gated = true;
  }
  res.record.reward = action_reward(req, taken);
  res.record.consumption = fits ? intended_b : action_consumption(req, taken);

  res.record.g_ctrl.resize(m);
  res.record.g_sub.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    res.record.g_ctrl[j] = cfg.target[j] - res.record.consumption[j];
    res.record.g_sub[j] = cfg.target[j] - intended_b[j];
  }

  FilterResult filt = filter_gradient(
      state.filter,
      cfg.error_source == ErrorSource::taken_action ? res.record.g_ctrl
                                                    : res.record.g_sub,
      cfg.params);
  res.record.z = filt.z;

  res.state.mu = mirror_step(state.mu, filt.z, cfg.params.eta, cfg.map);
  res.state.filter = std::move(filt.next);
  res.state.step = state.step + 1;
  res.state.remaining.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    // fits guarantees the true difference is >= 0; rounding keeps it so.
    res.state.remaining[j] = state.remaining[j] - res.record.consumption[j];
  }

  res.record.margin = stability_margin(
      state.mu, res.state.mu, res.record.z, cfg.params.eta,
      pair_sigma(cfg.map.sigma, cfg.pair, m), cfg.pair);
  return res;
}

TrialRecord run_trial(std::span<const Request> requests,
                      const TrialConfig& cfg) {
  validate(cfg.params);
  const std::size_t m = cfg.target.size();
  if (cfg.map.dim() != m || cfg.mu1.size() != m)
    throw DimensionError("trial config dimensions disagree");

  const double T = static_cast<double>(requests.size());
  DualState state;
  state.mu = cfg.mu1;
  state.filter = FilterState::zero(m);
  state.remaining.resize(m);
  for (std::size_t j = 0; j < m; ++j) state.remaining[j] = cfg.target[j] * T;

  TrialRecord rec;
  rec.total_consumption.assign(m, 0.0);
  rec.mu_peak = cfg.mu1;
  rec.min_margin = std::numeric_limits<double>::infinity();
  if (cfg.record_trajectory) {
    rec.mu.reserve(requests.size());
    rec.rewards.reserve(requests.size());
  }

  for (const Request& req : requests) {
    StepResult res = step_allocation(state, req, cfg);
    rec.steps += 1;
    rec.total_reward += res.record.reward;
    for (std::size_t j = 0; j < m; ++j) {
      rec.total_consumption[j] += res.record.consumption[j];
      rec.mu_peak[j] = std::max(rec.mu_peak[j], res.state.mu[j]);
    }
    rec.gate_count += res.record.gated ? 1 : 0;
    rec.min_margin = std::min(rec.min_margin, res.record.margin);
    if (cfg.record_trajectory) {
      rec.mu.push_back(state.mu);
      rec.z.push_back(res.record.z);
      rec.g_ctrl.push_back(res.record.g_ctrl);
      rec.g_sub.push_back(res.record.g_sub);
      rec.consumption.push_back(res.record.consumption);
      rec.rewards.push_back(res.record.reward);
      rec.actions.push_back(res.record.intended);
      rec.gated.push_back(res.record.gated ? 1 : 0);
    }
    state = std::move(res.state);
  }
  if (rec.steps == 0) rec.min_margin = 0.0;
  rec.final_mu = state.mu;
  rec.final_remaining = state.remaining;
  return rec;
}

Vec mu_max(MapKind kind, const Vec& rho, double f_bar, double b_bar,
           double eta, double beta, double sigma, double power_q) {
  if (!(beta >= 0.0) || !(beta < 1.0))
    throw InvalidParamsError("beta must lie in [0, 1)");
  if (!(eta >= 0.0)) throw InvalidParamsError("eta must be non-negative");
  Vec out(rho.size());
  for (std::size_t j = 0; j < rho.size(); ++j) {
    double r = rho[j];
    if (!(r > 0.0)) throw InvalidParamsError("per-period budget must be > 0");
    double base = f_bar / r;
    double drift = 4.0 * eta * (b_bar + r) / (1.0 - beta);
    switch (kind) {
      case MapKind::quadratic: {
        if (!(sigma > 0.0)) throw InvalidParamsError("sigma must be > 0");
        out[j] = base + drift / sigma;
        break;
      }
      case MapKind::entropy: {
        // sigma = 1 / mu_max: solve mu = base + drift * mu.
        double denom = 1.0 - drift;
        if (denom <= 0.0)
          throw StepSizeTooLargeError(
              "no finite iterate ceiling; reduce the step-size");
        out[j] = base / denom;
        break;
      }
      case MapKind::power_response: {
        // sigma = q / (1 + mu_max): solve mu = base + drift (1 + mu) / q.
        double k = drift / power_q;
        double denom = 1.0 - k;
        if (denom <= 0.0)
          throw StepSizeTooLargeError(
              "no finite iterate ceiling; reduce the step-size");
        out[j] = (base + k) / denom;
        break;
      }
    }
  }
  return out;
}

}  // namespace paceforge
