#include "paceforge/cmd_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paceforge/errors.hpp"

namespace paceforge {

FilterResult filter_gradient(const FilterState& state, const Vec& grad,
                             const CanonicalParams& params) {
  validate(params);
  const std::size_t m = grad.size();
  if (state.avg.size() != m || state.prev_grad.size() != m)
    throw DimensionError("gradient dimension does not match filter state");

  FilterResult out;
  out.z.resize(m);
  out.next.avg.resize(m);
  out.next.prev_grad = grad;
  out.next.step = state.step + 1;
  for (std::size_t j = 0; j < m; ++j) {
    double e = params.beta * state.avg[j] + (1.0 - params.beta) * grad[j];
    out.next.avg[j] = e;
    out.z[j] = params.alpha_p * grad[j] + params.alpha_i * e +
               params.alpha_d * (grad[j] - state.prev_grad[j]);
  }
  return out;
}

std::vector<Vec> convolve_gradients(const WeightSequence& weights,
                                    const std::vector<Vec>& grads) {
  const int T = static_cast<int>(grads.size());
  std::vector<Vec> zs(T);
  for (int t = 0; t < T; ++t) {
    const std::size_t m = grads[t].size();
    Vec z(m, 0.0);
    for (int s = 0; s <= t; ++s) {
      double w = weights.lambda[t - s];
      for (std::size_t j = 0; j < m; ++j) z[j] += w * grads[s][j];
    }
    zs[t] = std::move(z);
  }
  return zs;
}

Vec mirror_step(const Vec& mu, const Vec& z, double eta,
                const MirrorMap& map) {
  const std::size_t m = mu.size();
  if (z.size() != m || map.dim() != m)
    throw DimensionError("mirror step dimension mismatch");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw NumericError("step-size must be finite and non-negative");

  Vec next(m);
  for (std::size_t j = 0; j < m; ++j) {
    if (!std::isfinite(mu[j]) || !std::isfinite(z[j]))
      throw NumericError("non-finite input to mirror step");
    double v = map.link_inv(map.link(mu[j]) - eta * z[j]);
    // link_inv can produce NaN only from NaN input; +-inf saturates into the
    // clamp below (entropy exp overflow hits hi, underflow hits the floor).
    if (std::isnan(v)) v = map.lo[j];
    double lo = map.lo[j];
    if (map.kind == MapKind::entropy && lo <= 0.0) lo = 1e-300;
    next[j] = std::clamp(v, lo, map.hi[j]);
  }
  return next;
}

double bregman(const MirrorMap& map, const Vec& x, const Vec& y) {
  const std::size_t m = map.dim();
  if (x.size() != m || y.size() != m)
    throw DimensionError("bregman dimension mismatch");
  if (!map.in_box(x, 1e-12) || !map.in_box(y, 1e-12))
    throw DomainError("bregman arguments must lie in the feasible box");
  double v = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (x[j] == y[j]) continue;  // avoids 0 * inf at an entropy boundary
    v += map.potential(x[j]) - map.potential(y[j]) -
         map.link(y[j]) * (x[j] - y[j]);
  }
  return v;
}

double stability_margin(const Vec& mu_t, const Vec& mu_next, const Vec& z,
                        double eta, double sigma, NormPair pair) {
  Vec diff(mu_t.size());
  for (std::size_t j = 0; j < mu_t.size(); ++j)
    diff[j] = mu_next[j] - mu_t[j];
  return std::numbers::sqrt2 / sigma * eta * primal_norm(pair, z) -
         dual_norm(pair, diff);
}

}  // namespace paceforge
