#ifndef PACEFORGE_CMD_CORE_HPP
#define PACEFORGE_CMD_CORE_HPP

#include "paceforge/mirror_map.hpp"
#include "paceforge/pid_mapping.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// Recurrent state of the gradient filter. Zero initial state is required for
// the bounded-iterates guarantee (the first filtered gradient must vanish
// when g_1 does); warm starts void that box.
struct FilterState {
  Vec avg;        // exponential average e_t
  Vec prev_grad;  // g_{t-1}
  int step = 1;

  static FilterState zero(std::size_t m) {
    return FilterState{Vec(m, 0.0), Vec(m, 0.0), 1};
  }
};

struct FilterResult {
  Vec z;
  FilterState next;
};

// One incremental step of the convolution filter:
//   e_t = beta e_{t-1} + (1-beta) g_t
//   z_t = alpha_p g_t + alpha_i e_t + alpha_d (g_t - g_{t-1})
// which equals sum_{s<=t} lambda_{t-s} g_s for the canonical weights.
// O(m) per call.
FilterResult filter_gradient(const FilterState& state, const Vec& grad,
                             const CanonicalParams& params);

// Direct convolution z_t = sum_{s<=t} lambda_{t-s} g_s for a whole gradient
// history; the O(T^2 m) reference route for the incremental filter.
std::vector<Vec> convolve_gradients(const WeightSequence& weights,
                                    const std::vector<Vec>& grads);

// Mirror-descent step with box projection:
//   mu'_j = clamp(link_inv(link(mu_j) - eta z_j), lo_j, hi_j).
// For separable maps the coordinate-wise clamp is the exact Bregman
// projection onto the box. Entropy maps floor at 1e-300 so the iterate
// stays multiplicatively reachable.
Vec mirror_step(const Vec& mu, const Vec& z, double eta, const MirrorMap& map);

// Bregman divergence V_h(x, y) = h(x) - h(y) - <grad h(y), x - y> >= 0.
double bregman(const MirrorMap& map, const Vec& x, const Vec& y);

// Slack of the per-step stability inequality
//   ||mu_{t+1} - mu_t||_dual <= (sqrt(2)/sigma) eta ||z_t||_primal.
// Non-negative on every valid trajectory; sigma must be the
// strong-convexity constant w.r.t. the chosen dual norm (see pair_sigma).
double stability_margin(const Vec& mu_t, const Vec& mu_next, const Vec& z,
                        double eta, double sigma, NormPair pair);

}  // namespace paceforge

#endif
