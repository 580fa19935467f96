#ifndef PACEFORGE_OCO_HPP
#define PACEFORGE_OCO_HPP

#include <functional>
#include <string>
#include <vector>

#include "paceforge/cmd_core.hpp"
#include "paceforge/mirror_map.hpp"
#include "paceforge/pid_mapping.hpp"
#include "paceforge/rng.hpp"
#include "paceforge/spectral.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// One convex loss: value and one subgradient at a query point. Functions may
// close over external state (e.g. the history of play).
struct OcoFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> subgradient;
};

struct OcoProblem {
  Vec lo, hi;  // feasible box
  std::vector<OcoFunction> fns;
  std::vector<Vec> comparators;
  int horizon() const { return static_cast<int>(fns.size()); }
};

// Worst violation of the subgradient inequality
//   w(nu) >= w(mu) + g'(nu - mu)
// over `samples` random (mu, nu) pairs per function. Setup-time sanity
// check; values above 1e-9 indicate a broken oracle.
double subgradient_violation(const OcoProblem& problem, Rng& rng,
                             int samples = 20);

struct OcoRun {
  std::vector<Vec> mu;  // played iterates mu_1..mu_T
  std::vector<Vec> grads, zs;
  std::vector<double> losses;    // w_t(mu_t)
  double min_margin = 0.0;       // stability-inequality slack over the run
  double max_grad_norm = 0.0;    // primal norms, measured post hoc
  double max_z_norm = 0.0;
  std::vector<double> regrets;   // one per comparator
};

OcoRun run_oco(const OcoProblem& problem, const CanonicalParams& params,
               const MirrorMap& map, const Vec& mu1,
               NormPair pair = NormPair::l2_l2);

// Measured regret against the four-term bound, per comparator. When the
// inverse sequence has negative suffix sums (complex-root regime) the bound
// does not apply and the report says so instead of failing.
struct BoundReport {
  bool applicable = true;
  std::string reason;
  double g1 = 0.0, g2 = 0.0;
  std::vector<double> regret, bound, slack;
  double min_slack = 0.0;
  OcoRun run;
};

BoundReport verify_regret_bound(const OcoProblem& problem,
                                const CanonicalParams& params,
                                const MirrorMap& map, const Vec& mu1,
                                NormPair pair = NormPair::l2_l2,
                                double g1_hint = 0.0, double g2_hint = 0.0);

// Box corners plus a uniform grid (11 levels per axis over the first
// min(m, 3) coordinates).
std::vector<Vec> default_comparators(const Vec& lo, const Vec& hi);

// Problem builders for the verification suites.
OcoProblem make_linear_problem(int horizon, int m, Rng& rng,
                               double box_hi = 1.0);
OcoProblem make_piecewise_problem(int horizon, int m, Rng& rng, int pieces = 4,
                                  double box_hi = 1.0);
OcoProblem make_alternating_problem(int horizon);
OcoProblem make_quadratic_target_problem(int horizon, const Vec& center,
                                         double box_hi);

// Mean regret (vs the best comparator) of the plain proportional controller
// with eta = T^{-1/2} on i.i.d. linear problems; one point of the scaling
// curve.
double stochastic_linear_regret(int horizon, int m, int problems,
                                std::uint64_t seed);

// Least-squares slope of log regret vs log T over the given horizons.
double regret_scaling_slope(const std::vector<int>& horizons, int m,
                            int problems, std::uint64_t seed,
                            std::vector<double>* regrets_out = nullptr);

}  // namespace paceforge

#endif
