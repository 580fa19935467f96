#ifndef PACEFORGE_ALLOCATION_HPP
#define PACEFORGE_ALLOCATION_HPP

#include <span>
#include <vector>

#include "paceforge/cmd_core.hpp"
#include "paceforge/instance_gen.hpp"
#include "paceforge/mirror_map.hpp"
#include "paceforge/pid_mapping.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// LP action: a simplex vertex index, or -1 for the zero action.
// Auction action: the submitted bid.
struct PrimalAction {
  int vertex = -1;
  double bid = 0.0;
};

double action_reward(const Request& req, const PrimalAction& action);
Vec action_consumption(const Request& req, const PrimalAction& action);

// Opportunity-cost-adjusted argmax. LP: picks the vertex maximizing
// r_i - (C'mu)_i when that maximum is strictly positive (ties to the lowest
// index), the zero action otherwise. Auction: bids value / (1 + mu).
PrimalAction primal_decision(const Request& req, const Vec& mu);

// Adjusted value f(x) - mu'b(x) of the decision; >= 0 by construction.
double adjusted_value(const Request& req, const PrimalAction& action,
                      const Vec& mu);

struct DualState {
  Vec mu;
  Vec remaining;  // B_t, never negative
  FilterState filter;
  int step = 1;
};

// Which error feeds the filter. The taken action (the literal controller
// error) and the intended pre-gate action (the dual-function subgradient)
// coincide until a budget gate fires. After a resource dies the taken-action
// error turns positive and the dual price collapses, leaving every request
// that touches the dead resource gated; the subgradient keeps pricing it.
enum class ErrorSource { taken_action, intended_action };

struct TrialConfig {
  CanonicalParams params;
  MirrorMap map;       // box sized to the resource count
  Vec target;          // per-period targets rho_j = B_j / T
  Vec mu1;             // initial dual solution
  NormPair pair = NormPair::linf_l1;
  ErrorSource error_source = ErrorSource::taken_action;
  bool record_trajectory = false;
};

struct StepOutcome {
  PrimalAction intended;   // x-tilde before the budget gate
  bool gated = false;      // consumption of x-tilde exceeded B_t somewhere
  double reward = 0.0;
  Vec consumption;         // b(x_t)
  Vec g_ctrl;              // controller error  B/T - b(x_t)
  Vec g_sub;               // dual subgradient  B/T - b(x-tilde)
  Vec z;
  double margin = 0.0;     // stability-inequality slack of this step
};

struct StepResult {
  DualState state;
  StepOutcome record;
};

// One pass of the controller loop: primal decision, all-or-nothing budget
// gate, budget update, error, filtered dual update.
StepResult step_allocation(const DualState& state, const Request& req,
                           const TrialConfig& cfg);

struct TrialRecord {
  int steps = 0;
  double total_reward = 0.0;
  Vec total_consumption;
  int gate_count = 0;
  double min_margin = 0.0;
  Vec mu_peak;      // componentwise max of mu_t over the run (incl. final)
  Vec final_mu;
  Vec final_remaining;
  // Populated when TrialConfig::record_trajectory is set.
  std::vector<Vec> mu, z, g_ctrl, g_sub, consumption;
  std::vector<double> rewards;
  std::vector<PrimalAction> actions;
  std::vector<char> gated;
};

// Runs the full horizon; deterministic in (requests, config). Budgets start
// at target * T and never go negative.
TrialRecord run_trial(std::span<const Request> requests,
                      const TrialConfig& cfg);

// Ceiling on the dual iterates guaranteed by the bounded-iterates argument:
//   mu_max_j = f_bar / rho_j + 4 eta (b_bar + rho_j) / (sigma (1 - beta)).
// For entropy/power maps sigma itself depends on the ceiling, so the fixed
// point is solved in closed form; throws StepSizeTooLargeError when it has
// no positive solution.
Vec mu_max(MapKind kind, const Vec& rho, double f_bar, double b_bar,
           double eta, double beta, double sigma = 1.0, double power_q = 1.0);

}  // namespace paceforge

#endif
