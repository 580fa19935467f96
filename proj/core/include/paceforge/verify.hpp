#ifndef PACEFORGE_VERIFY_HPP
#define PACEFORGE_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace paceforge {

// One verified property: pass iff deviation <= threshold.
struct PropertyResult {
  std::string name;
  double deviation = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::uint64_t seed = 2024;
  unsigned threads = 0;
  int grid_horizon = 200;       // closed-form vs brute-force horizon
  int decomposition_runs = 50;  // decomposition-identity sample size
  int ceiling_trials = 100;     // trials per controller kind
  int ceiling_horizon = 250;
  int bound_problems = 50;      // regret-bound suite size
};

// Building blocks, exposed so the acceptance suite can reuse them.

// Closed-form inverse sequences vs forward substitution over a dense
// real-roots parameter grid covering all four controller kinds.
struct ClosedFormCheck {
  int combos = 0;
  double max_deviation = 0.0;
};
ClosedFormCheck check_closed_forms(int horizon);

// Max relative mismatch of the regret decomposition identity over random
// (gradients, trajectory, weights) triples.
double check_decomposition(int runs, int horizon, int m, std::uint64_t seed);

// Max absolute mismatch between the incremental filter and the direct
// convolution over random gradient histories and parameters.
double check_filter_convolution(int runs, int horizon, int m,
                                std::uint64_t seed);

// Random LP trials for each controller kind (zero-initialized filter,
// eta = T^{-1/2}, real roots, alpha_D < 1): iterate ceiling excess,
// stability margins, exact budget feasibility.
struct CeilingCheck {
  double max_excess = 0.0;   // max over trials of mu_peak - mu_max
  double min_margin = 0.0;   // min stability-inequality slack
  long steps = 0;            // total simulated steps
  bool budget_ok = true;     // consumption <= budget, exact comparison
  int trials = 0;
};
CeilingCheck check_iterate_ceiling(int trials_per_kind, int horizon,
                                   std::uint64_t seed, unsigned threads = 0);

// Measured regret vs the four-term bound over a random OCO suite of linear
// and piecewise-linear problems under P/PD/PI/real-root-PID controllers.
struct BoundSuiteCheck {
  double min_slack = 0.0;
  double min_margin = 0.0;
  double max_decomposition_dev = 0.0;
  int problems = 0;
  int skipped = 0;  // configurations where the bound does not apply
};
BoundSuiteCheck check_bound_suite(int problems, std::uint64_t seed,
                                  unsigned threads = 0);

// Named suites behind the `verify` CLI subcommand.
std::vector<PropertyResult> verify_weights(const VerifyOptions& opt = {});
std::vector<PropertyResult> verify_lemmas(const VerifyOptions& opt = {});
std::vector<PropertyResult> verify_regret(const VerifyOptions& opt = {});
std::vector<PropertyResult> verify_all(const VerifyOptions& opt = {});

}  // namespace paceforge

#endif
