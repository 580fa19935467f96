#ifndef PACEFORGE_OFFLINE_ORACLE_HPP
#define PACEFORGE_OFFLINE_ORACLE_HPP

#include <span>

#include "paceforge/instance_gen.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// Two-sided benchmark certificate: upper is a dual value (valid bound on the
// offline optimum by weak duality, regardless of convergence), lower the
// value of a constructed feasible solution.
struct DualCertificate {
  Vec mu;
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;       // upper - lower >= 0
  bool converged = false; // gap <= tol * |upper|
  long evals = 0;         // dual-function evaluations spent
};

// Lagrangian dual function
//   D(mu) = sum_t sup_x { f_t(x) - mu' b_t(x) } + B' mu,
// convex piecewise-linear in mu; an upper bound on the offline optimum for
// every mu >= 0.
double dual_value(const Vec& mu, std::span<const Request> requests,
                  const Vec& budget);

// Feasible value obtained by allocating requests in decreasing
// adjusted-reward order at mu (fractionally once a budget nearly binds).
double greedy_primal_value(std::span<const Request> requests,
                           const Vec& budget, const Vec& mu);

// Minimizes D over mu >= 0: Polyak-stepped projected subgradient warm start,
// then per-coordinate golden-section refinement on the piecewise-linear
// restriction. The returned upper bound is always valid; `converged` only
// reports whether the requested relative gap was certified.
DualCertificate dual_bound(std::span<const Request> requests,
                           const Vec& budget, double tol_rel = 1e-4,
                           int max_sweeps = 30);

// Enumeration benchmark for tiny LP instances: every request chooses from a
// simplex grid (resolution 1/res, automatically coarsened so the cross
// product stays tractable; vertices are always grid points) and the best
// feasible assignment is returned. A lower bound on the true optimum that is
// exact whenever the optimum lies on the grid.
double exact_opt_enumerated(std::span<const Request> requests,
                            const Vec& budget, int resolution = 50);

}  // namespace paceforge

#endif
