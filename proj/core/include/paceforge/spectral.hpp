#ifndef PACEFORGE_SPECTRAL_HPP
#define PACEFORGE_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "paceforge/pid_mapping.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// First column q_0..q_{T-1} of the inverse of the lower-triangular Toeplitz
// weight matrix, plus the suffix sums a_t = q_0 + ... + q_{T-t} (stored as
// a[t-1] for t = 1..T) that drive the regret bound.
struct InverseSequence {
  std::vector<double> q;
  std::vector<double> a;
  int horizon() const { return static_cast<int>(q.size()); }
};

enum class ControllerKind { P, PD, PI, PID };

// Characteristic quadratic a z^2 - b z + c of the filter's transfer
// function, with a = alpha_d beta, b = alpha_d + beta (1 - alpha_i),
// c = 1 - alpha_i beta. Real roots correspond to the overdamped regime in
// which the inverse sequence does not oscillate.
struct RootClassification {
  double a = 0.0, b = 0.0, c = 1.0;
  std::complex<double> z_plus, z_minus;
  bool real_roots = true;
  bool degenerate = false;  // a == 0: quadratic collapses to a linear factor
};

// Brute-force inverse by forward substitution on R q = e_1. O(T^2). This is
// the authoritative q-source; closed forms below are diagnostics checked
// against it.
InverseSequence toeplitz_inverse(const WeightSequence& weights);

// Closed-form inverse sequences per controller kind.
//   P:   q = (1, 0, ...)
//   PD:  q_t = alpha_d^t
//   PI:  q_0 = 1/lambda_0, q_t = -(beta - w) w^{t-1} / lambda_0 with
//        w = (1 - alpha_i) beta / lambda_0. (The 1/lambda_0 factor is
//        required to match the Toeplitz inverse; see tests.)
//   PID: linear recurrence c q_k = b q_{k-1} - a q_{k-2} obtained from the
//        rational transfer function (1 - beta z)/(a z^2 - b z + c); equals
//        the root-power partial-fraction expansion in both the distinct and
//        repeated root cases while staying stable near coincident roots.
// The kind must match the zero pattern of the alphas; PID requires real
// roots and otherwise throws RealRootsViolatedError.
InverseSequence q_closed_form(ControllerKind kind, const CanonicalParams& p,
                              int horizon);

RootClassification classify_roots(const CanonicalParams& p);

// Bound on sum_i |q_i| valid under the real-roots condition (PID kind).
double q_abs_sum_bound(const CanonicalParams& p);

// Evaluates the four-term regret bound
//   eta G2^2/(2 sigma) sum_t a_t + a_1 V1 / eta
//   + (Vmax/eta) sum_{s>=2} (a_s - a_{s-1})^+
//   + sqrt(2) G1 G2 (eta/sigma) sum_j sum_{k<=j} k |a_j lambda_k|.
// Requires a_t >= 0 (throws HypothesisViolatedError otherwise).
double regret_bound(const InverseSequence& inv, const WeightSequence& weights,
                    double eta, double sigma, double g1, double g2, double v1,
                    double vmax);

// Both sides of the regret decomposition identity
//   sum_t g_t'(mu_t - mu) = sum_t a_t z_t'(mu_t - mu)
//                           - sum_s sum_{t>s} b_{t,s} g_s'(mu_t - mu_{t-1})
// with b_{t,s} = sum_{j=t}^T a_j lambda_{j-s}, computed streaming in O(T^2 m)
// without materializing b.
struct DecompositionSides {
  double lhs = 0.0;
  double rhs = 0.0;
};
DecompositionSides regret_decomposition(const WeightSequence& weights,
                                        const InverseSequence& inv,
                                        const std::vector<Vec>& grads,
                                        const std::vector<Vec>& zs,
                                        const std::vector<Vec>& mus,
                                        const Vec& comparator);

}  // namespace paceforge

#endif
