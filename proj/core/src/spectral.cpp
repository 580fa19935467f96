#include "paceforge/spectral.hpp"

#include <cmath>
#include <numbers>

#include "paceforge/errors.hpp"

namespace paceforge {
namespace {

constexpr double kDiscriminantTol = 1e-12;

void fill_suffix_sums(InverseSequence& inv) {
  const int T = inv.horizon();
  // a_t = q_0 + ... + q_{T-t}; running prefix sums of q, reversed.
  std::vector<double> prefix(T);
  double s = 0.0;
  for (int i = 0; i < T; ++i) {
    s += inv.q[i];
    prefix[i] = s;
  }
  inv.a.resize(T);
  for (int t = 1; t <= T; ++t) inv.a[t - 1] = prefix[T - t];
}

}  // namespace

InverseSequence toeplitz_inverse(const WeightSequence& weights) {
  const int T = weights.horizon();
  if (T < 1) throw InvalidParamsError("empty weight sequence");
  const auto& lam = weights.lambda;
  if (lam[0] == 0.0)
    throw SingularFilterError("lambda_0 = 0: weight matrix is singular");

  InverseSequence inv;
  inv.q.resize(T);
  inv.q[0] = 1.0 / lam[0];
  for (int k = 1; k < T; ++k) {
    double s = 0.0;
    for (int i = 1; i <= k; ++i) s += lam[i] * inv.q[k - i];
    inv.q[k] = -s / lam[0];
  }
  fill_suffix_sums(inv);
  return inv;
}

RootClassification classify_roots(const CanonicalParams& p) {
  validate(p);
  RootClassification rc;
  rc.a = p.alpha_d * p.beta;
  rc.b = p.alpha_d + p.beta * (1.0 - p.alpha_i);
  rc.c = 1.0 - p.alpha_i * p.beta;
  if (rc.a == 0.0) {
    rc.degenerate = true;
    rc.real_roots = true;
    double nan = std::nan("");
    double root = rc.b != 0.0 ? rc.c / rc.b : nan;
    rc.z_plus = rc.z_minus = root;
    return rc;
  }
  double disc = rc.b * rc.b - 4.0 * rc.a * rc.c;
  rc.real_roots = disc >= -kDiscriminantTol;
  if (disc >= 0.0) {
    double r = std::sqrt(disc);
    rc.z_plus = (rc.b + r) / (2.0 * rc.a);
    rc.z_minus = (rc.b - r) / (2.0 * rc.a);
  } else {
    double r = std::sqrt(-disc);
    rc.z_plus = std::complex<double>(rc.b, r) / (2.0 * rc.a);
    rc.z_minus = std::complex<double>(rc.b, -r) / (2.0 * rc.a);
  }
  return rc;
}

InverseSequence q_closed_form(ControllerKind kind, const CanonicalParams& p,
                              int horizon) {
  validate(p);
  if (horizon < 1) throw InvalidParamsError("horizon must be >= 1");
  const bool has_i = p.alpha_i > 0.0;
  const bool has_d = p.alpha_d > 0.0;
  switch (kind) {
    case ControllerKind::P:
      if (has_i || has_d)
        throw InvalidParamsError("P kind needs alpha_i = alpha_d = 0");
      break;
    case ControllerKind::PD:
      if (has_i || !has_d)
        throw InvalidParamsError("PD kind needs alpha_i = 0, alpha_d > 0");
      break;
    case ControllerKind::PI:
      if (!has_i || has_d)
        throw InvalidParamsError("PI kind needs alpha_i > 0, alpha_d = 0");
      break;
    case ControllerKind::PID:
      if (!has_i || !has_d)
        throw InvalidParamsError("PID kind needs alpha_i > 0, alpha_d > 0");
      break;
  }

  InverseSequence inv;
  inv.q.assign(horizon, 0.0);
  switch (kind) {
    case ControllerKind::P: {
      inv.q[0] = 1.0;
      break;
    }
    case ControllerKind::PD: {
      double pw = 1.0;
      for (int t = 0; t < horizon; ++t) {
        inv.q[t] = pw;
        pw *= p.alpha_d;
      }
      break;
    }
    case ControllerKind::PI: {
      double lam0 = 1.0 - p.alpha_i * p.beta;
      double omega = (1.0 - p.alpha_i) * p.beta / lam0;
      inv.q[0] = 1.0 / lam0;
      double pw = 1.0;
      for (int t = 1; t < horizon; ++t) {
        inv.q[t] = -(p.beta - omega) * pw / lam0;
        pw *= omega;
      }
      break;
    }
    case ControllerKind::PID: {
      RootClassification rc = classify_roots(p);
      if (!rc.real_roots)
        throw RealRootsViolatedError(
            "complex characteristic roots: no closed form, use "
            "toeplitz_inverse");
      // c q_k = b q_{k-1} - a q_{k-2}, seeded by the 1 - beta z numerator.
      inv.q[0] = 1.0 / rc.c;
      if (horizon > 1) inv.q[1] = (rc.b / rc.c - p.beta) / rc.c;
      for (int k = 2; k < horizon; ++k)
        inv.q[k] = (rc.b * inv.q[k - 1] - rc.a * inv.q[k - 2]) / rc.c;
      break;
    }
  }
  fill_suffix_sums(inv);
  return inv;
}

double q_abs_sum_bound(const CanonicalParams& p) {
  RootClassification rc = classify_roots(p);
  if (rc.degenerate)
    throw InvalidParamsError("bound defined for PID kind (alpha_d beta > 0)");
  if (!rc.real_roots)
    throw RealRootsViolatedError("bound requires real characteristic roots");
  double zp = rc.z_plus.real();
  double zm = rc.z_minus.real();
  double c = rc.c, a = rc.a, beta = p.beta;
  if (zp - zm < 1e-9 * std::max(1.0, zp)) {
    double d = 1.0 - 1.0 / zp;
    return (1.0 + (1.0 + beta) / (d * d)) / c;
  }
  double d = 1.0 - a * zp / c;
  return 1.0 / c + zp / (c * d * d) + beta * zp / (c * d * d);
}

double regret_bound(const InverseSequence& inv, const WeightSequence& weights,
                    double eta, double sigma, double g1, double g2, double v1,
                    double vmax) {
  const int T = inv.horizon();
  if (weights.horizon() != T)
    throw DimensionError("weights and inverse sequence horizons differ");
  if (!(eta > 0.0) || !(sigma > 0.0))
    throw InvalidParamsError("eta and sigma must be positive");
  double a_sum = 0.0;
  for (int t = 0; t < T; ++t) {
    if (inv.a[t] < -1e-9)
      throw HypothesisViolatedError("a_t >= 0 hypothesis fails");
    a_sum += inv.a[t];
  }
  double increase_sum = 0.0;  // sum of (a_s - a_{s-1})^+
  for (int s = 1; s < T; ++s)
    increase_sum += std::max(0.0, inv.a[s] - inv.a[s - 1]);

  // sum_j |a_j| W_j with W_j = sum_{k=1}^{min(j, T-1)} k |lambda_k|.
  double conv_sum = 0.0;
  double w = 0.0;
  for (int j = 1; j <= T; ++j) {
    if (j <= T - 1) w += j * std::abs(weights.lambda[j]);
    conv_sum += std::abs(inv.a[j - 1]) * w;
  }

  return eta * g2 * g2 / (2.0 * sigma) * a_sum + inv.a[0] * v1 / eta +
         vmax / eta * increase_sum +
         std::numbers::sqrt2 * g1 * g2 * eta / sigma * conv_sum;
}

DecompositionSides regret_decomposition(const WeightSequence& weights,
                                        const InverseSequence& inv,
                                        const std::vector<Vec>& grads,
                                        const std::vector<Vec>& zs,
                                        const std::vector<Vec>& mus,
                                        const Vec& comparator) {
  const int T = static_cast<int>(grads.size());
  if (static_cast<int>(zs.size()) != T || static_cast<int>(mus.size()) != T ||
      inv.horizon() != T || weights.horizon() != T)
    throw DimensionError("decomposition inputs must share the horizon");
  const std::size_t m = comparator.size();

  DecompositionSides sides;
  Vec diff(m);
  for (int t = 0; t < T; ++t) {
    for (std::size_t j = 0; j < m; ++j) diff[j] = mus[t][j] - comparator[j];
    sides.lhs += dot(grads[t], diff);
    sides.rhs += inv.a[t] * dot(zs[t], diff);
  }
  // Streaming b_{t,s} = sum_{j=t}^T a_j lambda_{j-s}, accumulated from t = T
  // downward for each s.
  for (int s = 1; s <= T; ++s) {
    double partial = 0.0;
    for (int t = T; t > s; --t) {
      partial += inv.a[t - 1] * weights.lambda[t - s];
      double inner = 0.0;
      for (std::size_t j = 0; j < m; ++j)
        inner += grads[s - 1][j] * (mus[t - 1][j] - mus[t - 2][j]);
      sides.rhs -= partial * inner;
    }
  }
  return sides;
}

}  // namespace paceforge
