#include "paceforge/pid_mapping.hpp"

#include <cmath>
#include <limits>

#include "paceforge/errors.hpp"

namespace paceforge {

void validate(const ControllerGains& g) {
  if (!(g.kp >= 0.0) || !(g.ki >= 0.0) || !(g.kd >= 0.0))
    throw InvalidParamsError("gains must be non-negative");
  if (!(g.beta >= 0.0) || !(g.beta < 1.0))
    throw InvalidParamsError("beta must lie in [0, 1)");
  if (g.kp + g.ki + g.kd <= 0.0)
    throw InvalidParamsError("at least one gain must be positive");
}

void validate(const CanonicalParams& p) {
  if (!(p.eta > 0.0)) throw InvalidParamsError("eta must be positive");
  if (!(p.alpha_p >= 0.0) || !(p.alpha_i >= 0.0) || !(p.alpha_d >= 0.0))
    throw InvalidParamsError("term weights must be non-negative");
  if (!(p.beta >= 0.0) || !(p.beta < 1.0))
    throw InvalidParamsError("beta must lie in [0, 1)");
  if (std::abs(p.alpha_p + p.alpha_i + p.alpha_d - 1.0) > 1e-12)
    throw InvalidParamsError("term weights must sum to 1");
}

CanonicalParams gains_to_canonical(const ControllerGains& g) {
  validate(g);
  double eta = g.kp + g.ki / (1.0 - g.beta) + g.kd;
  CanonicalParams p;
  p.eta = eta;
  p.alpha_p = g.kp / eta;
  p.alpha_i = g.ki / (eta * (1.0 - g.beta));
  p.alpha_d = g.kd / eta;
  p.beta = g.beta;
  return p;
}

ControllerGains canonical_to_gains(const CanonicalParams& p) {
  validate(p);
  ControllerGains g;
  g.kp = p.eta * p.alpha_p;
  g.ki = p.eta * p.alpha_i * (1.0 - p.beta);
  g.kd = p.eta * p.alpha_d;
  g.beta = p.beta;
  return g;
}

WeightSequence canonical_to_weights(const CanonicalParams& p, int horizon) {
  validate(p);
  if (horizon < 1) throw InvalidParamsError("horizon must be >= 1");
  WeightSequence w;
  w.lambda.resize(horizon);
  w.lambda[0] = 1.0 - p.alpha_i * p.beta;
  if (horizon > 1)
    w.lambda[1] = -p.alpha_d + p.alpha_i * (1.0 - p.beta) * p.beta;
  double tail = p.alpha_i * (1.0 - p.beta) * p.beta;
  for (int i = 2; i < horizon; ++i) {
    tail *= p.beta;
    w.lambda[i] = tail;
  }
  return w;
}

MirrorMap make_response_map(MapKind kind, const Vec& box_hi, double power_q) {
  if (kind == MapKind::power_response && power_q < 1.0)
    throw InvalidParamsError("power response requires q >= 1");
  MirrorMap map;
  map.kind = kind;
  map.power_q = power_q;
  map.lo.assign(box_hi.size(), 0.0);
  map.hi = box_hi;
  double sigma = std::numeric_limits<double>::infinity();
  for (double hi : box_hi) {
    double s;
    switch (kind) {
      case MapKind::quadratic:
        s = 1.0;
        break;
      case MapKind::entropy:
        if (!std::isfinite(hi))
          throw InvalidParamsError("entropy map needs a finite box ceiling");
        s = 1.0 / hi;
        break;
      case MapKind::power_response:
        if (!std::isfinite(hi))
          throw InvalidParamsError("power map needs a finite box ceiling");
        s = power_q / (1.0 + hi);
        break;
      default:
        s = 1.0;
    }
    sigma = std::min(sigma, s);
  }
  map.sigma = box_hi.empty() ? 1.0 : sigma;
  if (kind == MapKind::quadratic) map.sigma = 1.0;
  return map;
}

MirrorMap make_response_map(MapKind kind, std::size_t m, double box_hi,
                            double power_q) {
  return make_response_map(kind, Vec(m, box_hi), power_q);
}

double shading_to_dual(double nu, double q) {
  if (!(nu > 0.0) || !(nu <= 1.0))
    throw DomainError("shading factor must lie in (0, 1]");
  if (q < 1.0) throw InvalidParamsError("power must satisfy q >= 1");
  return std::pow(nu, -1.0 / q) - 1.0;
}

double dual_to_shading(double mu, double q) {
  if (!(mu >= 0.0)) throw DomainError("dual variable must be non-negative");
  if (q < 1.0) throw InvalidParamsError("power must satisfy q >= 1");
  return std::pow(1.0 + mu, -q);
}

}  // namespace paceforge
