#ifndef PACEFORGE_PID_MAPPING_HPP
#define PACEFORGE_PID_MAPPING_HPP

#include <vector>

#include "paceforge/mirror_map.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// Raw controller gains as practitioners tune them. The update subtracts
//   K_P g_t + K_I sum_s beta^s g_{t-s} + K_D (g_t - g_{t-1})
// from the link-transformed dual variable.
struct ControllerGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double beta = 0.0;  // exponential-averaging factor, in [0, 1)
};

// Normalized form: a step-size eta and convex term weights
// alpha_p + alpha_i + alpha_d = 1.
struct CanonicalParams {
  double eta = 1.0;
  double alpha_p = 1.0;
  double alpha_i = 0.0;
  double alpha_d = 0.0;
  double beta = 0.0;
};

// Throws InvalidParamsError when the fields are out of range.
void validate(const ControllerGains& g);
void validate(const CanonicalParams& p);

// Convolution weights lambda_0..lambda_{T-1} of the gradient filter:
//   lambda_0 = 1 - alpha_i * beta
//   lambda_1 = -alpha_d + alpha_i (1-beta) beta
//   lambda_i = alpha_i (1-beta) beta^i          for i >= 2
struct WeightSequence {
  std::vector<double> lambda;
  int horizon() const { return static_cast<int>(lambda.size()); }
};

CanonicalParams gains_to_canonical(const ControllerGains& g);
ControllerGains canonical_to_gains(const CanonicalParams& p);
WeightSequence canonical_to_weights(const CanonicalParams& p, int horizon);

// Builds a mirror map from a response-function kind with per-coordinate box
// ceilings. sigma is the smallest coordinate constant. The quadratic map
// accepts infinite ceilings; entropy/power need finite ones.
MirrorMap make_response_map(MapKind kind, const Vec& box_hi,
                            double power_q = 1.0);
MirrorMap make_response_map(MapKind kind, std::size_t m, double box_hi,
                            double power_q = 1.0);

// Change of variables between the multiplicative shading factor nu in (0,1]
// of a power-q bidding rule and the dual variable mu >= 0:
//   mu = nu^{-1/q} - 1,   nu = (1 + mu)^{-q}.
double shading_to_dual(double nu, double q);
double dual_to_shading(double mu, double q);

}  // namespace paceforge

#endif
