#ifndef PACEFORGE_MIRROR_MAP_HPP
#define PACEFORGE_MIRROR_MAP_HPP

#include <limits>

#include "paceforge/vec.hpp"

namespace paceforge {

// Reference-function families. Each is separable with identical coordinate
// pieces; the feasible box may differ per coordinate.
//   quadratic:      h(x) = x^2/2,              link(x) = x
//   entropy:        h(x) = x log x - x,        link(x) = log x
//   power_response: h from link(x) = q log(1+x) - 1 (multiplicative pacing
//                   with a power-q shading rule)
enum class MapKind { quadratic, entropy, power_response };

struct MirrorMap {
  MapKind kind = MapKind::quadratic;
  double power_q = 1.0;  // only for power_response
  Vec lo, hi;            // feasible box, one entry per coordinate
  // Strong-convexity constant of each univariate coordinate piece on its
  // box (quadratic: 1; entropy: 1/hi; power: q/(1+hi), minimized over j).
  double sigma = 1.0;

  double link(double x) const;
  double link_inv(double y) const;
  // Antiderivative of link. Closed form for quadratic/entropy; adaptive
  // quadrature of link for power_response, abs tolerance 1e-10.
  double potential(double x) const;

  std::size_t dim() const { return lo.size(); }
  bool in_box(std::span<const double> x, double tol = 0.0) const;
};

}  // namespace paceforge

#endif
