#include "paceforge/mirror_map.hpp"

#include <cmath>

namespace paceforge {
namespace {

// Adaptive Simpson quadrature of f on [a, b].
inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(a, m, fa, flm, fm);
  double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  double whole = simpson(a, b, fa, fm, fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double MirrorMap::link(double x) const {
  switch (kind) {
    case MapKind::quadratic:
      return x;
    case MapKind::entropy:
      return std::log(x);
    case MapKind::power_response:
      return power_q * std::log1p(x) - 1.0;
  }
  return x;
}

double MirrorMap::link_inv(double y) const {
  switch (kind) {
    case MapKind::quadratic:
      return y;
    case MapKind::entropy:
      return std::exp(y);
    case MapKind::power_response:
      return std::expm1((y + 1.0) / power_q);
  }
  return y;
}

double MirrorMap::potential(double x) const {
  switch (kind) {
    case MapKind::quadratic:
      return 0.5 * x * x;
    case MapKind::entropy:
      return x > 0.0 ? x * std::log(x) - x : 0.0;
    case MapKind::power_response:
      return integrate([this](double s) { return link(s); }, 0.0, x, 1e-10);
  }
  return 0.0;
}

bool MirrorMap::in_box(std::span<const double> x, double tol) const {
  if (x.size() != lo.size()) return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < lo[j] - tol || x[j] > hi[j] + tol) return false;
  return true;
}

}  // namespace paceforge
