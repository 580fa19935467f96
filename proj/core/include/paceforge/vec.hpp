#ifndef PACEFORGE_VEC_HPP
#define PACEFORGE_VEC_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace paceforge {

using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm1(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double norm_inf(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

// Primal/dual norm pairs used by the stability and regret machinery.
// l2_l2 pairs the Euclidean norm with itself; linf_l1 pairs the max norm
// (gradients) with the 1-norm (iterate movement).
enum class NormPair { l2_l2, linf_l1 };

inline double primal_norm(NormPair pair, std::span<const double> v) {
  return pair == NormPair::l2_l2 ? norm2(v) : norm_inf(v);
}

inline double dual_norm(NormPair pair, std::span<const double> v) {
  return pair == NormPair::l2_l2 ? norm2(v) : norm1(v);
}

// Strong-convexity constant valid for the given norm pair. A separable
// reference function whose coordinate pieces are sigma-strongly convex is
// only (sigma/m)-strongly convex w.r.t. the 1-norm, since ||v||_1^2 can be
// m times ||v||_2^2.
inline double pair_sigma(double sigma_univariate, NormPair pair, std::size_t m) {
  return pair == NormPair::l2_l2 ? sigma_univariate
                                 : sigma_univariate / static_cast<double>(m);
}

}  // namespace paceforge

#endif
