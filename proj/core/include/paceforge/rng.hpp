#ifndef PACEFORGE_RNG_HPP
#define PACEFORGE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace paceforge {

// splitmix64 mix; used to derive stream seeds so that (master, instance,
// trial) -> seed is a fixed pure function across platforms.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t instance,
                                 std::uint64_t trial = 0) {
  std::uint64_t s = mix64(master ^ 0xa0761d6478bd642full);
  s = mix64(s ^ mix64(instance + 1));
  s = mix64(s ^ mix64(trial + 0x10000001));
  return s;
}

// Deterministic RNG: the mt19937_64 output sequence is pinned by the
// standard, and all variate transforms below are implemented here rather
// than delegated to std::*_distribution (whose output is implementation
// defined). Results therefore replay bit-identically across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Box-Muller; consumes two uniforms per call, spare discarded.
  double gaussian() {
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  double lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * gaussian());
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace paceforge

#endif
