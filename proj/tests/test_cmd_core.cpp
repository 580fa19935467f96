#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "paceforge/cmd_core.hpp"
#include "paceforge/errors.hpp"
#include "paceforge/pid_mapping.hpp"
#include "paceforge/rng.hpp"

using namespace paceforge;

namespace {

CanonicalParams params(double eta, double ap, double ai, double ad,
                       double beta) {
  CanonicalParams p;
  p.eta = eta;
  p.alpha_p = ap;
  p.alpha_i = ai;
  p.alpha_d = ad;
  p.beta = beta;
  return p;
}

}  // namespace

TEST_CASE("proportional filter is the identity") {
  CanonicalParams p = params(1.0, 1.0, 0.0, 0.0, 0.0);
  FilterState st = FilterState::zero(3);
  Vec g = {0.3, -1.2, 4.0};
  FilterResult r = filter_gradient(st, g, p);
  for (int j = 0; j < 3; ++j) CHECK(r.z[j] == g[j]);
}

TEST_CASE("pure integral filter is exponential smoothing") {
  // alpha_i = 1, beta = 0.5: z_t = beta z_{t-1} + (1-beta) g_t.
  CanonicalParams p = params(1.0, 0.0, 1.0, 0.0, 0.5);
  FilterState st = FilterState::zero(1);
  FilterResult r1 = filter_gradient(st, Vec{1.0}, p);
  CHECK(r1.z[0] == doctest::Approx(0.5).epsilon(1e-14));
  FilterResult r2 = filter_gradient(r1.next, Vec{1.0}, p);
  CHECK(r2.z[0] == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("impulse response replays the convolution weights") {
  CanonicalParams p = params(1.0, 0.4, 0.4, 0.2, 0.5);
  const double expected[] = {0.8, -0.1, 0.05, 0.025, 0.0125};
  FilterState st = FilterState::zero(1);
  for (int t = 0; t < 5; ++t) {
    FilterResult r = filter_gradient(st, Vec{t == 0 ? 1.0 : 0.0}, p);
    CHECK(r.z[0] == doctest::Approx(expected[t]).epsilon(1e-12));
    st = r.next;
  }
}

TEST_CASE("filter rejects dimension mismatches") {
  FilterState st = FilterState::zero(2);
  CHECK_THROWS_AS(
      filter_gradient(st, Vec{1.0}, params(1.0, 1.0, 0.0, 0.0, 0.0)),
      DimensionError);
}

TEST_CASE("incremental filter equals direct convolution") {
  Rng rng(991);
  const int T = 100, m = 5;
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    double ai = rng.uniform(0.0, 1.0);
    double ad = rng.uniform(0.0, 1.0 - ai);
    CanonicalParams p = params(rng.uniform(0.01, 2.0),
                               std::max(0.0, 1.0 - ai - ad), ai, ad,
                               rng.uniform(0.0, 0.99));
    std::vector<Vec> grads(T, Vec(m));
    for (auto& g : grads)
      for (double& v : g) v = rng.uniform(-1.0, 1.0);
    std::vector<Vec> direct =
        convolve_gradients(canonical_to_weights(p, T), grads);
    FilterState st = FilterState::zero(m);
    for (int t = 0; t < T; ++t) {
      FilterResult r = filter_gradient(st, grads[t], p);
      for (int j = 0; j < m; ++j)
        worst = std::max(worst, std::abs(r.z[j] - direct[t][j]));
      st = r.next;
    }
  }
  CHECK(worst <= 1e-11);
}

TEST_CASE("quadratic mirror step is the projected additive update") {
  MirrorMap map = make_response_map(MapKind::quadratic, 1,
                                    std::numeric_limits<double>::infinity());
  CHECK(mirror_step(Vec{2.0}, Vec{0.5}, 1.0, map)[0] == 1.5);
  CHECK(mirror_step(Vec{0.2}, Vec{1.0}, 1.0, map)[0] == 0.0);  // clamped

  Rng rng(7);
  MirrorMap boxed = make_response_map(MapKind::quadratic, 3, 2.5);
  for (int rep = 0; rep < 200; ++rep) {
    Vec mu(3), z(3);
    for (int j = 0; j < 3; ++j) {
      mu[j] = rng.uniform(0.0, 2.5);
      z[j] = rng.uniform(-3.0, 3.0);
    }
    double eta = rng.uniform(0.0, 1.5);
    Vec out = mirror_step(mu, z, eta, boxed);
    for (int j = 0; j < 3; ++j) {
      double additive = std::clamp(mu[j] - eta * z[j], 0.0, 2.5);
      CHECK(out[j] == additive);  // exact, not approximate
    }
  }
}

TEST_CASE("entropy mirror step is the multiplicative update") {
  MirrorMap map = make_response_map(MapKind::entropy, 1, 100.0);
  double out = mirror_step(Vec{2.0}, Vec{std::log(2.0)}, 1.0, map)[0];
  CHECK(out == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(8);
  MirrorMap ent = make_response_map(MapKind::entropy, 4, 50.0);
  for (int rep = 0; rep < 200; ++rep) {
    Vec mu(4), z(4);
    for (int j = 0; j < 4; ++j) {
      mu[j] = rng.uniform(1e-6, 10.0);
      z[j] = rng.uniform(-2.0, 2.0);
    }
    double eta = rng.uniform(0.0, 1.0);
    Vec out2 = mirror_step(mu, z, eta, ent);
    for (int j = 0; j < 4; ++j) {
      double mult = std::clamp(mu[j] * std::exp(-eta * z[j]), 1e-300, 50.0);
      CHECK(out2[j] == doctest::Approx(mult).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy step survives extreme exponents") {
  MirrorMap map = make_response_map(MapKind::entropy, 1, 10.0);
  // Huge downward move underflows exp: floors at the tiny positive guard.
  Vec tiny = mirror_step(Vec{1.0}, Vec{800.0}, 1.0, map);
  CHECK(tiny[0] > 0.0);
  CHECK(tiny[0] <= 1e-300);
  // Huge upward move saturates at the box ceiling.
  Vec big = mirror_step(Vec{1.0}, Vec{-800.0}, 1.0, map);
  CHECK(big[0] == 10.0);
}

TEST_CASE("mirror step rejects non-finite input") {
  MirrorMap map = make_response_map(MapKind::quadratic, 1,
                                    std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(
      mirror_step(Vec{std::nan("")}, Vec{0.0}, 1.0, map), NumericError);
  CHECK_THROWS_AS(
      mirror_step(Vec{1.0}, Vec{0.0}, std::nan(""), map), NumericError);
}

TEST_CASE("bregman divergence reference values") {
  MirrorMap quad = make_response_map(MapKind::quadratic, 2, 10.0);
  CHECK(bregman(quad, Vec{1.0, 1.0}, Vec{0.0, 0.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bregman(quad, Vec{0.7, 3.3}, Vec{0.7, 3.3}) == 0.0);

  MirrorMap ent = make_response_map(MapKind::entropy, 1, 10.0);
  // x log(x/y) - x + y at x=1, y=2.
  CHECK(bregman(ent, Vec{1.0}, Vec{2.0}) ==
        doctest::Approx(std::log(0.5) + 1.0).epsilon(1e-12));
  CHECK_THROWS_AS(bregman(ent, Vec{11.0}, Vec{1.0}), DomainError);
}

TEST_CASE("power-map potential quadrature matches the closed form") {
  const double q = 2.0;
  MirrorMap map = make_response_map(MapKind::power_response, 1, 8.0, q);
  auto closed = [&](double x) {
    return q * ((1.0 + x) * std::log1p(x) - x) - x;
  };
  for (double x : {0.0, 0.3, 1.0, 2.7, 8.0})
    CHECK(map.potential(x) == doctest::Approx(closed(x)).epsilon(1e-9));
  Rng rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    Vec x = {rng.uniform(0.0, 8.0)}, y = {rng.uniform(1e-9, 8.0)};
    double direct = closed(x[0]) - closed(y[0]) -
                    (q * std::log1p(y[0]) - 1.0) * (x[0] - y[0]);
    CHECK(bregman(map, x, y) == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("stability margin closed form for unprojected quadratic steps") {
  MirrorMap map = make_response_map(MapKind::quadratic, 3,
                                    std::numeric_limits<double>::infinity());
  Rng rng(23);
  for (int rep = 0; rep < 100; ++rep) {
    Vec mu(3), z(3);
    for (int j = 0; j < 3; ++j) {
      mu[j] = rng.uniform(5.0, 10.0);  // far from the boundary
      z[j] = rng.uniform(-1.0, 1.0);
    }
    double eta = rng.uniform(0.0, 1.0);
    Vec next = mirror_step(mu, z, eta, map);
    double margin = stability_margin(mu, next, z, eta, 1.0, NormPair::l2_l2);
    double expected = (std::numbers::sqrt2 - 1.0) * eta * norm2(z);
    CHECK(margin == doctest::Approx(expected).epsilon(1e-10));
  }
  Vec mu = {1.0, 2.0, 3.0};
  CHECK(stability_margin(mu, mu, Vec{0.0, 0.0, 0.0}, 0.0, 1.0,
                         NormPair::l2_l2) == 0.0);
}

TEST_CASE("stability margin is non-negative on random trajectories") {
  Rng rng(31);
  double worst = 1.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const int m = 1 + static_cast<int>(rng.raw() % 4);
    bool entropy = rng.bernoulli(0.5);
    MirrorMap map = entropy
                        ? make_response_map(MapKind::entropy, m, 20.0)
                        : make_response_map(MapKind::quadratic, m, 20.0);
    NormPair pair = rng.bernoulli(0.5) ? NormPair::l2_l2 : NormPair::linf_l1;
    double sigma = pair_sigma(map.sigma, pair, m);
    double ai = rng.uniform(0.0, 1.0);
    double ad = rng.uniform(0.0, 1.0 - ai);
    CanonicalParams p = params(rng.uniform(0.01, 0.5),
                               std::max(0.0, 1.0 - ai - ad), ai, ad,
                               rng.uniform(0.0, 0.95));
    Vec mu(m, entropy ? 1.0 : 5.0);
    FilterState st = FilterState::zero(m);
    for (int t = 0; t < 25; ++t) {
      Vec g(m);
      for (double& v : g) v = rng.uniform(-1.0, 1.0);
      FilterResult r = filter_gradient(st, g, p);
      Vec next = mirror_step(mu, r.z, p.eta, map);
      worst = std::min(
          worst, stability_margin(mu, next, r.z, p.eta, sigma, pair));
      mu = std::move(next);
      st = std::move(r.next);
    }
  }
  CHECK(worst >= -1e-12);
}

TEST_CASE("divergence dominates the squared dual norm") {
  Rng rng(37);
  MirrorMap quad = make_response_map(MapKind::quadratic, 2, 4.0);
  MirrorMap ent = make_response_map(MapKind::entropy, 2, 4.0);
  double worst = 0.0;
  for (int rep = 0; rep < 500; ++rep) {
    Vec x(2), y(2);
    for (int j = 0; j < 2; ++j) {
      x[j] = rng.uniform(1e-4, 4.0);
      y[j] = rng.uniform(1e-4, 4.0);
    }
    Vec d = {x[0] - y[0], x[1] - y[1]};
    double l2 = norm2(d), l1 = norm1(d);
    worst = std::max(worst, 0.5 * l2 * l2 - bregman(quad, x, y));
    double sig = pair_sigma(ent.sigma, NormPair::linf_l1, 2);
    worst = std::max(worst, 0.5 * sig * l1 * l1 - bregman(ent, x, y));
  }
  CHECK(worst <= 1e-12);
}
