#include <cmath>

#include "doctest.h"
#include "paceforge/errors.hpp"
#include "paceforge/instance_gen.hpp"
#include "paceforge/offline_oracle.hpp"
#include "paceforge/rng.hpp"

using namespace paceforge;

namespace {

LpRequest lp(int m, int d, Vec reward, Vec consumption) {
  LpRequest r;
  r.rows = m;
  r.cols = d;
  r.reward = std::move(reward);
  r.consumption = std::move(consumption);
  return r;
}

std::vector<Request> tiny_instance(Rng& rng, int horizon, int m, int d) {
  std::vector<Request> reqs;
  for (int t = 0; t < horizon; ++t) {
    Vec reward(d), consumption(m * d);
    for (double& r : reward) r = rng.uniform(0.0, 2.0);
    for (double& c : consumption) c = rng.bernoulli(0.6) ? 1.0 : 0.0;
    reqs.push_back(lp(m, d, std::move(reward), std::move(consumption)));
  }
  return reqs;
}

}  // namespace

TEST_CASE("dual value reference evaluations") {
  // All-zero rewards: D(mu) = B'mu, minimized at zero.
  std::vector<Request> zeros(4, lp(1, 1, {0.0}, {1.0}));
  CHECK(dual_value(Vec{0.7}, zeros, Vec{2.0}) == doctest::Approx(1.4));
  CHECK(dual_value(Vec{0.0}, zeros, Vec{2.0}) == 0.0);

  // Single request, r=2, c=1, B=0.5.
  std::vector<Request> one = {lp(1, 1, {2.0}, {1.0})};
  CHECK(dual_value(Vec{1.0}, one, Vec{0.5}) == doctest::Approx(1.5));
  CHECK(dual_value(Vec{2.0}, one, Vec{0.5}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dual_value(Vec{-0.1}, one, Vec{0.5}), DomainError);
}

TEST_CASE("certificates bracket hand-solved optima") {
  // Two unit requests, unit budget: take one unit in total, OPT = 1.
  std::vector<Request> two(2, lp(1, 1, {1.0}, {1.0}));
  DualCertificate cert = dual_bound(two, Vec{1.0}, 1e-6);
  CHECK(cert.upper >= 1.0 - 1e-9);
  CHECK(cert.lower <= cert.upper);
  CHECK(cert.gap <= 1e-5);
  CHECK(cert.converged);

  // Three identical requests, one budget unit: OPT = 2.
  std::vector<Request> three(3, lp(1, 1, {2.0}, {1.0}));
  cert = dual_bound(three, Vec{1.0}, 1e-6);
  CHECK(cert.upper == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cert.lower == doctest::Approx(2.0).epsilon(1e-6));

  // Slack budget: the bound is the sum of the best rewards, gap-free.
  std::vector<Request> slack = {lp(1, 2, {1.5, 0.4}, {1.0, 1.0}),
                                lp(1, 2, {0.2, 0.9}, {1.0, 1.0})};
  cert = dual_bound(slack, Vec{10.0}, 1e-6);
  CHECK(cert.upper == doctest::Approx(2.4).epsilon(1e-12));
  CHECK(cert.gap <= 1e-9);
}

TEST_CASE("zero-reward instances certify a zero optimum") {
  std::vector<Request> zeros(6, lp(1, 1, {0.0}, {1.0}));
  DualCertificate cert = dual_bound(zeros, Vec{2.0}, 1e-6);
  CHECK(cert.upper == 0.0);
  CHECK(cert.lower == 0.0);
  CHECK(cert.gap == 0.0);
  CHECK(cert.converged);
}

TEST_CASE("enumeration oracle on hand instances") {
  std::vector<Request> three(3, lp(1, 1, {2.0}, {1.0}));
  CHECK(exact_opt_enumerated(three, Vec{1.0}) == doctest::Approx(2.0));

  // Fractional optimum on the grid: take half the item.
  std::vector<Request> half = {lp(1, 1, {2.0}, {1.0})};
  CHECK(exact_opt_enumerated(half, Vec{0.5}) == doctest::Approx(1.0));

  CHECK(exact_opt_enumerated(std::vector<Request>{}, Vec{1.0}) == 0.0);
}

TEST_CASE("weak duality against the enumeration oracle") {
  Rng rng(661);
  int pairs = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int m = 1 + static_cast<int>(rng.raw() % 2);
    const int d = 1 + static_cast<int>(rng.raw() % 2);
    const int T = 2 + static_cast<int>(rng.raw() % 4);
    std::vector<Request> reqs = tiny_instance(rng, T, m, d);
    Vec budget(m);
    for (double& b : budget) b = rng.uniform(0.2, T * 0.8);
    double opt = exact_opt_enumerated(reqs, budget);
    for (int k = 0; k < 200; ++k) {
      Vec mu(m);
      for (double& v : mu) v = rng.uniform(0.0, 3.0);
      CHECK(dual_value(mu, reqs, budget) >= opt - 1e-9);
      ++pairs;
    }
    // The certificate brackets the enumerated optimum.
    DualCertificate cert = dual_bound(reqs, budget, 1e-5);
    CHECK(cert.upper >= opt - 1e-7);
    CHECK(cert.lower <= cert.upper + 1e-12);
  }
  CHECK(pairs == 10000);
}

TEST_CASE("certificate sandwich on random medium instances") {
  for (int i = 0; i < 10; ++i) {
    LpInstanceParams inst = gen_lp_params(derive_seed(662, i, 0), 4, 3);
    RequestStream stream =
        sample_lp_requests(inst, 150, derive_seed(662, i, 1));
    Vec budget(inst.rho);
    for (double& b : budget) b *= 150;
    DualCertificate cert = dual_bound(stream.requests, budget, 1e-4);
    CHECK(cert.lower <= cert.upper);
    CHECK(cert.gap >= 0.0);
    CHECK(cert.gap <= 0.02 * std::max(1.0, cert.upper));
  }
}

TEST_CASE("dual value is pointwise monotone in the budget") {
  Rng rng(663);
  std::vector<Request> reqs = tiny_instance(rng, 5, 2, 2);
  for (int k = 0; k < 100; ++k) {
    Vec mu = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
    Vec b1 = {rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0)};
    Vec b2 = {b1[0] + rng.uniform(0.0, 2.0), b1[1] + rng.uniform(0.0, 2.0)};
    CHECK(dual_value(mu, reqs, b2) >= dual_value(mu, reqs, b1) - 1e-12);
  }
}

TEST_CASE("greedy primal value is a valid lower bound") {
  // d = 1 and budgets on the 1/50 lattice keep the enumeration grid exact
  // (0/1 consumption puts every LP extreme point on the lattice), so the
  // fractional greedy may not beat it.
  Rng rng(664);
  for (int i = 0; i < 20; ++i) {
    std::vector<Request> reqs = tiny_instance(rng, 3, 2, 1);
    Vec budget = {std::round(rng.uniform(0.3, 2.5) * 50.0) / 50.0,
                  std::round(rng.uniform(0.3, 2.5) * 50.0) / 50.0};
    double opt = exact_opt_enumerated(reqs, budget);
    Vec mu = {rng.uniform(0.0, 1.5), rng.uniform(0.0, 1.5)};
    CHECK(greedy_primal_value(reqs, budget, mu) <= opt + 1e-9);
  }
}
