#include <cmath>
#include <sstream>

#include "doctest.h"
#include "paceforge/instance_gen.hpp"
#include "paceforge/rng.hpp"

using namespace paceforge;

TEST_CASE("instance parameters are deterministic in the seed") {
  LpInstanceParams a = gen_lp_params(12345, 6, 4);
  LpInstanceParams b = gen_lp_params(12345, 6, 4);
  CHECK(a.p == b.p);
  CHECK(a.rho == b.rho);
  CHECK(a.theta == b.theta);
  CHECK(a.scale == b.scale);
  LpInstanceParams c = gen_lp_params(12346, 6, 4);
  CHECK(a.p != c.p);
}

TEST_CASE("parameter distributions match their definitions") {
  double p_sum = 0.0;
  long n = 0;
  for (int i = 0; i < 2500; ++i) {
    LpInstanceParams inst = gen_lp_params(derive_seed(77, i, 0), 4, 2);
    for (double p : inst.p) {
      p_sum += p;
      ++n;
    }
    double norm = 0.0;
    for (double th : inst.theta) norm += th * th;
    CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-12);
    for (double r : inst.rho) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
    CHECK(inst.scale > 0.0);
  }
  CHECK(p_sum / n >= 0.48);  // 1e4 Uniform(0,1) draws
  CHECK(p_sum / n <= 0.52);
}

TEST_CASE("consumption is all ones when every probability is one") {
  LpInstanceParams inst = gen_lp_params(5, 3, 2);
  inst.p = {1.0, 1.0, 1.0};
  RequestStream stream = sample_lp_requests(inst, 20, 6);
  for (const Request& req : stream.requests) {
    const auto& lp = std::get<LpRequest>(req);
    for (double v : lp.consumption) CHECK(v == 1.0);
  }
}

TEST_CASE("reward collapses to the correlated column plus common noise") {
  LpInstanceParams inst = gen_lp_params(5, 3, 4);
  inst.theta = {1.0, 0.0, 0.0};
  inst.scale = 1.0;
  inst.p = {1.0, 1.0, 1.0};  // deterministic consumption
  RequestStream stream = sample_lp_requests(inst, 4000, 7);
  double noise_sq = 0.0;
  for (const Request& req : stream.requests) {
    const auto& lp = std::get<LpRequest>(req);
    // r_i = c_{1,i} + noise with the same noise in every component
    double noise = lp.reward[0] - lp.c(0, 0);
    for (int i = 1; i < lp.cols; ++i)
      CHECK(lp.reward[i] - lp.c(0, i) == doctest::Approx(noise).epsilon(1e-12));
    noise_sq += noise * noise;
  }
  double sd = std::sqrt(noise_sq / stream.requests.size());
  CHECK(sd >= 0.09);  // configured noise sd is 0.1
  CHECK(sd <= 0.11);
}

TEST_CASE("streams respect the stated reward and consumption bounds") {
  for (int i = 0; i < 30; ++i) {
    LpInstanceParams inst = gen_lp_params(derive_seed(88, i, 0), 5, 3);
    RequestStream stream =
        sample_lp_requests(inst, 100, derive_seed(88, i, 1));
    CHECK(stream.b_bar == 1.0);
    for (const Request& req : stream.requests) {
      const auto& lp = std::get<LpRequest>(req);
      for (double r : lp.reward) {
        CHECK(r >= 0.0);
        CHECK(r <= stream.f_bar + 1e-12);
      }
      for (double c : lp.consumption) CHECK((c == 0.0 || c == 1.0));
    }
    CHECK(stream.clip_rate >= 0.0);
    CHECK(stream.clip_rate <= 1.0);
  }
}

TEST_CASE("two-layer seeding separates instances and trials") {
  LpInstanceParams inst = gen_lp_params(derive_seed(99, 0, 0), 4, 3);
  RequestStream t0 = sample_lp_requests(inst, 50, derive_seed(99, 0, 1));
  RequestStream t0_again = sample_lp_requests(inst, 50, derive_seed(99, 0, 1));
  RequestStream t1 = sample_lp_requests(inst, 50, derive_seed(99, 0, 2));
  CHECK(t0.checksum == t0_again.checksum);
  CHECK(t0.checksum != t1.checksum);

  const auto& a = std::get<LpRequest>(t0.requests[7]);
  const auto& b = std::get<LpRequest>(t0_again.requests[7]);
  CHECK(a.reward == b.reward);  // bit-identical
  CHECK(a.consumption == b.consumption);
}

TEST_CASE("auction streams") {
  AuctionInstanceParams degenerate;
  degenerate.value_lo = degenerate.value_hi = 1.0;
  degenerate.bid_lo = degenerate.bid_hi = 0.5;
  RequestStream constant = gen_auction_stream(degenerate, 30, 1);
  for (const Request& req : constant.requests) {
    const auto& au = std::get<AuctionRequest>(req);
    CHECK(au.value == 1.0);
    CHECK(au.competing_bid == 0.5);
  }

  AuctionInstanceParams uni;
  RequestStream s = gen_auction_stream(uni, 20000, 2);
  RequestStream s2 = gen_auction_stream(uni, 20000, 2);
  CHECK(s.checksum == s2.checksum);
  // fixed bid b wins when the competing bid is below it: rate ~ b
  for (double bid : {0.25, 0.5, 0.8}) {
    long wins = 0;
    for (const Request& req : s.requests)
      wins += std::get<AuctionRequest>(req).competing_bid <= bid ? 1 : 0;
    double rate = static_cast<double>(wins) / s.requests.size();
    CHECK(rate == doctest::Approx(bid).epsilon(0.05));
  }
}

TEST_CASE("request streams round-trip through the text format") {
  LpInstanceParams inst = gen_lp_params(151, 3, 2);
  RequestStream stream = sample_lp_requests(inst, 25, 152);
  std::stringstream ss;
  write_requests(stream.requests, ss);
  std::vector<Request> back = read_requests(ss);
  REQUIRE(back.size() == stream.requests.size());
  for (std::size_t t = 0; t < back.size(); ++t) {
    const auto& orig = std::get<LpRequest>(stream.requests[t]);
    const auto& copy = std::get<LpRequest>(back[t]);
    CHECK(copy.rows == orig.rows);
    CHECK(copy.cols == orig.cols);
    for (std::size_t i = 0; i < orig.reward.size(); ++i)
      CHECK(copy.reward[i] == doctest::Approx(orig.reward[i]).epsilon(1e-12));
    for (std::size_t i = 0; i < orig.consumption.size(); ++i)
      CHECK(copy.consumption[i] == orig.consumption[i]);  // 0/1 exact
  }

  RequestStream auction = gen_auction_stream(AuctionInstanceParams{}, 10, 3);
  std::stringstream as;
  write_requests(auction.requests, as);
  std::vector<Request> aback = read_requests(as);
  REQUIRE(aback.size() == 10);
  for (std::size_t t = 0; t < aback.size(); ++t) {
    CHECK(std::get<AuctionRequest>(aback[t]).value ==
          doctest::Approx(std::get<AuctionRequest>(auction.requests[t]).value)
              .epsilon(1e-12));
  }
}
