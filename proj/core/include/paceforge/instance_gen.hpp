#ifndef PACEFORGE_INSTANCE_GEN_HPP
#define PACEFORGE_INSTANCE_GEN_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "paceforge/rng.hpp"
#include "paceforge/vec.hpp"

namespace paceforge {

// One request of the online LP family: action set is the unit simplex
// {x >= 0, sum x <= 1}, reward r'x, consumption C x with C stored row-major
// (m rows, d columns).
struct LpRequest {
  Vec reward;       // d
  Vec consumption;  // m * d, row-major
  int rows = 0;     // m
  int cols = 0;     // d
  double c(int j, int i) const { return consumption[j * cols + i]; }
};

// One second-price auction: the action is a bid; winning (bid >= competing
// bid, ties win) pays the competing bid and earns value - competing bid.
struct AuctionRequest {
  double value = 0.0;
  double competing_bid = 0.0;
};

using Request = std::variant<LpRequest, AuctionRequest>;

// Instance-level parameters of the random LP family. Consumption entries are
// Bernoulli(p_j) per resource row; rewards are
//   r_t = scale * (theta' c_t + noise_t * 1)
// with theta on the unit sphere and i.i.d. Gaussian noise (sd 0.1, clipped
// to +-1 so rewards admit a finite upper bound), negative components clipped
// to zero. "scale" is the log-normal magnitude parameter.
struct LpInstanceParams {
  int m = 0, d = 0;
  Vec p;       // Bernoulli probabilities, size m
  Vec rho;     // per-period budgets B_j / T, size m
  Vec theta;   // unit 2-norm, size m
  double scale = 1.0;
};

struct AuctionInstanceParams {
  double value_lo = 0.0;  // v ~ Uniform(value_lo, value_hi)
  double value_hi = 1.0;
  double bid_lo = 0.0;    // competing bid ~ Uniform(bid_lo, bid_hi)
  double bid_hi = 1.0;
  double rho = 0.25;      // per-period budget
};

struct RequestStream {
  std::vector<Request> requests;
  double f_bar = 0.0;     // upper bound on any single-request reward
  double b_bar = 1.0;     // upper bound on per-resource consumption
  double clip_rate = 0.0; // fraction of reward components clipped to 0
  std::uint64_t checksum = 0;  // content hash for paired-design assertions
};

// Deterministic in the seed. Draw order: p (m), rho (m), theta (m Gaussians,
// then normalized), scale.
LpInstanceParams gen_lp_params(std::uint64_t seed, int m, int d);

RequestStream sample_lp_requests(const LpInstanceParams& params, int horizon,
                                 std::uint64_t seed);

RequestStream gen_auction_stream(const AuctionInstanceParams& params,
                                 int horizon, std::uint64_t seed);

// Line-delimited dump for cross-implementation replay: one request per line,
// flattened consumption then rewards, fixed 12-decimal precision.
void write_requests(const std::vector<Request>& requests, std::ostream& os);
void write_requests(const std::vector<Request>& requests,
                    const std::string& path);
std::vector<Request> read_requests(std::istream& is);
std::vector<Request> read_requests(const std::string& path);

std::uint64_t stream_checksum(const std::vector<Request>& requests);

}  // namespace paceforge

#endif
