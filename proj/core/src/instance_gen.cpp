#include "paceforge/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "paceforge/errors.hpp"

namespace paceforge {
namespace {

constexpr double kNoiseSd = 0.1;
// 10 sigma: statistically invisible, but makes f_bar a hard bound.
constexpr double kNoiseClip = 1.0;

void hash_double(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  h ^= bits;
  h *= 0x100000001b3ull;  // FNV-1a step
}

}  // namespace

LpInstanceParams gen_lp_params(std::uint64_t seed, int m, int d) {
  if (m < 1 || d < 1) throw InvalidParamsError("m and d must be >= 1");
  Rng rng(seed);
  LpInstanceParams params;
  params.m = m;
  params.d = d;
  params.p.resize(m);
  params.rho.resize(m);
  params.theta.resize(m);
  for (int j = 0; j < m; ++j) params.p[j] = rng.uniform01();
  for (int j = 0; j < m; ++j) params.rho[j] = rng.uniform01();
  double norm = 0.0;
  for (int j = 0; j < m; ++j) {
    params.theta[j] = rng.gaussian();
    norm += params.theta[j] * params.theta[j];
  }
  norm = std::sqrt(norm);
  if (norm == 0.0) {  // measure-zero; keep a valid direction
    params.theta[0] = 1.0;
  } else {
    for (int j = 0; j < m; ++j) params.theta[j] /= norm;
  }
  params.scale = rng.lognormal(0.0, 2.0);
  return params;
}

RequestStream sample_lp_requests(const LpInstanceParams& params, int horizon,
                                 std::uint64_t seed) {
  const int m = params.m, d = params.d;
  Rng rng(seed);
  RequestStream stream;
  stream.requests.reserve(horizon);
  stream.b_bar = 1.0;
  double theta_l1 = 0.0;
  for (double th : params.theta) theta_l1 += std::abs(th);
  stream.f_bar = params.scale * (theta_l1 + kNoiseClip);

  long clipped = 0;
  for (int t = 0; t < horizon; ++t) {
    LpRequest req;
    req.rows = m;
    req.cols = d;
    req.consumption.resize(static_cast<std::size_t>(m) * d);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < d; ++i)
        req.consumption[j * d + i] = rng.bernoulli(params.p[j]) ? 1.0 : 0.0;
    double noise =
        std::clamp(kNoiseSd * rng.gaussian(), -kNoiseClip, kNoiseClip);
    req.reward.resize(d);
    for (int i = 0; i < d; ++i) {
      double corr = 0.0;
      for (int j = 0; j < m; ++j)
        corr += params.theta[j] * req.consumption[j * d + i];
      double r = params.scale * (corr + noise);
      if (r < 0.0) {
        r = 0.0;
        ++clipped;
      }
      req.reward[i] = r;
    }
    stream.requests.push_back(std::move(req));
  }
  stream.clip_rate =
      horizon > 0 ? static_cast<double>(clipped) / (horizon * d) : 0.0;
  stream.checksum = stream_checksum(stream.requests);
  return stream;
}

RequestStream gen_auction_stream(const AuctionInstanceParams& params,
                                 int horizon, std::uint64_t seed) {
  if (params.value_lo < 0.0 || params.bid_lo < 0.0 ||
      params.value_hi < params.value_lo || params.bid_hi < params.bid_lo)
    throw InvalidParamsError("auction distributions must be non-negative");
  Rng rng(seed);
  RequestStream stream;
  stream.requests.reserve(horizon);
  stream.f_bar = params.value_hi;
  stream.b_bar = params.bid_hi;
  for (int t = 0; t < horizon; ++t) {
    AuctionRequest req;
    req.value = rng.uniform(params.value_lo, params.value_hi);
    req.competing_bid = rng.uniform(params.bid_lo, params.bid_hi);
    stream.requests.push_back(req);
  }
  stream.checksum = stream_checksum(stream.requests);
  return stream;
}

std::uint64_t stream_checksum(const std::vector<Request>& requests) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const Request& req : requests) {
    if (const auto* lp = std::get_if<LpRequest>(&req)) {
      for (double v : lp->consumption) hash_double(h, v);
      for (double v : lp->reward) hash_double(h, v);
    } else {
      const auto& au = std::get<AuctionRequest>(req);
      hash_double(h, au.value);
      hash_double(h, au.competing_bid);
    }
  }
  return h;
}

void write_requests(const std::vector<Request>& requests, std::ostream& os) {
  char buf[32];
  auto put = [&](double v, bool first) {
    std::snprintf(buf, sizeof buf, "%.12f", v);
    if (!first) os << ' ';
    os << buf;
  };
  if (!requests.empty() && std::holds_alternative<LpRequest>(requests[0])) {
    const auto& first = std::get<LpRequest>(requests[0]);
    os << "lp " << first.rows << ' ' << first.cols << '\n';
    for (const Request& req : requests) {
      const auto& lp = std::get<LpRequest>(req);
      bool lead = true;
      for (double v : lp.consumption) { put(v, lead); lead = false; }
      for (double v : lp.reward) { put(v, lead); lead = false; }
      os << '\n';
    }
  } else {
    os << "auction\n";
    for (const Request& req : requests) {
      const auto& au = std::get<AuctionRequest>(req);
      put(au.value, true);
      put(au.competing_bid, false);
      os << '\n';
    }
  }
}

void write_requests(const std::vector<Request>& requests,
                    const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_requests(requests, os);
}

std::vector<Request> read_requests(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) return {};
  std::istringstream hs(header);
  std::string kind;
  hs >> kind;
  std::vector<Request> out;
  std::string line;
  if (kind == "lp") {
    int m = 0, d = 0;
    hs >> m >> d;
    if (m < 1 || d < 1) throw IoError("bad lp stream header");
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      LpRequest req;
      req.rows = m;
      req.cols = d;
      req.consumption.resize(static_cast<std::size_t>(m) * d);
      req.reward.resize(d);
      for (double& v : req.consumption)
        if (!(ls >> v)) throw IoError("truncated lp request line");
      for (double& v : req.reward)
        if (!(ls >> v)) throw IoError("truncated lp request line");
      out.emplace_back(std::move(req));
    }
  } else if (kind == "auction") {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      AuctionRequest req;
      if (!(ls >> req.value >> req.competing_bid))
        throw IoError("truncated auction request line");
      out.emplace_back(req);
    }
  } else {
    throw IoError("unknown stream kind: " + kind);
  }
  return out;
}

std::vector<Request> read_requests(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return read_requests(is);
}

}  // namespace paceforge
