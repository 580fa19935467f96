#include <cmath>
#include <sstream>
#include <string>
#include <tuple>

#include "doctest.h"
#include "paceforge/instance_gen.hpp"
#include "paceforge/rng.hpp"
#include "paceforge/sweep.hpp"

using namespace paceforge;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.m = 3;
  cfg.d = 2;
  cfg.horizon = 120;
  cfg.instances = 2;
  cfg.trials = 2;
  cfg.seed = 31;
  cfg.s_grid = {1.0, 10.0};
  cfg.beta_grid = {0.0, 0.9};
  cfg.alpha_d_grid = {0.0, 0.5};
  cfg.alpha_i_grid = {0.0, 0.75};
  cfg.threads = 2;
  return cfg;
}

}  // namespace

TEST_CASE("controller grid excludes negative proportional weights") {
  SweepConfig cfg = small_config();
  cfg.alpha_d_grid = {0.0, 0.25, 0.5, 0.75};
  cfg.alpha_i_grid = {0.0, 0.25, 0.5, 0.75};
  cfg.beta_grid = {0.0, 0.9, 0.99, 0.999};
  std::vector<ResultRow> rows = controller_grid(cfg);
  // 13 valid (alpha_d, alpha_i) pairs x 4 betas
  CHECK(rows.size() == 52);
  for (const ResultRow& row : rows)
    CHECK(row.alpha_d + row.alpha_i <= 1.0 + 1e-12);
  // sorted by beta, then alpha_d, then alpha_i
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto key = [](const ResultRow& r) {
      return std::tuple<double, double, double>(r.beta, r.alpha_d, r.alpha_i);
    };
    CHECK(key(rows[i - 1]) < key(rows[i]));
  }
}

TEST_CASE("zero trials produce an empty but valid result") {
  SweepConfig cfg = small_config();
  cfg.trials = 0;
  SweepResult result = run_sweep(cfg);
  CHECK(result.paths == 0);
  CHECK(result.raw.empty());
  std::stringstream ss;
  emit_csv(result, ss);
  CHECK(ss.str() == "momentum_beta,alpha_D,alpha_I,s_1,s_10\n");
}

TEST_CASE("csv formatting is exact") {
  SweepResult result;
  result.s_grid = {0.1, 1.0, 10.0, 100.0};
  ResultRow row;
  row.beta = 0.9;
  row.alpha_d = 0.25;
  row.alpha_i = 0.5;
  row.mean_ratio = {0.5, 0.6, 0.7, 0.8};
  row.ci_half = {0, 0, 0, 0};
  result.rows = {row};
  std::stringstream ss;
  emit_csv(result, ss);
  CHECK(ss.str() ==
        "momentum_beta,alpha_D,alpha_I,s_0.1,s_1,s_10,s_100\n"
        "0.9,0.25,0.5,0.500,0.600,0.700,0.800\n");
}

TEST_CASE("sweep output is deterministic and paired") {
  SweepConfig cfg = small_config();
  SweepResult a = run_sweep(cfg);
  SweepResult b = run_sweep(cfg);

  std::stringstream csv_a, csv_b, raw_a, raw_b;
  emit_csv(a, csv_a);
  emit_csv(b, csv_b);
  emit_raw(a, raw_a);
  emit_raw(b, raw_b);
  CHECK(csv_a.str() == csv_b.str());
  CHECK(raw_a.str() == raw_b.str());

  // paired design: the recorded stream checksums replay from the seeds
  REQUIRE(a.stream_checksums.size() == 4);
  for (int p = 0; p < 4; ++p) {
    int instance = p / cfg.trials, trial = p % cfg.trials;
    LpInstanceParams inst =
        gen_lp_params(derive_seed(cfg.seed, instance, 0), cfg.m, cfg.d);
    RequestStream stream = sample_lp_requests(
        inst, cfg.horizon, derive_seed(cfg.seed, instance, trial + 1));
    CHECK(stream.checksum == a.stream_checksums[p]);
  }
}

TEST_CASE("sweep aggregates sane ratios and raw records") {
  SweepConfig cfg = small_config();
  SweepResult result = run_sweep(cfg);
  CHECK(result.paths == 4);
  CHECK(result.rows.size() == 3 * 2);  // 3 valid pairs x 2 betas
  CHECK(result.raw.size() == result.rows.size() * 2 * 4);
  for (const ResultRow& row : result.rows) {
    CHECK(row.samples == 4);
    for (double r : row.mean_ratio) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0 + 1e-9);
    }
    for (double ci : row.ci_half) CHECK(ci >= 0.0);
  }
  for (const RawRecord& rec : result.raw) {
    CHECK(rec.upper > 0.0);
    CHECK(rec.reward >= 0.0);
    CHECK(rec.reward <= rec.upper * (1.0 + 1e-9));
    CHECK(rec.gap >= 0.0);
  }
  CHECK(result.mean_gap >= 0.0);
  CHECK(result.mean_gap <= 0.05);
}

TEST_CASE("entropy sweeps run where the ceiling exists and flag the rest") {
  SweepConfig cfg = small_config();
  cfg.map = MapKind::entropy;
  cfg.mu1_frac = 0.25;
  cfg.s_grid = {0.1, 100.0};  // s=100 has no finite iterate ceiling
  cfg.beta_grid = {0.0};
  cfg.alpha_d_grid = {0.0};
  cfg.alpha_i_grid = {0.0};
  SweepResult result = run_sweep(cfg);
  REQUIRE(result.rows.size() == 1);
  CHECK(std::isfinite(result.rows[0].mean_ratio[0]));
  CHECK(result.rows[0].mean_ratio[0] > 0.0);
  CHECK(std::isnan(result.rows[0].mean_ratio[1]));
  std::stringstream ss;
  emit_csv(result, ss);
  CHECK(ss.str().find("nan") != std::string::npos);
}

TEST_CASE("unwritable output paths raise an io error naming the path") {
  SweepResult result;
  result.s_grid = {1.0};
  try {
    emit_csv(result, "/nonexistent-dir/out.csv");
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") !=
          std::string::npos);
  }
}

TEST_CASE("exact-tiny mode benchmarks against enumeration") {
  SweepConfig cfg = small_config();
  cfg.horizon = 4;
  cfg.exact_tiny = true;
  cfg.s_grid = {1.0};
  cfg.beta_grid = {0.0};
  cfg.alpha_d_grid = {0.0};
  cfg.alpha_i_grid = {0.0};
  SweepResult result = run_sweep(cfg);
  for (const ResultRow& row : result.rows)
    for (double r : row.mean_ratio) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0 + 1e-9);
    }
  CHECK(result.mean_gap == 0.0);

  cfg.horizon = 50;
  CHECK_THROWS(run_sweep(cfg));
}
