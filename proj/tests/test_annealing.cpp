#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "permsmc/annealing.hpp"
#include "permsmc/common.hpp"
#include "permsmc/exact.hpp"
#include "permsmc/smc.hpp"
#include "test_util.hpp"

using namespace permsmc;
using permsmc_test::toy3;

TEST_CASE("ideal-weight annealing recovers the cooled normalizer on the example") {
  const BinaryMatrix a = toy3();
  const double target = double(permanent_exact_activity(a, 1.0 / 6.0));  // 43/18

  SaConfig cfg;
  cfg.samples_per_level = 50000;
  cfg.seed = 2024;
  const EstimatorReport rep = run_simulated_annealing(a, cfg);

  CHECK(rep.n == 3);
  CHECK(rep.mode == "sa");
  CHECK(rep.r == 16);
  CHECK(rep.N == 50000);
  CHECK_FALSE(rep.T.has_value());
  CHECK_FALSE(rep.estimate_est2.has_value());
  CHECK(rep.resample_steps.empty());
  CHECK(rep.ess_trace.empty());
  REQUIRE(int(rep.lambda_trace.size()) == 16);
  for (double lambda : rep.lambda_trace) {
    CHECK(lambda > 0.0);
    CHECK(lambda <= 1.0 + 1e-12);  // cooling can only shrink the normalizer
  }
  CAPTURE(rep.estimate_est1);
  // Long chains at every level: the estimate should land close to 43/18.
  CHECK(std::abs(rep.estimate_est1 - target) / target < 0.05);
  CHECK(rep.estimate_est1 == doctest::Approx(6.0 * std::exp(rep.log_scale_accumulator))
                                 .epsilon(1e-12));
  CHECK(rep.linear_gamma_product ==
        doctest::Approx(std::exp(rep.log_scale_accumulator)).epsilon(1e-9));
}

TEST_CASE("self-estimated weights also anneal to a sane value with long chains") {
  const BinaryMatrix a = toy3();
  const double target = double(permanent_exact_activity(a, 1.0 / 6.0));

  SaConfig cfg;
  cfg.samples_per_level = 50000;
  cfg.seed = 99;
  cfg.weights = SaWeightSource::kAdaptiveFromSamples;
  const EstimatorReport rep = run_simulated_annealing(a, cfg);
  CAPTURE(rep.estimate_est1);
  CHECK(rep.estimate_est1 > 0.0);
  CHECK(std::isfinite(rep.estimate_est1));
  // Correlated samples and estimated tables: accept a loose band around 43/18.
  CHECK(std::abs(rep.estimate_est1 - target) / target < 0.5);
}

TEST_CASE("annealing runs are reproducible and seed-sensitive") {
  const BinaryMatrix a = toy3();
  SaConfig cfg;
  cfg.samples_per_level = 2000;
  cfg.seed = 31;
  const EstimatorReport first = run_simulated_annealing(a, cfg);
  const EstimatorReport second = run_simulated_annealing(a, cfg);
  CHECK(first.estimate_est1 == second.estimate_est1);
  CHECK(first.lambda_trace == second.lambda_trace);

  cfg.seed = 32;
  CHECK(run_simulated_annealing(a, cfg).estimate_est1 != first.estimate_est1);
}

TEST_CASE("burn-in and sweep overrides are honored without breaking the estimate") {
  const BinaryMatrix a = toy3();
  SaConfig cfg;
  cfg.samples_per_level = 500;
  cfg.burn_in = 0;
  cfg.sweeps = 1;
  cfg.seed = 8;
  const EstimatorReport rep = run_simulated_annealing(a, cfg);
  CHECK(std::isfinite(rep.estimate_est1));
  CHECK(rep.estimate_est1 > 0.0);
}

TEST_CASE("annealing validates its configuration") {
  const BinaryMatrix a = toy3();
  SaConfig cfg;
  cfg.samples_per_level = 0;
  CHECK_THROWS_AS(run_simulated_annealing(a, cfg), ValidationError);
  cfg.samples_per_level = 10;
  cfg.delta = 0.0;
  CHECK_THROWS_AS(run_simulated_annealing(a, cfg), ValidationError);

  // Exact tables are enumerative, hence guarded.
  BinaryMatrix big;
  big.a.setOnes(8, 8);
  SaConfig big_cfg;
  big_cfg.samples_per_level = 10;
  big_cfg.r_override = 2;
  CHECK_THROWS_AS(run_simulated_annealing(big, big_cfg), GuardError);
  // The self-estimating variant has no such limit.
  big_cfg.weights = SaWeightSource::kAdaptiveFromSamples;
  CHECK_NOTHROW(run_simulated_annealing(big, big_cfg));
}

TEST_CASE("the annealing report serializes with null population fields") {
  const BinaryMatrix a = toy3();
  SaConfig cfg;
  cfg.samples_per_level = 200;
  cfg.seed = 12;
  const auto j = nlohmann::json::parse(report_to_json(run_simulated_annealing(a, cfg)));
  CHECK(j.at("mode") == "sa");
  CHECK(j.at("T").is_null());
  CHECK(j.at("estimate_est2").is_null());
  CHECK(j.at("N") == 200);
  CHECK(j.at("resample_steps").empty());
}
