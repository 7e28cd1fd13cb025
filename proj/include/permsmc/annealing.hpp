// Single-chain simulated-annealing baseline for the same ratio decomposition.
//
// Z_r/Z_0 = prod_k Z_k/Z_{k-1}, with each ratio estimated as the sample mean
// of Phi_k/Phi_{k-1} along an MCMC chain targeting eta_{k-1} (warm-started
// from the previous level's final state). Ratios combine in log space with
// the closed-form Z_0 = n!(n^2+1); the estimate is Z_r-estimate/(n^2+1) and
// is reported through the same EstimatorReport shape as the SMC engine
// (lambda_trace carries the per-level ratio estimates).
#pragma once

#include <cstdint>

#include "permsmc/binary_matrix.hpp"
#include "permsmc/smc.hpp"

namespace permsmc {

enum class SaWeightSource {
  kIdeal,                // exact tables (n <= 7)
  kAdaptiveFromSamples,  // tables estimated from each level's own samples
};

struct SaConfig {
  std::int64_t samples_per_level = 1000;
  std::int64_t burn_in = -1;  // proposals before sampling a level; < 0 -> 10 n^2
  int sweeps = 0;             // proposals between retained samples; 0 -> n^2
  std::uint64_t seed = 1;
  double step_factor = 0.0;
  int r_override = -1;
  double delta = 1e-10;       // regularizer for kAdaptiveFromSamples
  SaWeightSource weights = SaWeightSource::kIdeal;
  bool lazy = false;
};

EstimatorReport run_simulated_annealing(const BinaryMatrix& a, const SaConfig& cfg);

}  // namespace permsmc
