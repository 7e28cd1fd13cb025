// Adaptive sequential Monte Carlo over the matching state space.
//
// The sampler tracks N weighted particles through the cooling schedule. Per
// step: (1) produce the next weight table -- adaptively from the current
// population, exactly (ideal), or user-supplied; (2) multiply each particle's
// weight by the incremental ratio G = Phi_{p+1}/Phi_p; (3) if the effective
// sample size drops below the threshold, record the mean weight, resample
// multinomially and reset weights to 1; (4) move every particle with the
// Metropolis kernel invariant for the new target. The product of recorded
// mean weights estimates Z_r/Z_0, giving estimate_est1 = n! * product
// (~ per(A) + completion mass) and est2, which additionally conditions on the
// final population's perfect matchings of the original graph and is
// asymptotically exact for per(A).
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permsmc/binary_matrix.hpp"
#include "permsmc/kernel.hpp"
#include "permsmc/matching.hpp"
#include "permsmc/rng.hpp"
#include "permsmc/schedule.hpp"
#include "permsmc/weights.hpp"

namespace permsmc {

enum class SmcMode { kAdaptive, kIdeal, kUser };

std::string to_string(SmcMode mode);

struct SmcConfig {
  SmcMode mode = SmcMode::kAdaptive;
  std::int64_t particles = 1000;  // N
  double ess_threshold = -1.0;    // T in [1, N]; < 0 selects N/2. T = 1 means
                                  // "resample every step" (the analysis regime;
                                  // ESS >= 1 always, so the literal trigger
                                  // ESS < 1 would never fire).
  double delta = 1e-10;           // regularizer in the adaptive table update
  int sweeps = 0;                 // kernel proposals per mutation; 0 -> n^2
  std::uint64_t seed = 1;
  double step_factor = 0.0;       // 0 -> 2^(-1/(2n))
  int r_override = -1;
  bool lazy = false;
  int threads = 1;                // worker threads for mutation/repeats
  std::vector<Eigen::MatrixXd> user_tables;  // kUser: one table per step 0..r
};

struct ParticleSystem {
  int p = 0;                        // current step
  std::vector<Matching> matchings;  // N particles
  std::vector<int> nonedge_counts;  // cached k per particle
  Eigen::VectorXd weights;          // omega (reset to 1 at resampling)
  std::vector<WeightTable> weight_tables;  // w_0 .. w_p history
};

struct EstimatorReport {
  int n = 0;
  std::string mode;
  std::int64_t N = 0;
  std::optional<double> T;  // absent for the annealing baseline
  double delta = 0.0;
  std::uint64_t seed = 0;
  int r = 0;

  double log_scale_accumulator = 0.0;  // log of the mean-weight product
  double estimate_gamma = 1.0;         // exp(log_scale_accumulator) ~ Z_r/Z_0
  double estimate_est1 = 0.0;          // n! * estimate_gamma (inf is flagged, not fatal)
  std::optional<double> estimate_est2;
  double linear_gamma_product = 1.0;   // same product in linear arithmetic

  std::vector<double> ess_trace;       // post-reweight ESS, steps 1..r
  std::vector<double> lambda_trace;    // self-normalized mean of G per step
  std::vector<int> resample_steps;     // s_1 < ... < s_l
  std::vector<double> resample_premeans;  // (1/N) sum omega at each s_k, pre-reset
  double wall_time_s = 0.0;
};

// i.i.d. draws from eta_0. With the exact ideal w_0 (= n on every pair) the
// class masses are uniform over the n^2 + 1 classes; general w_0 tables get a
// categorical class draw. Weights start at 1.
ParticleSystem init_particles(const BinaryMatrix& a, const ActivitySchedule& s,
                              const SmcConfig& cfg);

// Step-2 table: for every hole pair,
//   w_{p+1}(u,v) = (sum_M-class + delta) / (sum_N(u,v)/w_p(u,v) + delta),
// where the sums are self-normalized weighted class sums of the activity
// ratio prod phi_{p+1}/phi_p over the current population. One O(N + n^2) pass.
WeightTable adaptive_weight_update(const ParticleSystem& ps, const ActivitySchedule& s,
                                   double delta);

// G_i = Phi_{p+1}(M_i)/Phi_p(M_i) under (next vs current) tables; multiplies
// the particle weights in place and returns the G values.
std::vector<double> incremental_weights(ParticleSystem& ps, const ActivitySchedule& s,
                                        const WeightTable& next);

// (sum w)^2 / sum w^2, in [1, N].
double ess(const Eigen::VectorXd& weights);

// Multinomial resampling: N categorical draws by inverse CDF; weights are the
// caller's to reset. Deterministic given the engine state.
void multinomial_resample(ParticleSystem& ps, Engine& g);

// Full pipeline. final_out, when non-null, receives the terminal population
// (used by estimate_est2 and by tests).
EstimatorReport run_smc(const BinaryMatrix& a, const SmcConfig& cfg,
                        ParticleSystem* final_out = nullptr);

// n! * exp(log_scale_accumulator).
double estimate_est1(const EstimatorReport& rep);

// n! (n^2+1) * gamma-product * (weighted fraction of the final population in
// the perfect-matching class of the original graph).
double estimate_est2(const EstimatorReport& rep, const ParticleSystem& final_ps,
                     const BinaryMatrix& a);

// Report JSON: {n, mode, N, T, delta, seed, r, estimate_est1, estimate_est2,
// log_gamma, ess_trace, lambda_trace, resample_steps, wall_time_s}.
std::string report_to_json(const EstimatorReport& rep);

}  // namespace permsmc
