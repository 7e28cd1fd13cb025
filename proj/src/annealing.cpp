#include "permsmc/annealing.hpp"

#include <chrono>
#include <cmath>

#include "permsmc/common.hpp"
#include "permsmc/kernel.hpp"

namespace permsmc {
namespace {

struct SampleRecord {
  std::int16_t hole_u;  // -1 for perfect
  std::int16_t hole_v;
  std::int16_t nonedges;
};

}  // namespace

EstimatorReport run_simulated_annealing(const BinaryMatrix& a, const SaConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = a.n();
  if (cfg.samples_per_level < 1) throw ValidationError("samples_per_level must be >= 1");
  if (!(cfg.delta > 0.0)) throw ValidationError("delta must be > 0");

  const ActivitySchedule s = build_schedule(a, cfg.step_factor, cfg.r_override);
  const int sweeps = cfg.sweeps > 0 ? cfg.sweeps : n * n;
  const std::int64_t burn_in = cfg.burn_in >= 0 ? cfg.burn_in : 10ll * n * n;

  std::vector<WeightTable> ideal_tables;
  if (cfg.weights == SaWeightSource::kIdeal) {
    check_size_guard(n, 7, "ideal-weight annealing");
    ideal_tables = ideal_weight_tables(compute_class_stats(a), s);
  }

  // Current table w_{k-1}; the adaptive source starts from the exact w_0 = n.
  WeightTable cur;
  if (cfg.weights == SaWeightSource::kIdeal) {
    cur = ideal_tables.empty() ? WeightTable{} : ideal_tables[0];
  } else {
    cur.p = 0;
    cur.provenance = WeightProvenance::kAdaptive;
    cur.values = Eigen::MatrixXd::Constant(n, n, static_cast<double>(n));
  }

  EstimatorReport rep;
  rep.n = n;
  rep.mode = "sa";
  rep.N = cfg.samples_per_level;
  rep.T = std::nullopt;
  rep.delta = cfg.delta;
  rep.seed = cfg.seed;
  rep.r = s.r;
  rep.lambda_trace.reserve(s.r);

  // Initial state: exact draw from eta_0 (level index 0 keys its substream).
  SmcConfig one;
  one.particles = 1;
  one.seed = substream_key(cfg.seed, rng_stage::kAnneal, 0);
  Matching state = init_particles(a, s, one).matchings[0];
  int k_cache = nonedge_count(a, state);

  double log_acc = 0.0;
  double linear_prod = 1.0;
  std::vector<SampleRecord> records(cfg.samples_per_level);

  for (int level = 1; level <= s.r; ++level) {
    const int p_target = level - 1;  // the chain targets eta_{level-1}
    Engine g = make_engine(cfg.seed, rng_stage::kAnneal, static_cast<std::uint64_t>(level));
    KernelContext ctx{&s, &cur, p_target, /*sweeps=*/1, cfg.lazy};

    for (std::int64_t t = 0; t < burn_in; ++t) mh_sweeps_inplace(ctx, state, k_cache, g);
    for (std::int64_t j = 0; j < cfg.samples_per_level; ++j) {
      for (int t = 0; t < sweeps; ++t) mh_sweeps_inplace(ctx, state, k_cache, g);
      records[j] = {static_cast<std::int16_t>(state.hole_u),
                    static_cast<std::int16_t>(state.hole_v),
                    static_cast<std::int16_t>(k_cache)};
    }

    const double ratio_c = s.nonedge_activity(level) / s.nonedge_activity(level - 1);

    WeightTable next;
    if (cfg.weights == SaWeightSource::kIdeal) {
      next = ideal_tables[level];
    } else {
      // Same table update as the SMC engine, with the level's (correlated)
      // samples standing in for the weighted population.
      double sum_perfect = 0.0;
      Eigen::MatrixXd sum_near = Eigen::MatrixXd::Zero(n, n);
      const double norm = 1.0 / static_cast<double>(cfg.samples_per_level);
      for (const SampleRecord& rec : records) {
        const double term = norm * ipow(ratio_c, rec.nonedges);
        if (rec.hole_u < 0) {
          sum_perfect += term;
        } else {
          sum_near(rec.hole_u, rec.hole_v) += term;
        }
      }
      next.p = level;
      next.provenance = WeightProvenance::kAdaptive;
      next.values.resize(n, n);
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          next.values(u, v) = (sum_perfect + cfg.delta) /
                              (sum_near(u, v) / cur.values(u, v) + cfg.delta);
        }
      }
    }

    // Z_level/Z_{level-1} = E_{eta_{level-1}}[Phi_level/Phi_{level-1}].
    double ratio_sum = 0.0;
    for (const SampleRecord& rec : records) {
      double gi = ipow(ratio_c, rec.nonedges);
      if (rec.hole_u >= 0) gi *= next.values(rec.hole_u, rec.hole_v) / cur.values(rec.hole_u, rec.hole_v);
      ratio_sum += gi;
    }
    const double ratio = ratio_sum / static_cast<double>(cfg.samples_per_level);
    rep.lambda_trace.push_back(ratio);
    log_acc += std::log(ratio);
    linear_prod *= ratio;
    cur = std::move(next);
  }

  rep.log_scale_accumulator = log_acc;
  rep.estimate_gamma = std::exp(log_acc);
  rep.linear_gamma_product = linear_prod;
  rep.estimate_est1 = std::exp(std::lgamma(n + 1.0) + log_acc);
  rep.estimate_est2 = std::nullopt;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace permsmc
