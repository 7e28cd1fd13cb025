#include "permsmc/smc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "json.hpp"

#include "permsmc/common.hpp"

namespace permsmc {
namespace {

double resolve_threshold(const SmcConfig& cfg) {
  const auto N = static_cast<double>(cfg.particles);
  double T = cfg.ess_threshold;
  if (T < 0.0) T = std::max(1.0, N / 2.0);
  if (!(T >= 1.0) || !(T > 0.0) || T > N) {
    throw ValidationError("ess_threshold must lie in [1, N]");
  }
  return T;
}

// T = 1 is the resample-every-step regime of the convergence analysis; the
// literal trigger ESS < 1 would never fire since ESS >= 1 by construction.
bool resample_due(double ess_value, double T) { return T == 1.0 || ess_value < T; }

WeightTable constant_table(int n, int p, double value, WeightProvenance prov) {
  WeightTable w;
  w.p = p;
  w.provenance = prov;
  w.values = Eigen::MatrixXd::Constant(n, n, value);
  return w;
}

WeightTable user_table(const SmcConfig& cfg, int n, int p) {
  const Eigen::MatrixXd& values = cfg.user_tables[p];
  if (values.rows() != n || values.cols() != n || (values.array() <= 0.0).any()) {
    throw ValidationError("user weight table " + std::to_string(p) +
                          " must be n x n with strictly positive entries");
  }
  WeightTable w;
  w.p = p;
  w.provenance = WeightProvenance::kUser;
  w.values = values;
  return w;
}

void validate_config(const SmcConfig& cfg, const ActivitySchedule& s) {
  if (cfg.particles < 1) throw ValidationError("particles must be >= 1");
  if (!(cfg.delta > 0.0)) throw ValidationError("delta must be > 0");
  if (cfg.sweeps < 0) throw ValidationError("sweeps must be >= 0");
  if (cfg.threads < 1) throw ValidationError("threads must be >= 1");
  if (cfg.mode == SmcMode::kUser &&
      cfg.user_tables.size() != static_cast<std::size_t>(s.r) + 1) {
    throw ValidationError("user mode needs exactly r + 1 weight tables");
  }
}

double factorial_double(int n) {
  return std::exp(std::lgamma(n + 1.0));
}

}  // namespace

std::string to_string(SmcMode mode) {
  switch (mode) {
    case SmcMode::kAdaptive: return "adaptive";
    case SmcMode::kIdeal: return "ideal";
    case SmcMode::kUser: return "user";
  }
  return "?";
}

ParticleSystem init_particles(const BinaryMatrix& a, const ActivitySchedule& /*s*/,
                              const SmcConfig& cfg) {
  const int n = a.n();
  const auto N = cfg.particles;

  WeightTable w0 = cfg.mode == SmcMode::kUser
                       ? user_table(cfg, n, 0)
                       : constant_table(n, 0, static_cast<double>(n), WeightProvenance::kIdeal);

  // Class masses under eta_0 (all activities are 1): the perfect class is
  // proportional to n! * 1 and each N(u,v) to (n-1)! * w0(u,v); dividing by
  // (n-1)! gives atoms (n; w0(u,v)...). Cell 0 encodes the perfect class.
  std::vector<double> cum(1 + static_cast<std::size_t>(n) * n);
  double total = static_cast<double>(n);
  cum[0] = total;
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      total += w0.values(u, v);
      cum[1 + u * n + v] = total;
    }
  }

  ParticleSystem ps;
  ps.p = 0;
  ps.matchings.resize(N);
  ps.nonedge_counts.resize(N);
  ps.weights = Eigen::VectorXd::Ones(N);
  ps.weight_tables.push_back(std::move(w0));

  std::vector<std::int32_t> perm(n);
  for (std::int64_t i = 0; i < N; ++i) {
    Engine g = make_engine(cfg.seed, rng_stage::kInit, static_cast<std::uint64_t>(i));
    const double x = uniform01(g) * total;
    const auto cell = static_cast<int>(
        std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    Matching& m = ps.matchings[i];
    if (cell == 0) {
      perm.resize(n);
      random_permutation(g, perm);
      m.col_of_row = perm;
      m.hole_u = m.hole_v = -1;
    } else {
      const int u = (cell - 1) / n;
      const int v = (cell - 1) % n;
      perm.resize(n - 1);
      random_permutation(g, perm);  // positions into the reduced column list
      m.col_of_row.assign(n, -1);
      int row = 0;
      for (int ri = 0; ri < n; ++ri) {
        if (ri == u) continue;
        int col = perm[row++];
        if (col >= v) ++col;  // skip the hole column
        m.col_of_row[ri] = col;
      }
      m.hole_u = u;
      m.hole_v = v;
    }
    ps.nonedge_counts[i] = nonedge_count(a, m);
  }
  return ps;
}

WeightTable adaptive_weight_update(const ParticleSystem& ps, const ActivitySchedule& s,
                                   double delta) {
  const int n = s.n;
  const int p = ps.p;
  if (p + 1 > s.r) throw ValidationError("adaptive_weight_update: already at the final step");
  const WeightTable& cur = ps.weight_tables.back();
  const double ratio_c = s.nonedge_activity(p + 1) / s.nonedge_activity(p);

  const double weight_sum = ps.weights.sum();
  if (!(weight_sum > 0.0)) throw ValidationError("adaptive_weight_update: weights sum to zero");

  // Self-normalized class sums of the activity ratio (one pass, bucketed by
  // hole pair). Normalizing keeps delta's strength independent of N and makes
  // the (delta+1)/delta ceiling hold at any weight scale.
  double sum_perfect = 0.0;
  Eigen::MatrixXd sum_near = Eigen::MatrixXd::Zero(n, n);
  const auto N = static_cast<std::int64_t>(ps.matchings.size());
  for (std::int64_t i = 0; i < N; ++i) {
    const double term = ps.weights(i) / weight_sum * ipow(ratio_c, ps.nonedge_counts[i]);
    const Matching& m = ps.matchings[i];
    if (m.is_perfect()) {
      sum_perfect += term;
    } else {
      sum_near(m.hole_u, m.hole_v) += term;
    }
  }

  WeightTable next;
  next.p = p + 1;
  next.provenance = WeightProvenance::kAdaptive;
  next.values.resize(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      next.values(u, v) =
          (sum_perfect + delta) / (sum_near(u, v) / cur.values(u, v) + delta);
    }
  }
  return next;
}

std::vector<double> incremental_weights(ParticleSystem& ps, const ActivitySchedule& s,
                                        const WeightTable& next) {
  const int p = ps.p;
  if (next.p != p + 1) throw ValidationError("incremental_weights: table is not for step p + 1");
  const WeightTable& cur = ps.weight_tables.back();
  const double ratio_c = s.nonedge_activity(p + 1) / s.nonedge_activity(p);

  const auto N = static_cast<std::int64_t>(ps.matchings.size());
  std::vector<double> g(N);
  for (std::int64_t i = 0; i < N; ++i) {
    const Matching& m = ps.matchings[i];
    double gi = ipow(ratio_c, ps.nonedge_counts[i]);
    if (!m.is_perfect()) {
      gi *= next.values(m.hole_u, m.hole_v) / cur.values(m.hole_u, m.hole_v);
    }
    g[i] = gi;
    ps.weights(i) *= gi;
  }
  return g;
}

double ess(const Eigen::VectorXd& weights) {
  const double s = weights.sum();
  return s * s / weights.squaredNorm();
}

void multinomial_resample(ParticleSystem& ps, Engine& g) {
  const auto N = static_cast<std::int64_t>(ps.matchings.size());
  std::vector<double> cum(N);
  double acc = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    acc += ps.weights(i);
    cum[i] = acc;
  }
  std::vector<Matching> new_m(N);
  std::vector<int> new_k(N);
  for (std::int64_t i = 0; i < N; ++i) {
    const double x = uniform01(g) * acc;
    auto idx = static_cast<std::int64_t>(
        std::upper_bound(cum.begin(), cum.end(), x) - cum.begin());
    if (idx >= N) idx = N - 1;
    new_m[i] = ps.matchings[idx];
    new_k[i] = ps.nonedge_counts[idx];
  }
  ps.matchings = std::move(new_m);
  ps.nonedge_counts = std::move(new_k);
}

EstimatorReport run_smc(const BinaryMatrix& a, const SmcConfig& cfg,
                        ParticleSystem* final_out) {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = a.n();
  const ActivitySchedule s = build_schedule(a, cfg.step_factor, cfg.r_override);
  validate_config(cfg, s);
  const double T = resolve_threshold(cfg);
  const auto N = cfg.particles;

  std::vector<WeightTable> ideal_tables;
  if (cfg.mode == SmcMode::kIdeal) {
    check_size_guard(n, 7, "ideal-weight mode");
    ideal_tables = ideal_weight_tables(compute_class_stats(a), s);
  }

  ParticleSystem ps = init_particles(a, s, cfg);

  EstimatorReport rep;
  rep.n = n;
  rep.mode = to_string(cfg.mode);
  rep.N = N;
  rep.T = T;
  rep.delta = cfg.delta;
  rep.seed = cfg.seed;
  rep.r = s.r;
  rep.ess_trace.reserve(s.r);
  rep.lambda_trace.reserve(s.r);

  double log_acc = 0.0;
  double linear_prod = 1.0;

  for (int p_new = 1; p_new <= s.r; ++p_new) {
    WeightTable next;
    switch (cfg.mode) {
      case SmcMode::kAdaptive: next = adaptive_weight_update(ps, s, cfg.delta); break;
      case SmcMode::kIdeal: next = ideal_tables[p_new]; break;
      case SmcMode::kUser: next = user_table(cfg, n, p_new); break;
    }

    const double sum_before = ps.weights.sum();
    incremental_weights(ps, s, next);
    ps.weight_tables.push_back(std::move(next));
    ps.p = p_new;

    const double sum_after = ps.weights.sum();
    rep.lambda_trace.push_back(sum_after / sum_before);
    const double e = ess(ps.weights);
    rep.ess_trace.push_back(e);

    if (resample_due(e, T)) {
      const double premean = sum_after / static_cast<double>(N);
      rep.resample_steps.push_back(p_new);
      rep.resample_premeans.push_back(premean);
      log_acc += std::log(premean);
      linear_prod *= premean;
      Engine g = make_engine(cfg.seed, rng_stage::kResample, static_cast<std::uint64_t>(p_new));
      multinomial_resample(ps, g);
      ps.weights.setOnes();
    }

    KernelContext ctx{&s, &ps.weight_tables.back(), p_new, cfg.sweeps, cfg.lazy};
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(cfg.threads) if (cfg.threads > 1)
#endif
    for (std::int64_t i = 0; i < N; ++i) {
      Engine g = make_engine(cfg.seed, rng_stage::kMutate, static_cast<std::uint64_t>(p_new),
                             static_cast<std::uint64_t>(i));
      mh_sweeps_inplace(ctx, ps.matchings[i], ps.nonedge_counts[i], g);
    }
  }

  // Mass accumulated since the last resampling still belongs in the product.
  if (rep.resample_steps.empty() || rep.resample_steps.back() != s.r) {
    const double final_mean = ps.weights.mean();
    log_acc += std::log(final_mean);
    linear_prod *= final_mean;
  }

  rep.log_scale_accumulator = log_acc;
  rep.estimate_gamma = std::exp(log_acc);
  rep.linear_gamma_product = linear_prod;
  rep.estimate_est1 = factorial_double(n) * rep.estimate_gamma;
  rep.estimate_est2 = estimate_est2(rep, ps, a);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (final_out != nullptr) *final_out = std::move(ps);
  return rep;
}

double estimate_est1(const EstimatorReport& rep) {
  return factorial_double(rep.n) * std::exp(rep.log_scale_accumulator);
}

double estimate_est2(const EstimatorReport& rep, const ParticleSystem& final_ps,
                     const BinaryMatrix& a) {
  const int n = a.n();
  const auto N = static_cast<std::int64_t>(final_ps.matchings.size());
  double hit = 0.0;
  for (std::int64_t i = 0; i < N; ++i) {
    if (final_ps.matchings[i].is_perfect() && final_ps.nonedge_counts[i] == 0) {
      hit += final_ps.weights(i);
    }
  }
  const double fraction = hit / final_ps.weights.sum();
  return factorial_double(n) * (static_cast<double>(n) * n + 1.0) *
         std::exp(rep.log_scale_accumulator) * fraction;
}

std::string report_to_json(const EstimatorReport& rep) {
  nlohmann::ordered_json j;
  j["n"] = rep.n;
  j["mode"] = rep.mode;
  j["N"] = rep.N;
  if (rep.T.has_value()) {
    j["T"] = *rep.T;
  } else {
    j["T"] = nullptr;
  }
  j["delta"] = rep.delta;
  j["seed"] = rep.seed;
  j["r"] = rep.r;
  j["estimate_est1"] = rep.estimate_est1;
  if (rep.estimate_est2.has_value()) {
    j["estimate_est2"] = *rep.estimate_est2;
  } else {
    j["estimate_est2"] = nullptr;
  }
  j["log_gamma"] = rep.log_scale_accumulator;
  j["ess_trace"] = rep.ess_trace;
  j["lambda_trace"] = rep.lambda_trace;
  j["resample_steps"] = rep.resample_steps;
  j["wall_time_s"] = rep.wall_time_s;
  return j.dump(2);
}

}  // namespace permsmc
