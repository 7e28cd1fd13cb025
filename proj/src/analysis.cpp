#include "permsmc/analysis.hpp"

#include <cmath>
#include <limits>

#include "permsmc/common.hpp"
#include "permsmc/weights.hpp"

namespace permsmc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double relvar_of(std::span<const double> xs) {
  const auto m = static_cast<double>(xs.size());
  const double mu = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return ss / (m - 1.0) / (mu * mu);
}

}  // namespace

double relative_variance(std::span<const double> xs) {
  if (xs.size() < 2) throw ValidationError("relative_variance needs at least 2 samples");
  return relvar_of(xs);
}

double relative_variance_jackknife_se(std::span<const double> xs) {
  const auto m = xs.size();
  if (m < 3) throw ValidationError("jackknife SE needs at least 3 samples");
  std::vector<double> stat(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> rest;
    rest.reserve(m - 1);
    for (std::size_t j = 0; j < m; ++j)
      if (j != i) rest.push_back(xs[j]);
    stat[i] = relvar_of(rest);
  }
  const double mu = mean_of(stat);
  double ss = 0.0;
  for (double v : stat) ss += (v - mu) * (v - mu);
  const auto dm = static_cast<double>(m);
  return std::sqrt((dm - 1.0) / dm * ss);
}

ComplexityConstants complexity_constants(int n, double c_poincare) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (!(c_poincare > 0.0)) throw ValidationError("c_poincare must be > 0");
  ComplexityConstants c;
  c.n = n;
  c.c_poincare = c_poincare;
  const double n2 = static_cast<double>(n) * n;
  c.tau = 8.0 * (n2 + 1.0) / n2;
  const double x = 1.0 - 1.0 / (c_poincare * n2);
  c.rho = x * x;
  c.condition = c.tau * c.tau * c.tau * (1.0 - c.rho) < 1.0;
  if (c.condition) {
    const double denom = 1.0 - (1.0 - c.rho) * c.tau * c.tau * c.tau;
    const double base = std::pow(c.tau, 0.75) / denom;
    c.cbar = base * base;
  } else {
    c.cbar = kNaN;
  }
  return c;
}

double theorem2_min_particles(const ComplexityConstants& c, int r) {
  if (!c.condition) return kNaN;
  return 2.0 * c.cbar * (r + 1.0) * (3.0 + c.cbar * c.cbar);
}

double theorem2_bound(const ComplexityConstants& c, int r, double N) {
  if (!c.condition) return kNaN;
  if (!(N > theorem2_min_particles(c, r))) return kNaN;
  const double lead = (r + 1.0) * c.cbar * c.cbar / N;
  const double correction = 1.0 + 2.0 * (r + 1.0) * c.cbar * (3.0 + c.cbar * c.cbar) / N;
  return lead * correction;
}

Lemma1Report lemma1_ratio_check(const BinaryMatrix& a, double step_factor, int r_override) {
  const int n = a.n();
  check_size_guard(n, 5, "lemma1_ratio_check");
  const ActivitySchedule s = build_schedule(a, step_factor, r_override);
  const MatchingClassStats st = compute_class_stats(a);

  Lemma1Report rep;
  rep.n = n;
  rep.r = s.r;
  const double n2 = static_cast<double>(n) * n;
  rep.ratio_bound = 8.0 * (n2 + 1.0) / n2;
  rep.lambda_bound = n2 / (4.0 * std::sqrt(2.0) * (n2 + 1.0));
  rep.sup_g_bound = std::sqrt(2.0);
  rep.all_ok = true;

  // Smallest non-edge count present in a histogram; G is maximized there
  // since the per-step activity ratio is <= 1.
  const auto min_k = [](const std::vector<std::int64_t>& hist) {
    for (std::size_t k = 0; k < hist.size(); ++k)
      if (hist[k] > 0) return static_cast<int>(k);
    return -1;  // empty class (cannot happen on the completed graph)
  };

  std::vector<WeightTable> tables = ideal_weight_tables(st, s);
  for (int p = 0; p < s.r; ++p) {
    const double ratio_c = s.nonedge_activity(p + 1) / s.nonedge_activity(p);
    Lemma1Row row;
    row.p = p;
    // Ideal weights make Z_p = (n^2+1) Xi_p(M-class), so lambda collapses to
    // the one-step Xi ratio of the perfect class.
    row.lambda = xi_exact(st, s, p + 1, kPerfectClass) / xi_exact(st, s, p, kPerfectClass);

    double sup_g = ipow(ratio_c, min_k(st.perfect));  // perfect class
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        const double wr = tables[p + 1].values(u, v) / tables[p].values(u, v);
        sup_g = std::max(sup_g, wr * ipow(ratio_c, min_k(st.near_hist(u, v))));
      }
    }
    row.sup_g = sup_g;
    row.ratio = sup_g / row.lambda;
    row.ratio_ok = row.ratio <= rep.ratio_bound;
    row.lambda_ok = row.lambda >= rep.lambda_bound;
    row.sup_g_ok = row.sup_g <= rep.sup_g_bound;
    rep.all_ok = rep.all_ok && row.ratio_ok && row.lambda_ok && row.sup_g_ok;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace permsmc
