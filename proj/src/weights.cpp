#include "permsmc/weights.hpp"

#include <stdexcept>

#include "permsmc/common.hpp"

namespace permsmc {
namespace {

double eval_hist(const std::vector<std::int64_t>& hist, double c) {
  double acc = 0.0;
  double cp = 1.0;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    acc += static_cast<double>(hist[k]) * cp;
    cp *= c;
  }
  return acc;
}

}  // namespace

double big_phi(const ActivitySchedule& s, int p, const WeightTable& w, const Matching& m) {
  const double phi = phi_of_matching(s, p, m);
  return m.is_perfect() ? phi : phi * w.values(m.hole_u, m.hole_v);
}

double xi_exact(const MatchingClassStats& st, const ActivitySchedule& s, int p, ClassKey cls) {
  const double c = s.nonedge_activity(p);
  if (cls == kPerfectClass) return eval_hist(st.perfect, c);
  return eval_hist(st.near_hist(cls.first, cls.second), c);
}

WeightTable ideal_weights(const MatchingClassStats& st, const ActivitySchedule& s, int p) {
  const int n = st.n;
  WeightTable w;
  w.p = p;
  w.provenance = WeightProvenance::kIdeal;
  w.values.resize(n, n);
  const double xi_perfect = xi_exact(st, s, p, kPerfectClass);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      w.values(u, v) = xi_perfect / xi_exact(st, s, p, {u, v});
    }
  }
  return w;
}

std::vector<WeightTable> ideal_weight_tables(const MatchingClassStats& st,
                                             const ActivitySchedule& s) {
  std::vector<WeightTable> tables;
  tables.reserve(s.r + 1);
  for (int p = 0; p <= s.r; ++p) tables.push_back(ideal_weights(st, s, p));
  return tables;
}

double z_exact(const MatchingClassStats& st, const ActivitySchedule& s, int p,
               const WeightTable& w) {
  double z = xi_exact(st, s, p, kPerfectClass);
  for (int u = 0; u < st.n; ++u) {
    for (int v = 0; v < st.n; ++v) {
      z += w.values(u, v) * xi_exact(st, s, p, {u, v});
    }
  }
  return z;
}

EtaTable eta_exact(const ActivitySchedule& s, int p, const WeightTable& w) {
  check_size_guard(s.n, 5, "eta_exact");
  EtaTable out;
  out.space = build_state_space(s.n);
  const auto n_states = static_cast<Eigen::Index>(out.space.states.size());
  out.prob.resize(n_states);
  for (Eigen::Index i = 0; i < n_states; ++i) {
    out.prob(i) = big_phi(s, p, w, out.space.states[i]);
  }
  out.z = out.prob.sum();
  if (!(out.z > 0.0)) throw std::logic_error("eta_exact: vanishing normalizer");
  out.prob /= out.z;
  return out;
}

}  // namespace permsmc
