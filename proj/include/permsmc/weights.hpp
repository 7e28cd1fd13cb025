// Weight tables over hole pairs and exact small-n functionals of the targets.
//
// The step-p target is Phi_p(M) = phi_p(M) on perfect matchings and
// phi_p(M) * w_p(u, v) on the near-perfect class N(u, v); eta_p is Phi_p
// normalized by Z_p. Ideal weights w*_p(u,v) = Xi_p(M-class)/Xi_p(N(u,v))
// equalize all n^2 + 1 class masses, so the perfect class always carries mass
// exactly 1/(n^2+1); they are computable exactly for n <= 7 from the
// (class, non-edge-count) histograms.
#pragma once

#include <Eigen/Core>
#include <vector>

#include "permsmc/matching.hpp"
#include "permsmc/schedule.hpp"

namespace permsmc {

enum class WeightProvenance { kIdeal, kAdaptive, kUser };

struct WeightTable {
  int p = 0;
  Eigen::MatrixXd values;  // strictly positive, indexed (hole_u, hole_v)
  WeightProvenance provenance = WeightProvenance::kUser;
};

// Phi_p(M) under the given table.
double big_phi(const ActivitySchedule& s, int p, const WeightTable& w, const Matching& m);

// Xi_p(class) = sum over matchings M of the class (completed graph) of
// phi_p(M), evaluated from histograms as sum_k h[k] c_p^k.
double xi_exact(const MatchingClassStats& st, const ActivitySchedule& s, int p, ClassKey cls);

// w*_p for one step / for every step 0..r of the schedule.
WeightTable ideal_weights(const MatchingClassStats& st, const ActivitySchedule& s, int p);
std::vector<WeightTable> ideal_weight_tables(const MatchingClassStats& st,
                                             const ActivitySchedule& s);

// Z_p = Xi_p(M-class) + sum_{(u,v)} w(u,v) Xi_p(N(u,v)).
double z_exact(const MatchingClassStats& st, const ActivitySchedule& s, int p,
               const WeightTable& w);

// Exact eta_p over the canonical completed state space (guard n <= 5).
struct EtaTable {
  StateSpace space;
  Eigen::VectorXd prob;  // aligned with space.states
  double z = 0.0;        // the normalizer used
};
EtaTable eta_exact(const ActivitySchedule& s, int p, const WeightTable& w);

}  // namespace permsmc
