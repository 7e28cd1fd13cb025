// Geometric cooling schedule for pair activities.
//
// Edges of the matrix keep activity 1 at every step. Non-edges start at 1 and
// cool by a fixed factor per step, floored at 1/n!: c_p = max(step_factor^p,
// 1/n!), with r the first step at which the floor is reached. The default
// factor 2^(-1/(2n)) keeps every per-matching ratio phi_{p+1}(M)/phi_p(M)
// inside [2^(-1/2), 1] (a matching holds at most n pairs), which is what keeps
// incremental weights bounded.
#pragma once

#include <string>
#include <vector>

#include "permsmc/binary_matrix.hpp"
#include "permsmc/matching.hpp"

namespace permsmc {

// x^k by repeated multiplication, k >= 0 small; deterministic on every libm.
inline double ipow(double x, int k) {
  double y = 1.0;
  for (int i = 0; i < k; ++i) y *= x;
  return y;
}

struct ActivitySchedule {
  BinaryMatrix graph;           // the underlying edge set
  int n = 0;
  int r = 0;
  double step_factor = 0.0;
  std::vector<double> nonedge;  // c_p for p = 0..r (c_0 = 1, c_r = 1/n!)

  // Per-pair activity phi_p(u, v).
  double phi(int p, int u, int v) const { return graph.edge(u, v) ? 1.0 : nonedge[p]; }
  double nonedge_activity(int p) const { return nonedge[p]; }
};

double default_step_factor(int n);  // 2^(-1/(2n))

// Builds the schedule; step_factor = 0 selects the default, r_override >= 0
// replaces the computed r (the floor still applies for p past the natural r).
ActivitySchedule build_schedule(const BinaryMatrix& a, double step_factor = 0.0,
                                int r_override = -1);

// phi_p(M) = prod of per-pair activities = c_p^(non-edge count of M).
double phi_of_matching(const ActivitySchedule& s, int p, const Matching& m);

// {"n":..., "r":..., "factor":..., "phi_final_nonedge":...}
std::string schedule_to_json(const ActivitySchedule& s);

}  // namespace permsmc
