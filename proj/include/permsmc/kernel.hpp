// Metropolis-Hastings mutation kernel on the matching state space.
//
// Proposal: draw (u, v) uniformly on rows x columns. From a perfect matching,
// drawing a matched pair removes it (hole pair becomes (u, v)); from a
// near-perfect matching with holes (hu, hv), drawing the hole pair adds it,
// drawing (hu, v) with v matched slides the conflicting pair out column-wise,
// drawing (u, hv) with u matched slides row-wise, and any other draw proposes
// no change. Each state transformation is its own inverse under one draw, so
// the proposal is symmetric and acceptance is min(1, Phi_p(m')/Phi_p(m)).
#pragma once

#include <Eigen/Core>

#include "permsmc/rng.hpp"
#include "permsmc/schedule.hpp"
#include "permsmc/weights.hpp"

namespace permsmc {

struct KernelContext {
  const ActivitySchedule* schedule = nullptr;
  const WeightTable* weights = nullptr;  // table for this step
  int p = 0;
  int sweeps = 0;     // proposals per mh_step; 0 selects n^2
  bool lazy = false;  // hold with probability 1/2 before each proposal
};

// The deterministic state transformation for draw (u, v) (no acceptance).
Matching propose(const Matching& m, int u, int v);

// `sweeps` accept/reject proposals applied to m.
Matching mh_step(const KernelContext& ctx, Matching m, Engine& g);

// In-place fast path used by the SMC engine; k caches the non-edge count of m
// and is kept current across accepted moves.
void mh_sweeps_inplace(const KernelContext& ctx, Matching& m, int& k, Engine& g);

// Exact single-proposal transition matrix over the canonical state space
// (build_state_space order). Acceptance ratios are evaluated from full Phi
// products, independently of the sampler's incremental-ratio fast path, so
// the two implementations cross-validate. Guard: n <= 4.
Eigen::MatrixXd transition_matrix(const KernelContext& ctx);

// 1 - max |eigenvalue != 1| of the transition matrix, computed through the
// symmetrized form D^(1/2) P D^(-1/2); verifies reversibility w.r.t. the
// exact eta_p first. Guard: n <= 4. Note the non-lazy n = 1 chain is
// 2-periodic and correctly reports gap 0; pass lazy = true there.
double spectral_gap(const KernelContext& ctx);

}  // namespace permsmc
