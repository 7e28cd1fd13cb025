#include "permsmc/kernel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "permsmc/common.hpp"

namespace permsmc {
namespace {

// Acceptance ratio Phi_p(m')/Phi_p(m) for the move induced by draw (u, v),
// assembled from the O(1) set of changed pairs. Returns 1 for no-op draws.
double move_ratio(const KernelContext& ctx, const Matching& m, int u, int v) {
  const ActivitySchedule& s = *ctx.schedule;
  const Eigen::MatrixXd& w = ctx.weights->values;
  const int p = ctx.p;

  if (m.is_perfect()) {
    if (m.col_of_row[u] == v) return w(u, v) / s.phi(p, u, v);  // remove (u,v)
    return 1.0;
  }
  const int hu = m.hole_u, hv = m.hole_v;
  if (u == hu && v == hv) return s.phi(p, u, v) / w(u, v);  // add the hole pair
  if (u == hu) {
    // Column slide: v != hv is matched to row wr; add (hu,v), remove (wr,v).
    int wr = -1;
    for (int i = 0; i < m.n(); ++i) {
      if (m.col_of_row[i] == v) {
        wr = i;
        break;
      }
    }
    return s.phi(p, hu, v) / s.phi(p, wr, v) * w(wr, hv) / w(hu, hv);
  }
  if (v == hv) {
    // Row slide: u != hu is matched to column z; add (u,hv), remove (u,z).
    const int z = m.col_of_row[u];
    return s.phi(p, u, hv) / s.phi(p, u, z) * w(hu, z) / w(hu, hv);
  }
  return 1.0;
}

// Applies the move for draw (u, v) in place, keeping the cached non-edge
// count k current. No-op draws leave both untouched.
void apply_move(const ActivitySchedule& s, Matching& m, int& k, int u, int v) {
  const auto bump = [&](int row, int col, int dir) {
    if (!s.graph.edge(row, col)) k += dir;
  };
  if (m.is_perfect()) {
    if (m.col_of_row[u] == v) {
      m.col_of_row[u] = -1;
      m.hole_u = u;
      m.hole_v = v;
      bump(u, v, -1);
    }
    return;
  }
  const int hu = m.hole_u, hv = m.hole_v;
  if (u == hu && v == hv) {
    m.col_of_row[u] = v;
    m.hole_u = m.hole_v = -1;
    bump(u, v, +1);
    return;
  }
  if (u == hu) {
    for (int i = 0; i < m.n(); ++i) {
      if (m.col_of_row[i] == v) {
        m.col_of_row[i] = -1;
        m.col_of_row[hu] = v;
        m.hole_u = i;
        bump(hu, v, +1);
        bump(i, v, -1);
        return;
      }
    }
  }
  if (v == hv && m.col_of_row[u] >= 0) {
    const int z = m.col_of_row[u];
    m.col_of_row[u] = hv;
    m.hole_v = z;
    bump(u, hv, +1);
    bump(u, z, -1);
  }
}

}  // namespace

Matching propose(const Matching& m, int u, int v) {
  Matching out = m;
  int k = 0;  // dummy cache; propose() has no schedule to count against
  ActivitySchedule no_edges;
  no_edges.graph.a.setZero(m.n(), m.n());
  apply_move(no_edges, out, k, u, v);
  return out;
}

void mh_sweeps_inplace(const KernelContext& ctx, Matching& m, int& k, Engine& g) {
  const int n = m.n();
  const int sweeps = ctx.sweeps > 0 ? ctx.sweeps : n * n;
  for (int t = 0; t < sweeps; ++t) {
    if (ctx.lazy && uniform01(g) < 0.5) continue;
    const int u = uniform_int(g, n);
    const int v = uniform_int(g, n);
    const double ratio = move_ratio(ctx, m, u, v);
    if (ratio >= 1.0 || uniform01(g) < ratio) apply_move(*ctx.schedule, m, k, u, v);
  }
}

Matching mh_step(const KernelContext& ctx, Matching m, Engine& g) {
  int k = nonedge_count(ctx.schedule->graph, m);
  mh_sweeps_inplace(ctx, m, k, g);
  return m;
}

Eigen::MatrixXd transition_matrix(const KernelContext& ctx) {
  const int n = ctx.schedule->n;
  check_size_guard(n, 4, "transition_matrix");
  const StateSpace sp = build_state_space(n);
  const auto n_states = static_cast<Eigen::Index>(sp.states.size());

  Eigen::VectorXd phi(n_states);
  for (Eigen::Index i = 0; i < n_states; ++i) {
    phi(i) = big_phi(*ctx.schedule, ctx.p, *ctx.weights, sp.states[i]);
  }

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n_states, n_states);
  const double draw_prob = 1.0 / (n * n);
  for (Eigen::Index i = 0; i < n_states; ++i) {
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        const Matching next = propose(sp.states[i], u, v);
        const int j = sp.index_of(next);
        if (j < 0) throw std::logic_error("proposal left the state space");
        if (j == static_cast<int>(i)) {
          P(i, i) += draw_prob;
          continue;
        }
        const double accept = std::min(1.0, phi(j) / phi(i));
        P(i, j) += draw_prob * accept;
        P(i, i) += draw_prob * (1.0 - accept);
      }
    }
  }
  if (ctx.lazy) {
    P = 0.5 * (Eigen::MatrixXd::Identity(n_states, n_states) + P);
  }
  return P;
}

double spectral_gap(const KernelContext& ctx) {
  const Eigen::MatrixXd P = transition_matrix(ctx);
  const EtaTable eta = eta_exact(*ctx.schedule, ctx.p, *ctx.weights);
  const auto n_states = P.rows();

  for (Eigen::Index i = 0; i < n_states; ++i) {
    for (Eigen::Index j = 0; j < n_states; ++j) {
      if (std::abs(eta.prob(i) * P(i, j) - eta.prob(j) * P(j, i)) > 1e-12) {
        throw std::logic_error("spectral_gap: kernel is not reversible w.r.t. eta");
      }
    }
  }

  // Similarity transform to a symmetric matrix with the same spectrum.
  const Eigen::VectorXd d = eta.prob.array().sqrt();
  Eigen::MatrixXd S = d.asDiagonal() * P * d.cwiseInverse().asDiagonal();
  S = 0.5 * (S + S.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();  // ascending
  if (std::abs(ev(n_states - 1) - 1.0) > 1e-10) {
    throw std::logic_error("spectral_gap: top eigenvalue is not 1");
  }
  const double slem = std::max(std::abs(ev(0)), std::abs(ev(n_states - 2)));
  return 1.0 - slem;
}

}  // namespace permsmc
