#include "permsmc/matching.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "permsmc/common.hpp"

namespace permsmc {
namespace {

// Base-(n+1) digit encoding of col_of_row (hole digit = n); fits 64 bits for
// every guarded n.
std::uint64_t encode_state(const Matching& m) {
  const int n = m.n();
  std::uint64_t code = 0;
  for (int i = n - 1; i >= 0; --i) {
    const std::uint64_t digit = m.col_of_row[i] < 0 ? static_cast<std::uint64_t>(n)
                                                    : static_cast<std::uint64_t>(m.col_of_row[i]);
    code = code * static_cast<std::uint64_t>(n + 1) + digit;
  }
  return code;
}

Matching near_matching(int n, int u, int v, const std::vector<int>& rows,
                       const std::vector<int>& cols_perm) {
  Matching m;
  m.col_of_row.assign(n, -1);
  for (std::size_t i = 0; i < rows.size(); ++i) m.col_of_row[rows[i]] = cols_perm[i];
  m.hole_u = u;
  m.hole_v = v;
  return m;
}

template <typename Visit>
void for_each_matching(int n, bool (*pair_ok)(const BinaryMatrix&, int, int),
                       const BinaryMatrix& a, Visit visit) {
  // Perfect matchings in lexicographic col_of_row order.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) ok = pair_ok(a, i, perm[i]);
    if (!ok) continue;
    Matching m;
    m.col_of_row.assign(perm.begin(), perm.end());
    visit(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Near-perfect classes by hole pair, each in lexicographic order of the
  // restricted bijection (rows ascending, columns permuted).
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      std::vector<int> rows, cols;
      for (int i = 0; i < n; ++i)
        if (i != u) rows.push_back(i);
      for (int j = 0; j < n; ++j)
        if (j != v) cols.push_back(j);
      if (rows.empty()) {  // n = 1: the empty matching
        visit(near_matching(n, u, v, rows, cols));
        continue;
      }
      do {
        bool ok = true;
        for (std::size_t i = 0; i < rows.size() && ok; ++i) ok = pair_ok(a, rows[i], cols[i]);
        if (ok) visit(near_matching(n, u, v, rows, cols));
      } while (std::next_permutation(cols.begin(), cols.end()));
    }
  }
}

bool any_pair(const BinaryMatrix&, int, int) { return true; }
bool edge_pair(const BinaryMatrix& a, int u, int v) { return a.edge(u, v); }

}  // namespace

void validate_matching(const Matching& m, int n) {
  if (m.n() != n) throw std::logic_error("matching has wrong dimension");
  std::vector<int> col_seen(n, 0);
  int holes = 0;
  for (int i = 0; i < n; ++i) {
    const int c = m.col_of_row[i];
    if (c < 0) {
      ++holes;
      if (m.hole_u != i) throw std::logic_error("hole_u does not match the unmatched row");
      continue;
    }
    if (c >= n) throw std::logic_error("column index out of range");
    if (col_seen[c]++) throw std::logic_error("column matched twice");
  }
  if (m.is_perfect()) {
    if (holes != 0 || m.hole_v != -1) throw std::logic_error("perfect matching with a hole marker");
  } else {
    if (holes != 1) throw std::logic_error("near-perfect matching must have exactly one hole row");
    if (m.hole_v < 0 || m.hole_v >= n || col_seen[m.hole_v])
      throw std::logic_error("hole_v does not match the unmatched column");
  }
}

int nonedge_count(const BinaryMatrix& a, const Matching& m) {
  int k = 0;
  for (int i = 0; i < m.n(); ++i) {
    const int c = m.col_of_row[i];
    if (c >= 0 && !a.edge(i, c)) ++k;
  }
  return k;
}

MatchingList enumerate_matchings(const BinaryMatrix& a, bool completed) {
  check_size_guard(a.n(), 7, "enumerate_matchings");
  MatchingList out;
  for_each_matching(a.n(), completed ? any_pair : edge_pair, a, [&](Matching m) {
    ++out.class_counts[class_of(m)];
    out.items.push_back(std::move(m));
  });
  return out;
}

int StateSpace::index_of(const Matching& m) const {
  const auto it = index_.find(encode_state(m));
  return it == index_.end() ? -1 : it->second;
}

StateSpace build_state_space(int n) {
  check_size_guard(n, 5, "build_state_space");
  StateSpace sp;
  sp.n = n;
  BinaryMatrix dummy;
  dummy.a.setOnes(n, n);
  for_each_matching(n, any_pair, dummy, [&](Matching m) {
    sp.index_.emplace(encode_state(m), static_cast<int>(sp.states.size()));
    sp.states.push_back(std::move(m));
  });
  return sp;
}

MatchingClassStats compute_class_stats(const BinaryMatrix& a) {
  const int n = a.n();
  check_size_guard(n, 7, "compute_class_stats");
  MatchingClassStats st;
  st.n = n;
  st.perfect.assign(n + 1, 0);
  // A near-perfect matching holds n - 1 pairs, so its non-edge count is at
  // most n - 1: the class histograms need n slots, not n + 1.
  st.near.assign(static_cast<std::size_t>(n) * n, std::vector<std::int64_t>(n, 0));
  for_each_matching(n, any_pair, a, [&](Matching m) {
    const int k = nonedge_count(a, m);
    if (m.is_perfect()) {
      ++st.perfect[k];
    } else {
      ++st.near[m.hole_u * n + m.hole_v][k];
    }
  });
  return st;
}

}  // namespace permsmc
