// Matchings of the bipartite row/column graph and their enumeration.
//
// A state is either a perfect matching (a bijection rows -> columns) or a
// near-perfect matching leaving exactly one row u and one column v uncovered
// (its "hole pair"). The sampler's state space is the union of these over the
// *completed* graph -- every pair is allowed, and pairs that are not edges of
// the underlying matrix are penalized through activities, not excluded.
#pragma once

#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "permsmc/binary_matrix.hpp"

namespace permsmc {

struct Matching {
  std::vector<std::int32_t> col_of_row;  // -1 marks the hole row
  std::int32_t hole_u = -1;              // -1/-1 for perfect matchings
  std::int32_t hole_v = -1;

  bool is_perfect() const { return hole_u < 0; }
  int n() const { return static_cast<int>(col_of_row.size()); }
  bool operator==(const Matching&) const = default;
};

// Class label: perfect, or the hole pair of a near-perfect matching.
using ClassKey = std::pair<int, int>;
inline constexpr ClassKey kPerfectClass{-1, -1};
inline ClassKey class_of(const Matching& m) { return {m.hole_u, m.hole_v}; }

// Throws std::logic_error if col_of_row, hole_u and hole_v are inconsistent.
void validate_matching(const Matching& m, int n);

// Number of pairs of m that are not edges of the matrix (0 for matchings of
// the original graph).
int nonedge_count(const BinaryMatrix& a, const Matching& m);

struct MatchingList {
  std::vector<Matching> items;
  std::map<ClassKey, std::int64_t> class_counts;  // sums to items.size()
};

// All perfect and near-perfect matchings. completed = true enumerates over
// the completed graph (n! + n^2 (n-1)! states); completed = false keeps only
// matchings whose pairs are all edges of a (hole pairs still range over every
// (u, v)). Guard: n <= 7.
MatchingList enumerate_matchings(const BinaryMatrix& a, bool completed);

// The completed state space in its canonical order: perfect matchings in
// lexicographic col_of_row order, then near-perfect classes ordered by hole
// pair, each class in lexicographic order of its restricted bijection.
// Diagnostic transition matrices and exact distributions use this indexing.
// Guard: n <= 5.
struct StateSpace {
  int n = 0;
  std::vector<Matching> states;

  int index_of(const Matching& m) const;  // -1 if absent (never, for valid m)

 private:
  friend StateSpace build_state_space(int n);
  std::unordered_map<std::uint64_t, int> index_;
};
StateSpace build_state_space(int n);

// Per-class histograms of the non-edge count: perfect[k] (near[u*n+v][k])
// counts matchings of the completed graph in that class with exactly k pairs
// off the edge set. Exact Xi/Z/ideal-weight functionals reduce to polynomial
// evaluations in the per-step non-edge activity: Xi_p(class) = sum_k h[k] c_p^k.
// Guard: n <= 7.
struct MatchingClassStats {
  int n = 0;
  std::vector<std::int64_t> perfect;            // size n + 1
  std::vector<std::vector<std::int64_t>> near;  // n*n histograms, size n each

  const std::vector<std::int64_t>& near_hist(int u, int v) const { return near[u * n + v]; }
};
MatchingClassStats compute_class_stats(const BinaryMatrix& a);

}  // namespace permsmc
