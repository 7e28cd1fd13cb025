// Exact permanent oracles.
//
// Two independent algorithms so each can validate the other: Ryser's
// inclusion-exclusion with Gray-code subset updates (n <= 30), and direct
// summation over all permutations (n <= 9). Both accumulate in arbitrary-width
// integers; intermediate subset products alone reach ~30^30, far beyond any
// fixed-width type.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "permsmc/binary_matrix.hpp"

namespace permsmc {

using BigInt = boost::multiprecision::cpp_int;

// Ryser: per(A) = (-1)^n sum_{S subseteq [n]} (-1)^{|S|} prod_i sum_{j in S} a_ij.
// Cost 2^n * n with O(1) row-sum updates per subset. Guard: n <= 30.
BigInt permanent_exact_ryser(const BinaryMatrix& m);

// Brute force: sum over all n! permutations of the product of entries.
// Structurally unrelated to Ryser, which is the point. Guard: n <= 9.
BigInt permanent_exact_enumeration(const BinaryMatrix& m);

// Permanent of the real matrix that puts 1 on edges and `nonedge_value` on
// non-edges -- the normalizer the cooled targets converge to, and hence the
// exact expectation of the sequential estimator's est1 (the permanent itself
// plus the residual completion mass). Ryser in long double. Guard: n <= 20.
long double permanent_exact_activity(const BinaryMatrix& m, long double nonedge_value);

// n! as an exact integer (helper for Z_0 = n!(n^2+1) scale checks).
BigInt factorial_exact(int n);

}  // namespace permsmc
