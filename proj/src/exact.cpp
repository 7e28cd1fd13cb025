#include "permsmc/exact.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <numeric>
#include <vector>

#include "permsmc/common.hpp"

namespace permsmc {

BigInt permanent_exact_ryser(const BinaryMatrix& m) {
  const int n = m.n();
  check_size_guard(n, 30, "permanent_exact_ryser");

  // Row sums over the current subset S of columns, updated one Gray-code
  // column flip at a time; zero_rows lets all-zero products be skipped.
  std::array<std::int32_t, 30> row_sum{};
  int zero_rows = n;
  BigInt acc = 0;

  const std::uint64_t total = 1ull << n;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ gray_prev;
    const int j = std::countr_zero(diff);
    const bool added = (gray & diff) != 0;
    gray_prev = gray;
    for (int i = 0; i < n; ++i) {
      if (!m.edge(i, j)) continue;
      if (added) {
        if (row_sum[i]++ == 0) --zero_rows;
      } else {
        if (--row_sum[i] == 0) ++zero_rows;
      }
    }
    if (zero_rows > 0) continue;

    // Product of n row sums (each <= 30): accumulate in u64 chunks and flush
    // into a BigInt before a chunk could overflow.
    constexpr std::uint64_t kFlushAt = std::numeric_limits<std::uint64_t>::max() / 30;
    BigInt prod = 1;
    std::uint64_t chunk = 1;
    for (int i = 0; i < n; ++i) {
      if (chunk >= kFlushAt) {
        prod *= chunk;
        chunk = 1;
      }
      chunk *= static_cast<std::uint64_t>(row_sum[i]);
    }
    prod *= chunk;

    // Sign (-1)^(n - |S|); |S| = popcount(gray).
    if ((n - std::popcount(gray)) & 1) {
      acc -= prod;
    } else {
      acc += prod;
    }
  }
  return acc;
}

BigInt permanent_exact_enumeration(const BinaryMatrix& m) {
  const int n = m.n();
  check_size_guard(n, 9, "permanent_exact_enumeration");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint64_t count = 0;  // at most 9! = 362880
  do {
    int prod = 1;
    for (int i = 0; i < n && prod; ++i) prod &= m.edge(i, perm[i]) ? 1 : 0;
    count += static_cast<std::uint64_t>(prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return BigInt(count);
}

long double permanent_exact_activity(const BinaryMatrix& m, long double nonedge_value) {
  const int n = m.n();
  check_size_guard(n, 20, "permanent_exact_activity");

  // Same Gray-code Ryser walk as above, over real entries a(i,j) in {1, c}.
  std::array<long double, 20> row_sum{};
  long double acc = 0.0L;

  const std::uint64_t total = 1ull << n;
  std::uint64_t gray_prev = 0;
  for (std::uint64_t k = 1; k < total; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ gray_prev;
    const int j = std::countr_zero(diff);
    const long double sign_col = (gray & diff) != 0 ? 1.0L : -1.0L;
    gray_prev = gray;
    for (int i = 0; i < n; ++i) {
      row_sum[i] += sign_col * (m.edge(i, j) ? 1.0L : nonedge_value);
    }

    long double prod = 1.0L;
    for (int i = 0; i < n; ++i) prod *= row_sum[i];
    if ((n - std::popcount(gray)) & 1) {
      acc -= prod;
    } else {
      acc += prod;
    }
  }
  return acc;
}

BigInt factorial_exact(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace permsmc
