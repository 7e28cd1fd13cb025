// Square 0/1 matrix type and its text-file codec.
//
// File format: line 1 holds n; the next n lines hold n whitespace-separated
// 0/1 tokens each. Parse errors name the offending row and column (1-based).
#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <string_view>

namespace permsmc {

struct BinaryMatrix {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> a;

  int n() const { return static_cast<int>(a.rows()); }
  bool edge(int u, int v) const { return a(u, v) != 0; }
  int nonzeros() const { return static_cast<int>(a.cast<int>().sum()); }
};

// Parses the text form described above; throws ValidationError on malformed
// input. Entries other than 0/1 are rejected, not coerced.
BinaryMatrix parse_matrix(std::string_view text);

// Reads a file and parses it; throws ValidationError if unreadable.
BinaryMatrix load_matrix(const std::string& path);

// Inverse of parse_matrix (modulo whitespace normalization).
std::string to_text(const BinaryMatrix& m);

}  // namespace permsmc
