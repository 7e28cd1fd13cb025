#include "permsmc/binary_matrix.hpp"

#include <fstream>
#include <sstream>

#include "permsmc/common.hpp"

namespace permsmc {
namespace {

// Practical allocation cap; the format itself has no upper bound.
constexpr int kMaxParseN = 4096;

std::string row_col(int row, int col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

BinaryMatrix parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;

  if (!std::getline(in, line)) throw ValidationError("matrix parse error: empty input");
  int n = 0;
  {
    std::istringstream head(line);
    if (!(head >> n)) throw ValidationError("matrix parse error: first line must hold the dimension n");
    std::string extra;
    if (head >> extra) throw ValidationError("matrix parse error: unexpected token \"" + extra + "\" after the dimension");
  }
  if (n < 1) throw ValidationError("matrix parse error: n must be >= 1, got " + std::to_string(n));
  if (n > kMaxParseN) throw ValidationError("matrix parse error: n = " + std::to_string(n) + " exceeds the parser cap " + std::to_string(kMaxParseN));

  BinaryMatrix m;
  m.a.setZero(n, n);
  for (int row = 1; row <= n; ++row) {
    if (!std::getline(in, line)) {
      throw ValidationError("matrix parse error: expected " + std::to_string(n) +
                            " rows, input ends after row " + std::to_string(row - 1));
    }
    std::istringstream cells(line);
    std::string tok;
    for (int col = 1; col <= n; ++col) {
      if (!(cells >> tok)) {
        throw ValidationError("matrix parse error: row " + std::to_string(row) + " has only " +
                              std::to_string(col - 1) + " of " + std::to_string(n) + " entries");
      }
      if (tok == "0") {
        m.a(row - 1, col - 1) = 0;
      } else if (tok == "1") {
        m.a(row - 1, col - 1) = 1;
      } else {
        throw ValidationError("matrix parse error: non-binary token \"" + tok + "\" at " + row_col(row, col));
      }
    }
    if (cells >> tok) {
      throw ValidationError("matrix parse error: trailing token \"" + tok + "\" at " + row_col(row, n + 1));
    }
  }
  // Only blank trailing lines are tolerated after the last row.
  while (std::getline(in, line)) {
    std::istringstream rest(line);
    std::string tok;
    if (rest >> tok) {
      throw ValidationError("matrix parse error: unexpected content \"" + tok + "\" after row " + std::to_string(n));
    }
  }
  return m;
}

BinaryMatrix load_matrix(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open matrix file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_matrix(buf.str());
}

std::string to_text(const BinaryMatrix& m) {
  std::ostringstream out;
  out << m.n() << '\n';
  for (int u = 0; u < m.n(); ++u) {
    for (int v = 0; v < m.n(); ++v) out << (v ? " " : "") << int(m.a(u, v));
    out << '\n';
  }
  return out.str();
}

}  // namespace permsmc
