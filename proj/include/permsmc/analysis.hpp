// Estimator statistics, convergence-rate constants, and the exact per-step
// ratio/minorization checks used by the diagnostics CLI.
#pragma once

#include <span>
#include <vector>

#include "permsmc/binary_matrix.hpp"
#include "permsmc/schedule.hpp"

namespace permsmc {

// Unbiased sample variance divided by the squared sample mean.
double relative_variance(std::span<const double> xs);

// Deterministic (jackknife) standard error for relative_variance; used to
// compare relative variances across configurations without extra randomness.
double relative_variance_jackknife_se(std::span<const double> xs);

// Constants of the mean-error bound: tau(n) = 8(n^2+1)/n^2 bounds sup G/lambda,
// rho(n) = (1 - 1/(C n^2))^2 is the squared kernel contraction factor for a
// Poincare constant C, and cbar = (tau^(3/4) / (1 - (1-rho) tau^3))^2 feeds the
// N^{-1} bound ((r+1) cbar^2/N)(1 + 2(r+1) cbar (3 + cbar^2)/N), valid once
// tau^3 (1 - rho) < 1 and N > 2 cbar (r+1)(3 + cbar^2).
struct ComplexityConstants {
  int n = 0;
  double c_poincare = 1.0;
  double tau = 0.0;
  double rho = 0.0;
  bool condition = false;   // tau^3 (1 - rho) < 1
  double cbar = 0.0;        // quiet NaN when the condition fails
  double min_particles = 0.0;  // 2 cbar (r+1)(3 + cbar^2) needs r; see bound
};

ComplexityConstants complexity_constants(int n, double c_poincare);

// The bound evaluated at (r, N); returns quiet NaN when the condition fails
// or N is below the validity threshold (flagged, not fatal).
double theorem2_bound(const ComplexityConstants& c, int r, double N);
double theorem2_min_particles(const ComplexityConstants& c, int r);

// Exact per-step ratio control under ideal weights (guard n <= 5): lambda_p =
// Z_{p+1}/Z_p (= Xi_{p+1}(M-class)/Xi_p(M-class)), sup_M G_p from the class
// histograms, and the three claimed bounds.
struct Lemma1Row {
  int p = 0;
  double lambda = 0.0;
  double sup_g = 0.0;
  double ratio = 0.0;  // sup_g / lambda
  bool ratio_ok = false;    // ratio <= 8(n^2+1)/n^2
  bool lambda_ok = false;   // lambda >= n^2/(4 sqrt(2) (n^2+1))
  bool sup_g_ok = false;    // sup_g <= sqrt(2)
};

struct Lemma1Report {
  int n = 0;
  int r = 0;
  double ratio_bound = 0.0;
  double lambda_bound = 0.0;
  double sup_g_bound = 0.0;
  std::vector<Lemma1Row> rows;  // p = 0 .. r-1
  bool all_ok = false;
};

Lemma1Report lemma1_ratio_check(const BinaryMatrix& a, double step_factor = 0.0,
                                int r_override = -1);

}  // namespace permsmc
