#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "permsmc/common.hpp"
#include "permsmc/exact.hpp"
#include "permsmc/matching.hpp"
#include "permsmc/schedule.hpp"
#include "permsmc/weights.hpp"
#include "test_util.hpp"

using namespace permsmc;
using permsmc_test::random_matrix;
using permsmc_test::toy3;

namespace {

double factorial_d(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("xi of the perfect class evaluates the non-edge-count polynomial") {
  const BinaryMatrix a = toy3();
  const ActivitySchedule s = build_schedule(a);
  const MatchingClassStats st = compute_class_stats(a);

  // At p = 0 every completed matching has activity 1.
  CHECK(xi_exact(st, s, 0, kPerfectClass) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(xi_exact(st, s, 0, ClassKey{0, 0}) == doctest::Approx(2.0).epsilon(1e-14));

  // At p = r the non-edge activity is 1/6; the example's perfect histogram is
  // {2, 2, 2}, so Xi_r = 2 + 2/6 + 2/36 = 43/18.
  CHECK(xi_exact(st, s, s.r, kPerfectClass) == doctest::Approx(43.0 / 18.0).epsilon(1e-14));
  // Near class (0, 2) holds two matchings with 1 and 0 non-edges: 1/6 + 1 = 7/6.
  CHECK(xi_exact(st, s, s.r, ClassKey{0, 2}) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("final-step xi of the perfect class is the activity permanent") {
  // Independent oracle: the permanent of the real matrix with 1 on edges and
  // 1/n! on non-edges equals sum_k perfect[k] (1/n!)^k.
  Engine g = make_engine(77, 1);
  for (int t = 0; t < 8; ++t) {
    const int n = 2 + int(uniform_below(g, 5));  // 2..6
    const BinaryMatrix a = random_matrix(n, g);
    CAPTURE(n);
    const ActivitySchedule s = build_schedule(a);
    const MatchingClassStats st = compute_class_stats(a);
    const double target = double(permanent_exact_activity(a, s.nonedge[s.r]));
    CHECK(xi_exact(st, s, s.r, kPerfectClass) == doctest::Approx(target).epsilon(1e-10));

    // That value exceeds the true permanent by less than 1: the residual mass
    // of matchings using at least one non-edge is below n! (1/n!)^1 = 1.
    const double per = double(permanent_exact_ryser(a));
    CHECK(xi_exact(st, s, s.r, kPerfectClass) >= per);
    CHECK(xi_exact(st, s, s.r, kPerfectClass) - per < 1.0);
  }
}

TEST_CASE("initial ideal weights are n on every hole pair") {
  Engine g = make_engine(77, 2);
  for (int n : {1, 2, 3, 4, 5}) {
    const BinaryMatrix a = random_matrix(n, g);
    const ActivitySchedule s = build_schedule(a);
    const WeightTable w0 = ideal_weights(compute_class_stats(a), s, 0);
    CHECK(w0.p == 0);
    CHECK(w0.provenance == WeightProvenance::kIdeal);
    REQUIRE(w0.values.rows() == n);
    REQUIRE(w0.values.cols() == n);
    for (int u = 0; u < n; ++u) {
      for (int v = 0; v < n; ++v) {
        CHECK(w0.values(u, v) == doctest::Approx(double(n)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("final ideal weight on the example's (0,2) hole pair is 43/21") {
  const BinaryMatrix a = toy3();
  const ActivitySchedule s = build_schedule(a);
  const WeightTable wr = ideal_weights(compute_class_stats(a), s, s.r);
  CHECK(wr.values(0, 2) == doctest::Approx(43.0 / 21.0).epsilon(1e-13));
}

TEST_CASE("ideal weights equalize every class mass to 1/(n^2+1)") {
  Engine g = make_engine(77, 3);
  std::vector<BinaryMatrix> cases = {toy3(), random_matrix(4, g), random_matrix(5, g)};
  for (const BinaryMatrix& a : cases) {
    const int n = a.n();
    CAPTURE(n);
    const ActivitySchedule s = build_schedule(a);
    const MatchingClassStats st = compute_class_stats(a);
    const std::vector<WeightTable> tables = ideal_weight_tables(st, s);
    REQUIRE(int(tables.size()) == s.r + 1);
    for (int p = 0; p <= s.r; ++p) {
      CAPTURE(p);
      CHECK(tables[p].p == p);
      const double z = z_exact(st, s, p, tables[p]);
      const double uniform = 1.0 / (double(n) * n + 1.0);
      // Perfect class mass.
      CHECK(xi_exact(st, s, p, kPerfectClass) / z == doctest::Approx(uniform).epsilon(1e-12));
      // Every near class mass.
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          const double mass =
              tables[p].values(u, v) * xi_exact(st, s, p, ClassKey{u, v}) / z;
          CHECK(mass == doctest::Approx(uniform).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("the initial normalizer is n! (n^2 + 1)") {
  Engine g = make_engine(77, 4);
  for (int n : {1, 2, 3, 4, 5}) {
    const BinaryMatrix a = random_matrix(n, g);
    const ActivitySchedule s = build_schedule(a);
    const MatchingClassStats st = compute_class_stats(a);
    const WeightTable w0 = ideal_weights(st, s, 0);
    CHECK(z_exact(st, s, 0, w0) ==
          doctest::Approx(factorial_d(n) * (double(n) * n + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("big_phi scales near-perfect states by the class weight") {
  const BinaryMatrix a = toy3();
  const ActivitySchedule s = build_schedule(a);
  WeightTable w;
  w.p = s.r;
  w.values = Eigen::MatrixXd::Constant(3, 3, 5.0);
  w.values(0, 0) = 7.0;

  Matching m;
  m.col_of_row = {0, 1, 2};  // perfect, one non-edge
  CHECK(big_phi(s, s.r, w, m) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));

  m.col_of_row = {-1, 1, 2};  // holes (0,0), one non-edge (2,2)
  m.hole_u = 0;
  m.hole_v = 0;
  CHECK(big_phi(s, s.r, w, m) == doctest::Approx(7.0 / 6.0).epsilon(1e-14));
  m.col_of_row = {-1, 1, 0};  // holes (0,2), all edges
  m.hole_v = 2;
  CHECK(big_phi(s, s.r, w, m) == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("exact eta is a probability vector proportional to big_phi") {
  const BinaryMatrix a = toy3();
  const ActivitySchedule s = build_schedule(a);
  const MatchingClassStats st = compute_class_stats(a);
  const WeightTable wr = ideal_weights(st, s, s.r);
  const EtaTable eta = eta_exact(s, s.r, wr);

  REQUIRE(eta.space.states.size() == 24);
  CHECK(eta.prob.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eta.z == doctest::Approx(z_exact(st, s, s.r, wr)).epsilon(1e-12));
  for (std::size_t i = 0; i < eta.space.states.size(); ++i) {
    const double expected = big_phi(s, s.r, wr, eta.space.states[i]) / eta.z;
    CHECK(eta.prob(int(i)) == doctest::Approx(expected).epsilon(1e-12));
  }

  // Class masses under the ideal table are uniform: sum the atoms per class.
  std::map<ClassKey, double> mass;
  for (std::size_t i = 0; i < eta.space.states.size(); ++i) {
    mass[class_of(eta.space.states[i])] += eta.prob(int(i));
  }
  REQUIRE(mass.size() == 10);
  for (const auto& [cls, m] : mass) CHECK(m == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("guards on the exact functionals") {
  BinaryMatrix big;
  big.a.setOnes(6, 6);
  const ActivitySchedule s = build_schedule(big);
  const WeightTable w{0, Eigen::MatrixXd::Constant(6, 6, 6.0), WeightProvenance::kUser};
  CHECK_THROWS_AS(eta_exact(s, 0, w), GuardError);  // state space needs n <= 5

  BinaryMatrix huge;
  huge.a.setOnes(8, 8);
  CHECK_THROWS_AS(compute_class_stats(huge), GuardError);
}
