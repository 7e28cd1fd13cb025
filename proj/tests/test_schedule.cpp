#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "json.hpp"
#include "permsmc/common.hpp"
#include "permsmc/schedule.hpp"
#include "test_util.hpp"

using namespace permsmc;
using permsmc_test::from_rows;
using permsmc_test::toy3;

namespace {

BinaryMatrix all_ones(int n) {
  BinaryMatrix m;
  m.a.setOnes(n, n);
  return m;
}

}  // namespace

TEST_CASE("ipow multiplies out exactly") {
  CHECK(ipow(0.5, 0) == 1.0);
  CHECK(ipow(0.5, 1) == 0.5);
  CHECK(ipow(2.0, 10) == 1024.0);
  CHECK(ipow(1.0 / 3.0, 2) == (1.0 / 3.0) * (1.0 / 3.0));
}

TEST_CASE("default step factor is the 2^(-1/(2n)) contraction") {
  CHECK(default_step_factor(1) == doctest::Approx(std::exp2(-0.5)).epsilon(1e-15));
  CHECK(default_step_factor(3) == doctest::Approx(std::exp2(-1.0 / 6.0)).epsilon(1e-15));
  CHECK(default_step_factor(8) == doctest::Approx(std::exp2(-1.0 / 16.0)).epsilon(1e-15));
}

TEST_CASE("schedule length r is the first step at or below the 1/n! floor") {
  // n = 3 default: 2^(-p/6) <= 1/6 first at p = 16.
  CHECK(build_schedule(toy3()).r == 16);
  // n = 2 default hits 1/2 exactly at p = 4; the boundary must not round up.
  CHECK(build_schedule(all_ones(2)).r == 4);
  // n = 1: the floor 1/1! = 1 is already met at p = 0.
  CHECK(build_schedule(all_ones(1)).r == 0);
  // n = 8 default.
  CHECK(build_schedule(all_ones(8)).r == 245);
  // Explicit factor: 0.5^p <= 1/6 first at p = 3.
  CHECK(build_schedule(toy3(), 0.5).r == 3);
}

TEST_CASE("activities start at 1, decay geometrically, and land exactly on 1/n!") {
  const ActivitySchedule s = build_schedule(toy3());
  CHECK(s.n == 3);
  CHECK(s.step_factor == doctest::Approx(default_step_factor(3)).epsilon(1e-15));
  REQUIRE(int(s.nonedge.size()) == s.r + 1);
  CHECK(s.nonedge[0] == 1.0);
  CHECK(s.nonedge[s.r] == 1.0 / 6.0);  // exact double, not an approximation
  for (int p = 1; p <= s.r; ++p) {
    CHECK(s.nonedge[p] <= s.nonedge[p - 1]);
    CHECK(s.nonedge[p] > 0.0);
  }
  for (int p = 0; p < s.r; ++p) {
    CHECK(s.nonedge[p] == doctest::Approx(ipow(s.step_factor, p)).epsilon(1e-12));
    CHECK(s.nonedge[p] > 1.0 / 6.0);  // the floor is reached only at r
  }

  // Per-pair activities: edges stay at 1 at every step.
  for (int p = 0; p <= s.r; ++p) {
    CHECK(s.phi(p, 0, 0) == 1.0);             // edge
    CHECK(s.phi(p, 0, 2) == s.nonedge[p]);    // non-edge
    CHECK(s.nonedge_activity(p) == s.nonedge[p]);
  }
}

TEST_CASE("r_override truncates or extends the schedule") {
  const ActivitySchedule cut = build_schedule(toy3(), 0.0, 5);
  CHECK(cut.r == 5);
  REQUIRE(cut.nonedge.size() == 6);
  // Above the natural r the floor has not been reached yet.
  CHECK(cut.nonedge[5] == doctest::Approx(ipow(default_step_factor(3), 5)).epsilon(1e-12));
  CHECK(cut.nonedge[5] > 1.0 / 6.0);

  const ActivitySchedule zero = build_schedule(toy3(), 0.0, 0);
  CHECK(zero.r == 0);
  REQUIRE(zero.nonedge.size() == 1);
  CHECK(zero.nonedge[0] == 1.0);

  // Extending past the natural r keeps activities clamped at the floor.
  const ActivitySchedule extended = build_schedule(toy3(), 0.0, 20);
  CHECK(extended.r == 20);
  for (int p = 16; p <= 20; ++p) CHECK(extended.nonedge[p] == 1.0 / 6.0);
}

TEST_CASE("a near-1 factor with r_override keeps activities near 1 (stalled schedule)") {
  const ActivitySchedule s = build_schedule(toy3(), 1.0 - 1e-12, 6);
  CHECK(s.r == 6);
  for (int p = 0; p <= 6; ++p) CHECK(s.nonedge[p] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("invalid step factors are rejected") {
  CHECK_THROWS_AS(build_schedule(toy3(), 1.0), ValidationError);
  CHECK_THROWS_AS(build_schedule(toy3(), 1.5), ValidationError);
  CHECK_THROWS_AS(build_schedule(toy3(), -0.25), ValidationError);
  CHECK_NOTHROW(build_schedule(toy3(), 0.9999));
}

TEST_CASE("phi_of_matching is the activity raised to the non-edge count") {
  const ActivitySchedule s = build_schedule(toy3());
  Matching m;
  m.col_of_row = {0, 2, 1};  // all edges
  CHECK(phi_of_matching(s, s.r, m) == 1.0);
  m.col_of_row = {0, 1, 2};  // one non-edge (2,2)
  CHECK(phi_of_matching(s, 0, m) == 1.0);
  CHECK(phi_of_matching(s, s.r, m) == 1.0 / 6.0);
  m.col_of_row = {1, 0, 2};  // two non-edges
  CHECK(phi_of_matching(s, s.r, m) == doctest::Approx(1.0 / 36.0).epsilon(1e-15));
}

TEST_CASE("schedule JSON carries n, r, factor, and the final activity") {
  const auto j = nlohmann::json::parse(schedule_to_json(build_schedule(toy3())));
  CHECK(j.at("n") == 3);
  CHECK(j.at("r") == 16);
  CHECK(j.at("factor").get<double>() == doctest::Approx(default_step_factor(3)).epsilon(1e-15));
  CHECK(j.at("phi_final_nonedge").get<double>() == 1.0 / 6.0);
}
