#include "permsmc/schedule.hpp"

#include <cmath>

#include "json.hpp"

#include "permsmc/common.hpp"

namespace permsmc {

double default_step_factor(int n) { return std::exp2(-1.0 / (2.0 * n)); }

ActivitySchedule build_schedule(const BinaryMatrix& a, double step_factor, int r_override) {
  const int n = a.n();
  if (step_factor == 0.0) step_factor = default_step_factor(n);
  if (!(step_factor > 0.0) || !(step_factor < 1.0)) {
    throw ValidationError("step_factor must lie in (0, 1), got " + std::to_string(step_factor));
  }

  // 1/n!: correctly rounded reciprocal while n! is representable, lgamma form
  // beyond that (n! overflows double past n = 170).
  double floor;
  if (n <= 170) {
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    floor = 1.0 / fact;
  } else {
    floor = std::exp(-std::lgamma(n + 1.0));
  }
  if (!(floor > 0.0)) {
    throw ValidationError("n too large: 1/n! underflows double precision");
  }

  // r = smallest p with step_factor^p <= 1/n!. The power is accumulated in
  // extended precision with a hair of relative slack so exact-boundary cases
  // (e.g. n = 2, where step_factor^4 = 1/2 exactly) do not round up to r + 1.
  int r;
  if (r_override >= 0) {
    r = r_override;
  } else {
    const long double sf = static_cast<long double>(step_factor);
    const long double limit = static_cast<long double>(floor) * (1.0L + 1e-9L);
    long double x = 1.0L;
    r = 0;
    while (x > limit) {
      x *= sf;
      ++r;
      if (r > 100'000'000) throw ValidationError("cooling schedule does not terminate");
    }
  }

  ActivitySchedule s;
  s.graph = a;
  s.n = n;
  s.r = r;
  s.step_factor = step_factor;
  s.nonedge.resize(r + 1);
  long double x = 1.0L;
  for (int p = 0; p <= r; ++p) {
    s.nonedge[p] = std::max(static_cast<double>(x), floor);
    x *= static_cast<long double>(step_factor);
  }
  if (r_override < 0) s.nonedge[r] = floor;  // land exactly on 1/n!
  return s;
}

double phi_of_matching(const ActivitySchedule& s, int p, const Matching& m) {
  return ipow(s.nonedge[p], nonedge_count(s.graph, m));
}

std::string schedule_to_json(const ActivitySchedule& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["r"] = s.r;
  j["factor"] = s.step_factor;
  j["phi_final_nonedge"] = s.nonedge[s.r];
  return j.dump(2);
}

}  // namespace permsmc
