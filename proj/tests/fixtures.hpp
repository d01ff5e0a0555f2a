#pragma once

#include "morandim/schedule.hpp"

namespace morandim::testing {

inline MoranSpec uniform_spec(int n, Ratio c, int d = 1) {
  MoranSpec s;
  s.schedule = RatioSchedule(UniformSchedule{n, c});
  s.d = d;
  return s;
}

// cycle of uniform levels, no prefix
inline MoranSpec cycle_spec(const std::vector<std::pair<int, Ratio>>& levels, int d = 1) {
  EventuallyPeriodicSchedule ep;
  for (const auto& [n, c] : levels) ep.cycle.push_back(uniform_level(n, c));
  MoranSpec s;
  s.schedule = RatioSchedule(ep);
  s.d = d;
  return s;
}

// alternating quarter/eighth levels, n = 2
inline MoranSpec alternating_spec() {
  return cycle_spec({{2, Ratio(1, 4)}, {2, Ratio(1, 8)}});
}

// one level shape (1/4, 1/8) repeated forever: heterogeneous ratios
inline MoranSpec mixed_pair_spec() {
  EventuallyPeriodicSchedule ep;
  Level l;
  l.n = 2;
  l.ratios = {Ratio(1, 4), Ratio(1, 8)};
  ep.cycle.push_back(l);
  MoranSpec s;
  s.schedule = RatioSchedule(ep);
  s.d = 1;
  return s;
}

inline MoranSpec example1_spec() {
  MoranSpec s;
  s.schedule = RatioSchedule(MarkerFamilySchedule{});
  s.d = 1;
  return s;
}

// quantizes to the 2^-40 dyadic grid so random thresholds stay exactly
// representable as int64 rationals
inline Ratio dyadic40(double x) {
  const double scale = 0x1.0p40;
  std::int64_t num = static_cast<std::int64_t>(x * scale + 0.5);
  if (num < 1) num = 1;
  return Ratio(num, static_cast<std::int64_t>(1) << 40);
}

inline CantorLikeSpec cantor_spec(const RatioSchedule& sched, double amplitude = 0.1,
                                  double decay = 0.5) {
  CantorLikeSpec c;
  c.schedule = sched;
  c.perturbation = Perturbation(GeometricPerturbation{amplitude, decay});
  return c;
}

}  // namespace morandim::testing
