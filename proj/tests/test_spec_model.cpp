#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "morandim/util.hpp"
#include "morandim/validation.hpp"

using namespace morandim;
using namespace morandim::testing;

TEST_CASE("ratio arithmetic is exact") {
  Ratio a(2, 6);
  CHECK(a.num() == 1);
  CHECK(a.den() == 3);
  CHECK(Ratio::parse("1/3") == a);
  CHECK(Ratio::parse("0.25") == Ratio(1, 4));
  CHECK(Ratio::from_double(0.125) == Ratio(1, 8));
  CHECK(Ratio(1, 4) < Ratio(1, 3));
  CHECK(*Ratio(1, 4).checked_mul(Ratio(1, 8)) == Ratio(1, 32));
  CHECK(*Ratio(1, 2).checked_pow(10) == Ratio(1, 1024));
  CHECK(!Ratio(1, 3).checked_pow(50).has_value());  // overflows int64
  CHECK(*Ratio(1, 4).le_pow2_neg(2));
  CHECK(!*Ratio(1, 4).le_pow2_neg(3));
  CHECK_THROWS_AS(Ratio(1, 0), std::invalid_argument);
}

TEST_CASE("level_at: uniform and periodic") {
  MoranSpec u = uniform_spec(2, Ratio(1, 3));
  Level l = u.schedule.level_at(1000000);
  CHECK(l.n == 2);
  CHECK(l.ratios == std::vector<Ratio>{Ratio(1, 3), Ratio(1, 3)});

  // prefix [L1], cycle [L2, L3]: cycle index (k - 1 - 1) mod 2, so the
  // cycle restarts at L2 every two levels: L1 L2 L3 L2 L3 ...
  EventuallyPeriodicSchedule ep;
  ep.prefix = {uniform_level(2, Ratio(1, 2))};
  ep.cycle = {uniform_level(2, Ratio(1, 5)), uniform_level(3, Ratio(1, 7))};
  RatioSchedule s{RatioSchedule::Variant(ep)};
  CHECK(s.level_at(1) == uniform_level(2, Ratio(1, 2)));
  CHECK(s.level_at(2) == uniform_level(2, Ratio(1, 5)));
  CHECK(s.level_at(3) == uniform_level(3, Ratio(1, 7)));
  CHECK(s.level_at(4) == uniform_level(2, Ratio(1, 5)));
  CHECK(s.level_at(5) == uniform_level(3, Ratio(1, 7)));
}

TEST_CASE("level_at: marker family block scan") {
  MoranSpec e1 = example1_spec();
  // p = (2, 6, 24, 120, ...): k=4 lies in [p_1+2, p_2] = [4,6] with i=1 odd
  CHECK(e1.schedule.level_at(4) == uniform_level(2, Ratio(1, 16)));
  CHECK(e1.schedule.level_at(1) == uniform_level(2, Ratio(1, 4)));   // k <= p_1
  CHECK(e1.schedule.level_at(3) == uniform_level(2, Ratio(1, 4)));   // [3,3] run i=1
  CHECK(e1.schedule.level_at(7) == uniform_level(2, Ratio(1, 4)));   // [7,8] run i=2
  CHECK(e1.schedule.level_at(9) == uniform_level(2, Ratio(1, 8)));   // i=2 even tail
  CHECK(e1.schedule.level_at(25) == uniform_level(2, Ratio(1, 4)));  // [25,27] run i=3
  CHECK(e1.schedule.level_at(28) == uniform_level(2, Ratio(1, 16))); // i=3 odd tail
}

TEST_CASE("level_at is pure: repeated calls agree bit-for-bit") {
  MoranSpec e1 = example1_spec();
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t k = 1 + rng.below(100000);
    Level a = e1.schedule.level_at(k);
    Level b = e1.schedule.level_at(k);
    CHECK(a == b);
    CHECK(a.ratios.front().value() == b.ratios.front().value());
  }
}

TEST_CASE("marker-family block membership partitions the level axis") {
  MarkerFamilySchedule m;
  // independent matcher straight from the three case definitions
  auto cases_matching = [&m](std::uint64_t k) {
    int hits = 0;
    for (std::size_t i = 1; i <= 8; ++i) {
      std::uint64_t pi = m.marker(i), pn = m.marker(i + 1);
      if (k >= pi + 1 && k <= pi + i) ++hits;                      // 1/4 run
      if (k >= pi + i + 1 && k <= pn && i % 2 == 0) ++hits;        // 1/8 tail
      if (k >= pi + i + 1 && k <= pn && i % 2 == 1) ++hits;        // 1/16 tail
    }
    return hits;
  };
  for (std::uint64_t k = m.marker(1) + 1; k <= 5000; ++k) CHECK(cases_matching(k) == 1);
}

TEST_CASE("c_star is the exact infimum of the presentation") {
  CHECK(uniform_spec(2, Ratio(1, 3)).schedule.c_star() == Ratio(1, 3));
  CHECK(example1_spec().schedule.c_star() == Ratio(1, 16));
  MoranSpec cyc = cycle_spec({{2, Ratio(1, 2)}, {3, Ratio(1, 5)}});
  CHECK(cyc.schedule.c_star() == Ratio(1, 5));
}

TEST_CASE("validate flags MSC violations") {
  // Uniform(2, 2/3), d=1: sum c^d = 4/3 > 1
  ValidationReport bad = validate(uniform_spec(2, Ratio(2, 3)));
  CHECK(!bad.ok());
  bool found = false;
  for (const auto& e : bad.entries)
    if (e.check == "measure-sum" && e.severity == Severity::Error) found = true;
  CHECK(found);

  ValidationReport ok = validate(cycle_spec({{2, Ratio(1, 2)}, {2, Ratio(1, 9)}}));
  CHECK(ok.ok());

  ValidationReport e1 = validate(example1_spec());
  CHECK(e1.ok());

  ValidationReport n1 = validate(uniform_spec(1, Ratio(1, 3)));
  CHECK(!n1.ok());
}

TEST_CASE("validate: marker gap violations") {
  MarkerFamilySchedule m;
  m.explicit_markers = {2, 3, 24};  // p_2 - p_1 = 1 <= i = 1
  MoranSpec s;
  s.schedule = RatioSchedule(m);
  s.d = 1;
  ValidationReport r = validate(s);
  CHECK(!r.ok());
}

TEST_CASE("validate: cantor-like realizability") {
  // n*c*(1+a) = 2 * 0.5 * 1.05 > 1
  CantorLikeSpec c = cantor_spec(RatioSchedule(UniformSchedule{2, Ratio(1, 2)}), 0.1, 0.5);
  ValidationReport r = validate(c);
  CHECK(!r.ok());

  CantorLikeSpec ok = cantor_spec(RatioSchedule(UniformSchedule{2, Ratio(1, 3)}), 0.1, 0.5);
  CHECK(validate(ok).ok());

  // heterogeneous ratios are not Cantor-like
  CantorLikeSpec het;
  het.schedule = mixed_pair_spec().schedule;
  CHECK(!validate(het).ok());
}

TEST_CASE("implied bounds hold on sampled levels") {
  MoranSpec e1 = example1_spec();
  double cs = e1.schedule.c_star().value();
  int d = e1.d;
  Rng rng(13);
  for (int i = 0; i < 10000; ++i) {
    std::uint64_t k = 1 + rng.below(2000000);
    Level l = e1.schedule.level_at(k);
    double sum = 0.0, mx = 0.0;
    for (const auto& c : l.ratios) {
      sum += std::pow(c.value(), d);
      mx = std::max(mx, c.value());
    }
    CHECK(sum <= 1.0 + 1e-15);
    CHECK(mx <= std::pow(1.0 - std::pow(cs, d), 1.0 / d) + 1e-15);
    CHECK(l.n <= std::pow(cs, -d) + 1e-9);
  }
}

TEST_CASE("block program stages compile into runs") {
  BlockProgramSchedule bp;
  bp.stages.push_back({3, uniform_level(2, Ratio(1, 4))});
  bp.stages.push_back({0, uniform_level(2, Ratio(1, 8))});
  RatioSchedule s{RatioSchedule::Variant(bp)};
  CHECK(s.level_at(3) == uniform_level(2, Ratio(1, 4)));
  CHECK(s.level_at(4) == uniform_level(2, Ratio(1, 8)));
  CHECK(s.level_at(400) == uniform_level(2, Ratio(1, 8)));
  ScheduleView v = compile_schedule(s, 100);
  CHECK(v.runs.size() == 2);
  CHECK(v.level_id_at(3) == v.level_id_at(1));
  CHECK(v.level_id_at(4) == v.level_id_at(100));
}
