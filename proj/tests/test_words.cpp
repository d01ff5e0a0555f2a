#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "morandim/dimension.hpp"
#include "morandim/util.hpp"
#include "morandim/words.hpp"

using namespace morandim;
using namespace morandim::testing;

namespace {

// Independent brute-force cutset: enumerate every word up to max_len via
// exact products and keep those with c_v <= delta < c_{v^-}.
std::set<std::vector<std::uint32_t>> brute_cutset(const MoranSpec& spec, std::uint64_t base,
                                                  const Ratio& delta, int max_len) {
  std::set<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> word;
  auto rec = [&](auto&& self, std::uint64_t level, Ratio prod) -> void {
    if (static_cast<int>(word.size()) >= max_len) return;
    Level lvl = spec.schedule.level_at(level + 1);
    for (std::uint32_t j = 1; j <= static_cast<std::uint32_t>(lvl.n); ++j) {
      Ratio child = *prod.checked_mul(lvl.ratios[j - 1]);
      word.push_back(j);
      if (child <= delta && delta < prod)
        out.insert(word);
      else if (child > delta)
        self(self, level + 1, child);
      word.pop_back();
    }
  };
  rec(rec, base, Ratio(1));
  return out;
}

}  // namespace

TEST_CASE("cutset: uniform(2,1/2) at the root") {
  MoranSpec u = uniform_spec(2, Ratio(1, 2));
  Word root = make_word(u, 0, {});

  Cutset c4 = cutset(u, root, Ratio(1, 4));
  CHECK(c4.members.size() == 4);
  for (const auto& m : c4.members) {
    CHECK(m.letters.size() == 2);
    CHECK(*m.exact_c == Ratio(1, 4));
  }

  // delta = 0.3: same four words since 1/4 <= 0.3 < 1/2
  Cutset c3 = cutset(u, root, Ratio::from_double(0.3));
  CHECK(c3.members.size() == 4);
  CHECK(c3.exact);
}

TEST_CASE("cutset: mixed-ratio level gives mixed-length members") {
  MoranSpec mp = mixed_pair_spec();  // every level (1/4, 1/8)
  Word root = make_word(mp, 0, {});
  Cutset c = cutset(mp, root, Ratio(1, 20));
  std::set<std::vector<std::uint32_t>> got;
  for (const auto& m : c.members) got.insert(m.letters);
  std::set<std::vector<std::uint32_t>> expect = brute_cutset(mp, 0, Ratio(1, 20), 3);
  CHECK(got == expect);
  CHECK(got.size() == 5);
  std::set<std::size_t> lens;
  for (const auto& w : got) lens.insert(w.size());
  CHECK(lens == std::set<std::size_t>{2, 3});

  // sandwich holds exactly on every member
  for (const auto& m : c.members) {
    REQUIRE(m.exact_c.has_value());
    CHECK(*m.exact_c <= Ratio(1, 20));
    Word parent = make_word(mp, m.base,
                            {m.letters.begin(), m.letters.end() - 1});
    CHECK(Ratio(1, 20) < *parent.exact_c);
  }
}

TEST_CASE("cutset rejects thresholds outside (0, c_*)") {
  MoranSpec u = uniform_spec(2, Ratio(1, 3));
  Word root = make_word(u, 0, {});
  CHECK_THROWS_AS(cutset(u, root, Ratio(1, 3)), std::invalid_argument);
  CHECK_THROWS_AS(cutset(u, root, Ratio(0)), std::invalid_argument);
  CHECK_NOTHROW(cutset(u, root, Ratio(1, 4)));
}

TEST_CASE("cutset honors the enumeration budget") {
  MoranSpec u = uniform_spec(2, Ratio(1, 2));
  Word root = make_word(u, 0, {});
  CutsetOptions opt;
  opt.budget = 100;
  CHECK_THROWS_AS(cutset(u, root, Ratio(1, 1024), opt), BudgetError);
}

TEST_CASE("cutset from a non-root base word") {
  MoranSpec alt = alternating_spec();
  Word u = make_word(alt, 0, {1, 2});  // ends at level 2
  CHECK(u.log_c == doctest::Approx(std::log(1.0 / 32.0)));
  Cutset c = cutset(alt, u, Ratio(1, 10));
  // next levels are 1/4 (level 3) then 1/8: suffixes of length 1 have
  // c = 1/4 > 1/10, length 2 gives 1/32 <= 1/10
  CHECK(c.members.size() == 4);
  for (const auto& m : c.members) CHECK(m.base == 2);
}

TEST_CASE("cutset identity residual vanishes") {
  MoranSpec u = uniform_spec(2, Ratio(1, 2));
  Word root = make_word(u, 0, {});
  CHECK(cutset_identity_residual(u, root, Ratio(1, 4), 0.7) < 1e-10);

  // delta just below c_*: the cutset is one full level; s = 0 gives sum 1/n over n words
  MoranSpec u13 = uniform_spec(2, Ratio(1, 3));
  Word r13 = make_word(u13, 0, {});
  CHECK(cutset_identity_residual(u13, r13, Ratio(33, 100), 0.0) < 1e-14);

  MoranSpec alt = alternating_spec();
  Word ra = make_word(alt, 0, {});
  CHECK(cutset_identity_residual(alt, ra, Ratio(1, 20), 0.4) < 1e-10);

  MoranSpec mp = mixed_pair_spec();
  Word rm = make_word(mp, 0, {});
  CHECK(cutset_identity_residual(mp, rm, Ratio(1, 20), 0.4) < 1e-10);
}

TEST_CASE("cutset identity residual on randomized cases") {
  Rng rng(1234);
  Ratio pool[] = {Ratio(1, 2), Ratio(1, 3), Ratio(1, 4), Ratio(1, 5), Ratio(1, 8)};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<int, Ratio>> levels;
    int len = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < len; ++i) {
      Ratio c = pool[rng.below(5)];
      int n_max = static_cast<int>(1.0 / c.value());
      int n = 2 + static_cast<int>(rng.below(std::max(1, n_max - 1)));
      if (n > n_max) n = n_max;
      levels.push_back({n, c});
    }
    MoranSpec spec = cycle_spec(levels);
    double cs = spec.schedule.c_star().value();
    Ratio delta = dyadic40(rng.uniform(1e-4, 0.9) * cs);
    std::vector<std::uint32_t> base_letters;
    for (std::uint64_t i = 0; i < rng.below(3); ++i) {
      Level l = spec.schedule.level_at(i + 1);
      base_letters.push_back(1 + static_cast<std::uint32_t>(rng.below(l.n)));
    }
    Word u = make_word(spec, 0, base_letters);
    double s = rng.uniform(0.0, 1.0);
    CHECK(cutset_identity_residual(spec, u, delta, s) < 1e-10);
  }
}

TEST_CASE("cutset identity residual at the million-member scale") {
  // uniform(4, 1/3) in d=2: delta in (3^-10, 3^-9] forces words of length 10,
  // 4^10 = 1048576 members
  MoranSpec big = uniform_spec(4, Ratio(1, 3), 2);
  Word root = make_word(big, 0, {});
  Ratio delta(1, 21000);  // 3^-10 ~ 1.69e-5 < 1/21000 <= 3^-9
  CHECK(cutset_identity_residual(big, root, delta, 1.2) < 1e-10);
}

TEST_CASE("dyadic classes: closed cases") {
  // uniform(2,1/4), 3 levels: all 8 words have c = 2^-6
  DyadicClasses a = dyadic_classes(uniform_spec(2, Ratio(1, 4)), 0, 3);
  CHECK(a.total == 8);
  CHECK(a.counts.size() == 1);
  CHECK(a.counts.at(6) == 8);
  CHECK(a.p_min == 6);
  CHECK(a.exact);

  // uniform(2,1/3), 2 levels: c = 1/9 in (2^-4, 2^-3]
  DyadicClasses b = dyadic_classes(uniform_spec(2, Ratio(1, 3)), 0, 2);
  CHECK(b.counts.size() == 1);
  CHECK(b.counts.at(3) == 4);

  // alternating, 4 levels: every word has c = 4^-2 8^-2 = 2^-10
  DyadicClasses c = dyadic_classes(alternating_spec(), 0, 4);
  CHECK(c.counts.size() == 1);
  CHECK(c.counts.at(10) == 16);
}

TEST_CASE("dyadic classes partition the window") {
  Rng rng(777);
  MoranSpec specs[] = {mixed_pair_spec(), alternating_spec(), example1_spec()};
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 10; ++trial) {
      std::uint64_t k_lo = rng.below(8);
      std::uint64_t k_hi = k_lo + 1 + rng.below(10);
      DyadicClasses d = dyadic_classes(spec, k_lo, k_hi);
      std::uint64_t expect = 1;
      for (std::uint64_t k = k_lo + 1; k <= k_hi; ++k)
        expect *= spec.schedule.level_at(k).n;
      std::uint64_t sum = 0;
      for (const auto& [p, n] : d.counts) sum += n;
      CHECK(sum == expect);
      CHECK(d.total == expect);
    }
  }
}

TEST_CASE("dyadic classes budget error") {
  CHECK_THROWS_AS(dyadic_classes(uniform_spec(2, Ratio(1, 2)), 0, 40, 1000), BudgetError);
}

TEST_CASE("lower_bound_witness: uniform closed form") {
  // window of m quarter levels: single class q = 2m, count 2^m;
  // 2^{-0.1*2m}(1-2^{-0.1}) <= 2^m 2^{-2m*0.45} for all m >= 1
  MoranSpec u = uniform_spec(2, Ratio(1, 4));
  for (std::uint64_t m = 1; m <= 20; ++m) {
    auto w = lower_bound_witness(u, 0, m, 0.45, 0.1);
    REQUIRE(w.has_value());
    CHECK(w->q == static_cast<int>(2 * m));
    CHECK(w->count == (1ull << m));
    CHECK(w->lhs_log <= w->rhs_log);
    // both sides in closed form
    double lhs = -0.1 * (2.0 * m) * std::log(2.0) + std::log1p(-std::pow(2.0, -0.1));
    double rhs = m * std::log(2.0) - 2.0 * m * 0.45 * std::log(2.0);
    CHECK(w->lhs_log == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(w->rhs_log == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("lower_bound_witness: alternating window and precondition error") {
  MoranSpec alt = alternating_spec();
  // s = 0.35 < s_{0,2} = 0.4: witness at the single nonempty class
  auto w = lower_bound_witness(alt, 0, 2, 0.35, 0.1);
  REQUIRE(w.has_value());
  CHECK(w->q == 5);  // c = 1/32

  CHECK_THROWS_AS(lower_bound_witness(alt, 0, 2, 0.4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lower_bound_witness(alt, 0, 2, 0.5, 0.1), std::invalid_argument);
}

TEST_CASE("witness soundness on sampled windows") {
  Rng rng(31);
  MoranSpec specs[] = {uniform_spec(2, Ratio(1, 3)), alternating_spec(), mixed_pair_spec()};
  int produced = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MoranSpec& spec = specs[trial % 3];
    std::uint64_t k_lo = rng.below(5);
    std::uint64_t k_hi = k_lo + 2 + rng.below(8);
    double root = solve_skk(spec, k_lo, k_hi, 1e-12);
    double s = rng.uniform(0.0, 0.95) * root;
    double eps = rng.uniform(0.02, 0.5);
    auto w = lower_bound_witness(spec, k_lo, k_hi, s, eps);
    REQUIRE(w.has_value());  // the proof guarantees existence
    CHECK(w->lhs_log <= w->rhs_log + 1e-12);
    ++produced;
  }
  CHECK(produced == 50);
}

TEST_CASE("cutset count sanity bound holds") {
  MoranSpec specs[] = {uniform_spec(2, Ratio(1, 2)), alternating_spec(), mixed_pair_spec()};
  Ratio deltas[] = {Ratio(1, 9), Ratio(1, 64), Ratio(1, 500)};
  for (const auto& spec : specs) {
    Word root = make_word(spec, 0, {});
    for (const auto& d : deltas) {
      Cutset c = cutset(spec, root, d);
      CHECK(c.count_bound_ok);
    }
  }
}
