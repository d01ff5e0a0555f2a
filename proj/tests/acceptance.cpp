// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "cover_oracle.hpp"
#include "fixtures.hpp"
#include "morandim/dimension.hpp"
#include "morandim/geometry.hpp"
#include "morandim/scale_function.hpp"
#include "morandim/spec_io.hpp"
#include "morandim/util.hpp"
#include "morandim/validation.hpp"
#include "morandim/words.hpp"

using namespace morandim;
using namespace morandim::testing;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s  (%s)\n", ok ? "PASS" : "FAIL", criterion, name,
              detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- criterion 1: Example-1 regression ------------------------------------
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  LoadedSpec loaded = load_spec_file(std::string(FIXTURE_DIR) + "/example1.json");
  const MoranSpec& spec = *loaded.moran();
  if (!validate(spec).ok()) {
    report(1, "example-1 regression", false, "fixture failed validation");
    return;
  }
  const std::uint64_t p8 = 362880;
  DimOptions opt;
  opt.m_max = 8;
  opt.k_max = p8 + 8;
  opt.tail_horizon = 40000;
  opt.tol = 1e-12;
  DimensionReport rep = assouad_moran(spec, opt);

  bool theta_ok = true;
  for (const auto& [m, th] : rep.theta_trace)
    if (std::fabs(th - 0.5) > 1e-9) theta_ok = false;
  bool assouad_ok = std::fabs(rep.s_assouad - 0.5) <= 1e-9;
  bool lower_ok = rep.s_lower >= 0.250 && rep.s_lower <= 0.262;
  bool upper_ok = rep.s_upper >= 0.315 && rep.s_upper <= 0.334;
  double dt = seconds_since(t0);
  bool time_ok = dt < 60.0;

  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "theta_m=0.5 for m<=8: %s; s**=%.12f; s*=%.6f in [0.250,0.262]: %s; "
                "s^*=%.6f in [0.315,0.334]: %s; %.2fs",
                theta_ok ? "yes" : "NO", rep.s_assouad, rep.s_lower, lower_ok ? "yes" : "NO",
                rep.s_upper, upper_ok ? "yes" : "NO", dt);
  report(1, "example-1 regression", theta_ok && assouad_ok && lower_ok && upper_ok && time_ok,
         buf);
}

// --- criterion 2: uniform sanity -------------------------------------------
void criterion2() {
  const double target = std::log(2.0) / std::log(3.0);
  DimOptions opt;
  opt.m_max = 32;
  opt.k_max = 8;
  opt.tail_horizon = 1000;
  DimensionReport rep = assouad_moran(uniform_spec(2, Ratio(1, 3)), opt);
  bool ok = std::fabs(rep.s_lower - target) <= 1e-9 && std::fabs(rep.s_upper - target) <= 1e-9 &&
            std::fabs(rep.s_assouad - target) <= 1e-9;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "s*=%.12f s^*=%.12f s**=%.12f vs log2/log3=%.12f",
                rep.s_lower, rep.s_upper, rep.s_assouad, target);
  report(2, "uniform(2,1/3) sanity", ok, buf);
}

// --- criterion 3: alternating oracle ---------------------------------------
void criterion3() {
  MoranSpec alt = alternating_spec();
  bool closed_ok = true;
  double worst = 0.0;
  for (std::uint64_t m = 1; m <= 100; ++m) {
    double closed = static_cast<double>(m) / (2.0 * ((m + 1) / 2) + 3.0 * (m / 2));
    double th = theta(alt, m, 1, 1e-12).value;
    worst = std::max(worst, std::fabs(th - closed));
    if (std::fabs(th - closed) > 1e-9) closed_ok = false;
  }
  DimOptions opt;
  opt.m_max = 10000;
  opt.k_max = 2;
  opt.tail_horizon = 10000;
  DimensionReport rep = assouad_moran(alt, opt);
  bool inf_ok = std::fabs(rep.s_assouad - 0.4) <= 1e-3;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max |theta_m - closed| = %.2e (m<=100); s**=%.9f",
                worst, rep.s_assouad);
  report(3, "alternating {1/4,1/8} oracle", closed_ok && inf_ok, buf);
}

// --- criterion 4: measure identity suite ------------------------------------
void criterion4() {
  Rng rng(20260810);
  const Ratio pool[] = {Ratio(1, 2), Ratio(1, 3), Ratio(1, 4), Ratio(1, 5), Ratio(1, 8),
                        Ratio(1, 16)};
  double worst = 0.0;
  std::size_t max_members = 0;
  int cases = 0;
  bool ok = true;

  CutsetOptions copt;
  copt.budget = 10'000'000;

  auto run_case = [&](const MoranSpec& spec, const Word& u, const Ratio& delta, double s) {
    Cutset cs = cutset(spec, u, delta, copt);
    max_members = std::max(max_members, cs.members.size());
    double resid = cutset_identity_residual(spec, u, delta, s, copt);
    worst = std::max(worst, resid);
    if (resid > 1e-10) ok = false;
    ++cases;
  };

  // 190 randomized small-to-medium cases
  for (int trial = 0; trial < 190; ++trial) {
    std::vector<std::pair<int, Ratio>> levels;
    int len = 1 + static_cast<int>(rng.below(3));
    for (int i = 0; i < len; ++i) {
      Ratio c = pool[rng.below(6)];
      int n_max = static_cast<int>(1.0 / c.value());
      int n = 2 + static_cast<int>(rng.below(std::max(1, n_max - 1)));
      if (n > n_max) n = n_max;
      levels.push_back({n, c});
    }
    MoranSpec spec = cycle_spec(levels);
    double cs = spec.schedule.c_star().value();
    Ratio delta = dyadic40(rng.uniform(2e-5, 0.9) * cs);
    std::vector<std::uint32_t> base;
    for (std::uint64_t i = 0; i < rng.below(4); ++i)
      base.push_back(1 + static_cast<std::uint32_t>(
                             rng.below(spec.schedule.level_at(i + 1).n)));
    run_case(spec, make_word(spec, 0, base), delta, rng.uniform(0.0, 1.0));
  }

  // 10 large cases: ~6.5e4 members each (uniform(4,1/3), d=2, delta in (3^-8, 3^-7])
  MoranSpec big = uniform_spec(4, Ratio(1, 3), 2);
  for (int trial = 0; trial < 10; ++trial) {
    Ratio delta = dyadic40(rng.uniform(1.6e-4, 4.5e-4));
    run_case(big, make_word(big, 0, {}), delta, rng.uniform(0.0, 2.0));
  }

  bool size_ok = max_members >= 50000 && max_members <= 100000;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d cases, worst residual %.2e, largest cutset %zu",
                cases, worst, max_members);
  report(4, "measure identity residuals", ok && cases == 200 && size_ok, buf);
}

// --- criterion 5: greedy-cover oracle ---------------------------------------
void criterion5() {
  Rng rng(5550123);
  int agree = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = 1 + static_cast<int>(rng.below(12));
    std::vector<double> pts;
    for (int i = 0; i < 2 * n; ++i) pts.push_back(rng.next_double());
    std::sort(pts.begin(), pts.end());
    std::vector<Interval> ivs;
    for (int i = 0; i < n; ++i) ivs.push_back({pts[2 * i], pts[2 * i + 1]});
    IntervalSet s(std::move(ivs), 0, "random");
    double x = rng.next_double();
    double R = rng.uniform(0.05, 0.8);
    double r = rng.uniform(0.005, 0.25);
    if (covering_number(s, x, R, r).n == exhaustive_min_cover(s, x, R, r)) ++agree;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/500 greedy == exhaustive minimum", agree);
  report(5, "greedy cover optimality", agree == 500, buf);
}

// --- criterion 6: formula vs empirical --------------------------------------
void criterion6() {
  auto t0 = std::chrono::steady_clock::now();
  MoranSpec third = uniform_spec(2, Ratio(1, 3));
  EstimatorOptions opt;
  opt.realize.placement = Placement::UniformGap;
  opt.realize.gamma = 1.0;
  opt.rho_grid.clear();
  for (int j = 2; j <= 6; ++j) opt.rho_grid.push_back(std::pow(3.0, -j));
  for (int j = 1; j <= 4; ++j) opt.R_grid.push_back(std::pow(3.0, -j));
  opt.centers_per_R = 8;
  EstimatorResult third_res = empirical_assouad(third, opt);
  double target = std::log(2.0) / std::log(3.0);
  bool third_ok = std::fabs(third_res.estimate - target) <= 0.05;

  MoranSpec half = uniform_spec(2, Ratio(1, 2));
  EstimatorOptions hopt;
  hopt.realize.placement = Placement::LeftPacked;
  for (int j = 2; j <= 7; ++j) hopt.rho_grid.push_back(std::pow(2.0, -j));
  for (int j = 1; j <= 4; ++j) hopt.R_grid.push_back(std::pow(2.0, -j));
  hopt.centers_per_R = 8;
  EstimatorResult half_res = empirical_assouad(half, hopt);
  bool half_ok = std::fabs(half_res.estimate - 1.0) <= 0.05;

  double dt = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "middle-third %.4f vs %.4f; full-interval %.4f vs 1; %.2fs", third_res.estimate,
                target, half_res.estimate, dt);
  report(6, "formula vs empirical", third_ok && half_ok && dt < 120.0, buf);
}

// --- criterion 7: overlap boundedness ---------------------------------------
void criterion7() {
  MoranSpec third = uniform_spec(2, Ratio(1, 3));
  RealizeOptions ropt;
  std::vector<Ratio> deltas;
  for (int j = 2; j <= 8; ++j) deltas.push_back(*Ratio(1, 3).checked_pow(j));
  OverlapResult res = overlap_bound(third, ropt, deltas, 0, 1);
  bool flat = true;
  for (const auto& [d, n] : res.per_delta)
    if (n != res.per_delta.front().second) flat = false;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max overlap %d across 3^-2..3^-8", res.max_overlap);
  report(7, "overlap boundedness", flat, buf);
}

// --- criterion 8: formula vs scale-function cross-check ----------------------
void criterion8() {
  struct Case {
    const char* name;
    CantorLikeSpec spec;
    std::vector<double> rho;
    std::uint64_t depth;
    std::uint64_t m_max;
    std::uint64_t k_max;
    bool pin_half;  // both sides must also sit within 0.02 of 1/2
  };
  Perturbation pert{Perturbation::Variant(GeometricPerturbation{0.1, 0.5})};
  std::vector<Case> cases;
  {
    CantorLikeSpec u;
    u.schedule = RatioSchedule(UniformSchedule{2, Ratio(1, 3)});
    u.perturbation = pert;
    cases.push_back({"uniform", u,
                     {std::pow(3.0, -2), std::pow(3.0, -4), std::pow(3.0, -6)},
                     60, 12, 48, false});
  }
  {
    CantorLikeSpec a;
    a.schedule = alternating_spec().schedule;
    a.perturbation = pert;
    cases.push_back({"alternating", a,
                     {std::pow(32.0, -2), std::pow(32.0, -4), std::pow(32.0, -6)},
                     60, 11, 48, false});
  }
  {
    CantorLikeSpec e;
    e.schedule = example1_spec().schedule;
    e.perturbation = pert;
    cases.push_back({"example-1 pattern", e,
                     {std::pow(4.0, -2), std::pow(4.0, -3), std::pow(4.0, -4)},
                     130, 3, 126, true});
  }

  bool all_ok = true;
  std::string detail;
  for (const auto& cs : cases) {
    if (!validate(cs.spec).ok()) {
      all_ok = false;
      detail += std::string(cs.name) + ": validation failed; ";
      continue;
    }
    ScaleFunction h = scale_from_cantor(cs.spec, cs.depth);
    ScaleEstimate afs = assouad_from_scale(h, cs.rho, {1.0, std::exp(-h.floor_x())});
    DimOptions opt;
    opt.m_max = cs.m_max;
    opt.k_max = cs.k_max;
    DimensionReport ac = assouad_cantor(cs.spec, opt);
    double diff = std::fabs(afs.estimate - ac.s_assouad);
    bool ok = diff <= 0.02;
    if (cs.pin_half)
      ok = ok && std::fabs(afs.estimate - 0.5) <= 0.02 && std::fabs(ac.s_assouad - 0.5) <= 0.02;
    all_ok = all_ok && ok;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%s |%.4f-%.4f|=%.4f; ", cs.name, afs.estimate,
                  ac.s_assouad, diff);
    detail += buf;
  }
  report(8, "scale-function cross-check", all_ok, detail);
}

// --- criterion 9: witness soundness ------------------------------------------
void criterion9() {
  Rng rng(990817);
  MoranSpec specs[] = {uniform_spec(2, Ratio(1, 3)), uniform_spec(2, Ratio(1, 4)),
                       alternating_spec(), mixed_pair_spec(), example1_spec()};
  int produced = 0, sound = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const MoranSpec& spec = specs[trial % 5];
    std::uint64_t k_lo = rng.below(6);
    std::uint64_t k_hi = k_lo + 2 + rng.below(10);
    double root = solve_skk(spec, k_lo, k_hi, 1e-12);
    double s = rng.uniform(0.05, 0.95) * root;
    double eps = rng.uniform(0.02, 0.5);
    auto w = lower_bound_witness(spec, k_lo, k_hi, s, eps);
    if (!w) continue;
    ++produced;
    if (w->lhs_log <= w->rhs_log + 1e-12) ++sound;
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d/50 witnesses returned, %d sound", produced, sound);
  report(9, "witness soundness", produced == 50 && sound == 50, buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
