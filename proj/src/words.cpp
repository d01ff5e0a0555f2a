#include "morandim/words.hpp"

#include <cmath>
#include <stdexcept>

#include "morandim/dimension.hpp"
#include "morandim/util.hpp"

namespace morandim {

namespace {

constexpr double kLogGuard = 1e-14;

// depth bound for a cutset enumeration: products shrink by at least
// c_max per level, so len <= log(delta)/log(c_max) + 1.
std::uint64_t cutset_depth_bound(const RatioSchedule& sched, const Ratio& delta) {
  Ratio cs = sched.c_star();
  if (!(delta > Ratio(0) && delta < cs))
    throw std::invalid_argument("cutset threshold must satisfy 0 < delta < c_* = " + cs.str());
  double c_max_log = -1e300;
  for (const auto& l : sched.distinct_levels())
    for (const auto& r : l.ratios) c_max_log = std::max(c_max_log, r.log());
  double len = delta.log() / c_max_log;  // both negative
  return static_cast<std::uint64_t>(len) + 3;
}

struct Sandwich {
  bool le;        // c <= delta
  bool exact;
  bool near_tie;
};

Sandwich cmp_le(const std::optional<Ratio>& exact_c, double log_c, const Ratio& delta,
                double log_delta_value) {
  if (exact_c) return {*exact_c <= delta, true, false};
  double diff = log_c - log_delta_value;
  bool near = std::fabs(diff) <= kLogGuard * std::max(1.0, std::fabs(log_delta_value));
  return {diff <= 0.0, false, near};
}

struct DfsContext {
  const ScheduleView* view;
  const std::vector<double>* inner_log_sums;  // per level id, at fixed s (may be null)
  Ratio delta;
  double log_delta_value;
  std::uint64_t budget;
  std::uint64_t visited = 0;
  bool exact = true;
  bool near_tie = false;
};

// Depth-first over suffixes starting after `level`; emits members via visit.
// visit(letters, log_c, exact_c, log_denom) — letters only when collect.
template <class Visit>
void dfs(DfsContext& ctx, std::uint64_t level, std::vector<std::uint32_t>* letters,
         double log_c, std::optional<Ratio> exact_c, double log_denom, const Visit& visit) {
  std::uint64_t next = level + 1;
  std::uint32_t level_id = ctx.view->level_id_at(next);
  const auto& lvl = ctx.view->levels[level_id];
  double a = ctx.inner_log_sums ? (*ctx.inner_log_sums)[level_id] : 0.0;
  for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(lvl.n); ++j) {
    if (++ctx.visited > ctx.budget)
      throw BudgetError("cutset enumeration exceeded its word budget", ctx.budget);
    std::uint32_t rid = lvl.ratio_ids[j];
    double child_log = log_c + ctx.view->ratio_logs[rid];
    std::optional<Ratio> child_exact;
    if (exact_c) child_exact = exact_c->checked_mul(ctx.view->ratio_exact[rid]);
    if (!child_exact) ctx.exact = false;
    Sandwich sw = cmp_le(child_exact, child_log, ctx.delta, ctx.log_delta_value);
    ctx.near_tie = ctx.near_tie || sw.near_tie;
    if (letters) letters->push_back(j + 1);
    if (sw.le) {
      visit(letters, child_log, child_exact, log_denom + a);
    } else {
      dfs(ctx, next, letters, child_log, child_exact, log_denom + a, visit);
    }
    if (letters) letters->pop_back();
  }
}

// threshold range is checked by cutset_depth_bound before this runs
DfsContext make_context(const Ratio& delta, const ScheduleView& view,
                        const CutsetOptions& opt) {
  DfsContext ctx;
  ctx.view = &view;
  ctx.inner_log_sums = nullptr;
  ctx.delta = delta;
  ctx.log_delta_value = delta.log();
  ctx.budget = opt.budget;
  return ctx;
}

}  // namespace

std::string Word::str() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(letters[i]);
  }
  return s.empty() ? "()" : s;
}

Word make_word(const MoranSpec& spec, std::uint64_t base,
               const std::vector<std::uint32_t>& letters) {
  Word w;
  w.base = base;
  w.letters = letters;
  w.exact_c = Ratio(1);
  for (std::size_t i = 0; i < letters.size(); ++i) {
    Level lvl = spec.schedule.level_at(base + i + 1);
    if (letters[i] < 1 || letters[i] > static_cast<std::uint32_t>(lvl.n))
      throw std::invalid_argument("letter " + std::to_string(letters[i]) + " outside alphabet at level " +
                                  std::to_string(base + i + 1));
    const Ratio& c = lvl.ratios[letters[i] - 1];
    w.log_c += c.log();
    if (w.exact_c) w.exact_c = w.exact_c->checked_mul(c);
  }
  return w;
}

Cutset cutset(const MoranSpec& spec, const Word& u, const Ratio& delta,
              const CutsetOptions& opt) {
  std::uint64_t base = u.end_level();
  std::uint64_t depth = cutset_depth_bound(spec.schedule, delta);
  ScheduleView view = compile_schedule(spec.schedule, base + depth);
  DfsContext ctx = make_context(delta, view, opt);

  Cutset out;
  out.base = u;
  out.delta = delta;
  std::vector<std::uint32_t> letters;
  dfs(ctx, base, &letters,
      0.0, std::optional<Ratio>(Ratio(1)), 0.0,
      [&](std::vector<std::uint32_t>* ls, double log_c, const std::optional<Ratio>& exact,
          double) {
        Word m;
        m.base = base;
        m.letters = *ls;
        m.log_c = log_c;
        m.exact_c = exact;
        out.members.push_back(std::move(m));
      });
  out.exact = ctx.exact;
  out.near_tie = ctx.near_tie;

  // sanity: count * delta^d <= c_*^{-d}  (cylinder volumes are disjoint in J)
  double lhs = std::log(static_cast<double>(out.members.size())) +
               spec.d * delta.log();
  double rhs = -spec.d * spec.schedule.c_star().log();
  out.count_bound_ok = lhs <= rhs + 1e-9;
  return out;
}

void for_each_cutset_member(
    const MoranSpec& spec, const Word& u, const Ratio& delta, double s,
    const CutsetOptions& opt,
    const std::function<void(double, double, std::uint32_t)>& visit) {
  std::uint64_t base = u.end_level();
  std::uint64_t depth = cutset_depth_bound(spec.schedule, delta);
  ScheduleView view = compile_schedule(spec.schedule, base + depth);
  DfsContext ctx = make_context(delta, view, opt);

  // per-level log(sum_j c^s) for the weight denominators
  std::vector<double> inner(view.levels.size());
  {
    std::vector<double> pw(view.ratio_logs.size());
    for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::exp(s * view.ratio_logs[i]);
    for (std::size_t l = 0; l < view.levels.size(); ++l) {
      double t = 0.0;
      for (auto id : view.levels[l].ratio_ids) t += pw[id];
      inner[l] = std::log(t);
    }
  }
  ctx.inner_log_sums = &inner;

  std::vector<std::uint32_t> depth_counter;
  dfs(ctx, base, &depth_counter,
      0.0, std::optional<Ratio>(Ratio(1)), 0.0,
      [&](std::vector<std::uint32_t>* ls, double log_c, const std::optional<Ratio>&,
          double log_denom) {
        visit(log_c, log_denom, static_cast<std::uint32_t>(ls->size()));
      });
}

double cutset_identity_residual(const MoranSpec& spec, const Word& u, const Ratio& delta,
                                double s, const CutsetOptions& opt) {
  double sum = 0.0, comp = 0.0;  // Kahan
  for_each_cutset_member(spec, u, delta, s, opt,
                         [&](double log_c, double log_denom, std::uint32_t) {
                           double w = std::exp(s * log_c - log_denom);
                           double y = w - comp;
                           double t = sum + y;
                           comp = (t - sum) - y;
                           sum = t;
                         });
  return std::fabs(sum - 1.0);
}

DyadicClasses dyadic_classes(const MoranSpec& spec, std::uint64_t k_lo, std::uint64_t k_hi,
                             std::uint64_t budget) {
  if (k_lo >= k_hi) throw std::invalid_argument("dyadic_classes requires k_lo < k_hi");
  ScheduleView view = compile_schedule(spec.schedule, k_hi);
  // enumeration size check up front
  double log_total = 0.0;
  for (std::uint64_t k = k_lo + 1; k <= k_hi; ++k)
    log_total += view.levels[view.level_id_at(k)].log_n;
  if (log_total > std::log(static_cast<double>(budget)))
    throw BudgetError("dyadic window enumeration would exceed its word budget", budget);

  DyadicClasses out;
  const double inv_ln2 = 1.0 / std::log(2.0);

  // classify c: find p with 2^{-p-1} < c <= 2^{-p}
  auto classify = [&](const std::optional<Ratio>& exact, double log_c) -> int {
    double lp = -log_c * inv_ln2;
    int p0 = static_cast<int>(std::floor(lp + 1e-9));
    if (exact) {
      for (int p = std::max(0, p0 - 1); p <= p0 + 1; ++p) {
        auto le_p = exact->le_pow2_neg(p);
        auto le_p1 = exact->le_pow2_neg(p + 1);
        if (!le_p || !le_p1) break;  // out of checked range; fall back below
        if (*le_p && !*le_p1) return p;
      }
    }
    out.exact = false;
    double frac = lp - std::floor(lp);
    if (frac < 1e-12 || frac > 1.0 - 1e-12) out.near_tie = true;
    // c ~ 2^-lp: class floor(lp) unless lp is (numerically) an integer,
    // where c = 2^-lp sits at the closed top of class lp
    int p = static_cast<int>(std::floor(lp));
    if (frac > 1.0 - 1e-12) p += 1;
    return p;
  };

  // iterative product over the window
  std::function<void(std::uint64_t, double, std::optional<Ratio>)> rec =
      [&](std::uint64_t k, double log_c, std::optional<Ratio> exact) {
        if (k == k_hi) {
          ++out.total;
          out.counts[classify(exact, log_c)] += 1;
          return;
        }
        const auto& lvl = view.levels[view.level_id_at(k + 1)];
        for (std::uint32_t j = 0; j < static_cast<std::uint32_t>(lvl.n); ++j) {
          std::uint32_t rid = lvl.ratio_ids[j];
          std::optional<Ratio> child;
          if (exact) child = exact->checked_mul(view.ratio_exact[rid]);
          rec(k + 1, log_c + view.ratio_logs[rid], child);
        }
      };
  rec(k_lo, 0.0, Ratio(1));

  out.p_min = out.counts.empty() ? 0 : out.counts.begin()->first;
  return out;
}

std::optional<Witness> lower_bound_witness(const MoranSpec& spec, std::uint64_t k_lo,
                                           std::uint64_t k_hi, double s, double eps,
                                           std::uint64_t budget) {
  if (eps <= 0.0) throw std::invalid_argument("lower_bound_witness requires eps > 0");
  // precondition s < s_{k_lo,k_hi}  <=>  Delta(s) > 1, with a guard band so
  // numerical equality at the root counts as a violation
  if (log_delta(spec, k_lo, k_hi, s) <= 1e-12)
    throw std::invalid_argument(
        "lower_bound_witness precondition violated: s >= s_{k_lo,k_hi} (Delta(s) <= 1)");

  DyadicClasses classes = dyadic_classes(spec, k_lo, k_hi, budget);
  const double ln2 = std::log(2.0);
  double log_front = std::log1p(-std::exp(-eps * ln2));  // log(1 - 2^-eps)
  for (const auto& [q, count] : classes.counts) {
    double lhs = -eps * q * ln2 + log_front;
    double rhs = std::log(static_cast<double>(count)) - q * s * ln2;
    if (lhs <= rhs) return Witness{q, count, lhs, rhs};
  }
  return std::nullopt;
}

}  // namespace morandim
