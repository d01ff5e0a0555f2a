#include "morandim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace morandim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// per-level log inner sums a_L(s) = log(sum_j c_{L,j}^s) for every distinct
// level of the view; one exp per distinct ratio.
std::vector<double> level_log_sums(const ScheduleView& v, double s) {
  std::vector<double> pw(v.ratio_logs.size());
  for (std::size_t i = 0; i < pw.size(); ++i) pw[i] = std::exp(s * v.ratio_logs[i]);
  std::vector<double> a(v.levels.size());
  for (std::size_t l = 0; l < v.levels.size(); ++l) {
    double t = 0.0;
    for (auto id : v.levels[l].ratio_ids) t += pw[id];
    a[l] = std::log(t);
  }
  return a;
}

double level_log_sum(const Level& l, double s) {
  double t = 0.0;
  for (const auto& c : l.ratios) t += std::exp(s * c.log());
  return std::log(t);
}

// Bisection for a strictly decreasing g with g(0) >= 0 >= g(hi).
template <class G>
double bisect(G&& g, double lo, double hi, double tol) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo < 0.0 || ghi > 1e-9)
    throw std::logic_error("bisection bracket failure (internal: spec not admissible?)");
  if (ghi >= 0.0) return hi;  // root at (or numerically at) the right end
  int iter = 0;
  while (hi - lo > tol && ++iter < 200) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// max over k in [0, k_cand_max] of sum_{i=k+1}^{k+m} a_{level(i)},
// streamed over the run-length view with a ring of prefix sums.
double window_max_stream(const ScheduleView& v, const std::vector<double>& a, std::uint64_t m,
                         std::uint64_t k_cand_max) {
  const std::uint64_t need = k_cand_max + m;
  if (need > v.k_max) throw std::out_of_range("window scan exceeds compiled view");
  std::vector<double> ring(m + 1, 0.0);
  double prefix = 0.0;
  double best = -kInf;
  std::uint64_t i = 0;
  for (const auto& run : v.runs) {
    const double av = a[run.level_id];
    for (std::uint64_t k = run.first; k <= run.last; ++k) {
      prefix += av;
      ++i;
      ring[i % (m + 1)] = prefix;
      if (i >= m) {
        double w = prefix - ring[(i - m) % (m + 1)];
        if (w > best) best = w;
      }
      if (i >= need) return best;
    }
  }
  return best;
}

struct PeriodicLevels {
  std::vector<Level> prefix;
  std::vector<Level> cycle;
};

PeriodicLevels periodic_levels(const RatioSchedule& s) {
  if (const auto* u = s.get_if<UniformSchedule>())
    return {{}, {uniform_level(u->n, u->c)}};
  const auto* ep = s.get_if<EventuallyPeriodicSchedule>();
  return {ep->prefix, ep->cycle};
}

// Exact sup over window starts for periodic schedules: every window of
// length m is realized with k in [0, P + L - 1]; window sums come from
// prefix cumsums plus whole-cycle multiples.
class PeriodicWindows {
 public:
  PeriodicWindows(const PeriodicLevels& pl, double s) {
    pc_.push_back(0.0);
    for (const auto& l : pl.prefix) pc_.push_back(pc_.back() + level_log_sum(l, s));
    cc_.push_back(0.0);
    for (const auto& l : pl.cycle) cc_.push_back(cc_.back() + level_log_sum(l, s));
    P_ = pl.prefix.size();
    L_ = pl.cycle.size();
  }

  double sum(std::uint64_t k, std::uint64_t m) const {  // sum_{i=k+1}^{k+m}
    double t = 0.0;
    std::uint64_t lo = k, hi = k + m;  // half-open (lo, hi]
    if (lo < P_) {
      std::uint64_t ph = std::min(hi, static_cast<std::uint64_t>(P_));
      t += pc_[ph] - pc_[lo];
      lo = ph;
    }
    if (hi > lo) {
      std::uint64_t count = hi - lo;
      std::uint64_t phase = (lo - P_) % L_;
      std::uint64_t q = count / L_;
      std::uint64_t rem = count % L_;
      t += static_cast<double>(q) * cc_[L_];
      if (phase + rem <= L_)
        t += cc_[phase + rem] - cc_[phase];
      else
        t += (cc_[L_] - cc_[phase]) + cc_[phase + rem - L_];
    }
    return t;
  }

  double max_window(std::uint64_t m) const {
    double best = -kInf;
    for (std::uint64_t k = 0; k < P_ + L_; ++k) best = std::max(best, sum(k, m));
    return best;
  }

 private:
  std::vector<double> pc_, cc_;
  std::size_t P_ = 0, L_ = 0;
};

double theta_periodic(const PeriodicLevels& pl, int d, std::uint64_t m, double tol) {
  auto g = [&](double s) { return PeriodicWindows(pl, s).max_window(m); };
  return bisect(g, 0.0, static_cast<double>(d), tol);
}

double theta_stream(const ScheduleView& view, int d, std::uint64_t m, std::uint64_t k_max,
                    double tol) {
  auto g = [&](double s) {
    return window_max_stream(view, level_log_sums(view, s), m, k_max);
  };
  return bisect(g, 0.0, static_cast<double>(d), tol);
}

// Ratio-form window machinery: inclusive windows
// of m+1 levels [k, k+m], k >= 1; value = sum log n / sum(-log c).
double ratio_window_max(const ScheduleView& v, std::uint64_t m, std::uint64_t k_cand_max) {
  const std::uint64_t need = k_cand_max + m;
  if (need > v.k_max) throw std::out_of_range("window scan exceeds compiled view");
  std::vector<double> ring_n(m + 2, 0.0), ring_c(m + 2, 0.0);
  double pn = 0.0, pc = 0.0;
  double best = -kInf;
  std::uint64_t i = 0;
  for (const auto& run : v.runs) {
    const auto& lvl = v.levels[run.level_id];
    double neg_log_c = 0.0;  // single ratio per level (validated upstream)
    neg_log_c = -v.ratio_logs[lvl.ratio_ids.front()];
    for (std::uint64_t k = run.first; k <= run.last; ++k) {
      pn += lvl.log_n;
      pc += neg_log_c;
      ++i;
      ring_n[i % (m + 2)] = pn;
      ring_c[i % (m + 2)] = pc;
      if (i >= m + 1) {
        std::uint64_t j = i - m - 1;  // prefix index k-1
        double num = pn - ring_n[j % (m + 2)];
        double den = pc - ring_c[j % (m + 2)];
        double w = num / den;
        if (w > best) best = w;
      }
      if (i >= need) return best;
    }
  }
  return best;
}

struct RatioTheta {
  double value;
  std::uint64_t k_candidates;
  bool truncated;
};

RatioTheta theta_ratio(const RatioSchedule& sched, std::uint64_t m, std::uint64_t k_max,
                       const ScheduleView* prebuilt) {
  std::uint64_t k_cand = sched.periodic() ? sched.periodic_candidates() : k_max;
  if (k_cand == 0) throw std::invalid_argument("k_max must be >= 1");
  ScheduleView local;
  const ScheduleView* v = prebuilt;
  if (!v || v->k_max < k_cand + m) {
    local = compile_schedule(sched, k_cand + m);
    v = &local;
  }
  return {ratio_window_max(*v, m, k_cand), k_cand, !sched.periodic()};
}

void fill_tail(const std::vector<double>& trace, std::uint64_t m_max, double& lo, double& hi,
               std::uint64_t& tail_lo) {
  tail_lo = std::max<std::uint64_t>(1, m_max / 8);
  lo = kInf;
  hi = -kInf;
  for (std::uint64_t m = tail_lo; m <= m_max; ++m) {
    lo = std::min(lo, trace[m - 1]);
    hi = std::max(hi, trace[m - 1]);
  }
}

}  // namespace

double log_delta(const ScheduleView& view, std::uint64_t k, std::uint64_t k_prime, double s) {
  if (k >= k_prime) throw std::invalid_argument("log_delta requires k < k'");
  if (k_prime > view.k_max) throw std::out_of_range("k' exceeds compiled view");
  if (s < 0.0) throw std::invalid_argument("log_delta requires s >= 0");
  auto a = level_log_sums(view, s);
  double t = 0.0;
  for (const auto& run : view.runs) {
    std::uint64_t lo = std::max(run.first, k + 1);
    std::uint64_t hi = std::min(run.last, k_prime);
    if (lo > hi) continue;
    t += static_cast<double>(hi - lo + 1) * a[run.level_id];
  }
  return t;
}

double log_delta(const MoranSpec& spec, std::uint64_t k, std::uint64_t k_prime, double s) {
  if (k >= k_prime) throw std::invalid_argument("log_delta requires k < k'");
  return log_delta(compile_schedule(spec.schedule, k_prime), k, k_prime, s);
}

double solve_skk(const ScheduleView& view, int d, std::uint64_t k, std::uint64_t k_prime,
                 double tol) {
  if (tol <= 0.0) throw std::invalid_argument("solve_skk requires tol > 0");
  if (k >= k_prime) throw std::invalid_argument("solve_skk requires k < k'");
  auto g = [&](double s) { return log_delta(view, k, k_prime, s); };
  return bisect(g, 0.0, static_cast<double>(d), tol);
}

double solve_skk(const MoranSpec& spec, std::uint64_t k, std::uint64_t k_prime, double tol) {
  if (k >= k_prime) throw std::invalid_argument("solve_skk requires k < k'");
  return solve_skk(compile_schedule(spec.schedule, k_prime), spec.d, k, k_prime, tol);
}

PreDimensions pre_dimensions(const MoranSpec& spec, std::uint64_t m_max, double tol) {
  if (m_max < 1) throw std::invalid_argument("pre_dimensions requires m_max >= 1");
  PreDimensions out;
  out.trace.reserve(m_max);
  ScheduleView view = compile_schedule(spec.schedule, m_max);

  if (spec.schedule.uniform_per_level()) {
    // s_{0,m} = sum log n_i / sum(-log c_i); incremental over m
    double sn = 0.0, sc = 0.0;
    for (const auto& run : view.runs) {
      const auto& lvl = view.levels[run.level_id];
      double neg_log_c = -view.ratio_logs[lvl.ratio_ids.front()];
      for (std::uint64_t kk = run.first; kk <= run.last; ++kk) {
        sn += lvl.log_n;
        sc += neg_log_c;
        out.trace.push_back(sn / sc);
      }
    }
  } else {
    double prev = 0.5 * spec.d;
    for (std::uint64_t m = 1; m <= m_max; ++m) {
      // warm-started bracket around the previous root
      double w = std::max(0.05, 2.0 / static_cast<double>(m));
      double lo = std::max(0.0, prev - w);
      double hi = std::min(static_cast<double>(spec.d), prev + w);
      while (log_delta(view, 0, m, lo) < 0.0 && lo > 0.0) lo = std::max(0.0, lo - w);
      while (log_delta(view, 0, m, hi) > 0.0 && hi < spec.d)
        hi = std::min(static_cast<double>(spec.d), hi + w);
      auto g = [&](double s) { return log_delta(view, 0, m, s); };
      prev = bisect(g, lo, hi, tol);
      out.trace.push_back(prev);
    }
  }
  fill_tail(out.trace, m_max, out.s_lower, out.s_upper, out.tail_lo);
  return out;
}

ThetaResult theta(const MoranSpec& spec, std::uint64_t m, std::uint64_t k_max, double tol) {
  if (m < 1) throw std::invalid_argument("theta requires m >= 1");
  if (spec.schedule.periodic()) {
    PeriodicLevels pl = periodic_levels(spec.schedule);
    return {theta_periodic(pl, spec.d, m, tol), false, spec.schedule.periodic_candidates()};
  }
  ScheduleView view = compile_schedule(spec.schedule, k_max + m);
  return {theta_stream(view, spec.d, m, k_max, tol), true, k_max + 1};
}

std::vector<double> DimensionReport::running_inf() const {
  std::vector<double> out;
  double inf = kInf;
  for (const auto& [m, th] : theta_trace) {
    inf = std::min(inf, th);
    out.push_back(inf);
  }
  return out;
}

DimensionReport assouad_moran(const MoranSpec& spec, const DimOptions& opt) {
  if (opt.m_max < 1 || opt.k_max < 1) throw std::invalid_argument("horizons must be >= 1");
  Ratio cs = spec.schedule.c_star();
  if (!cs.positive())
    throw std::invalid_argument("assouad_moran requires c_* > 0");

  DimensionReport rep;
  rep.horizon_m = opt.m_max;
  rep.tol = opt.tol;
  rep.d = spec.d;
  rep.tail_horizon = opt.tail_horizon ? opt.tail_horizon : std::max<std::uint64_t>(1000, opt.m_max);

  double inf = kInf;
  if (spec.schedule.periodic()) {
    PeriodicLevels pl = periodic_levels(spec.schedule);
    rep.horizon_k = spec.schedule.periodic_candidates();
    for (std::uint64_t m = 1; m <= opt.m_max; ++m) {
      double th = theta_periodic(pl, spec.d, m, opt.tol);
      rep.theta_trace.emplace_back(m, th);
      inf = std::min(inf, th);
    }
  } else {
    ScheduleView view = compile_schedule(spec.schedule, opt.k_max + opt.m_max);
    rep.horizon_k = opt.k_max;
    rep.sup_truncated = true;
    for (std::uint64_t m = 1; m <= opt.m_max; ++m) {
      double th = theta_stream(view, spec.d, m, opt.k_max, opt.tol);
      rep.theta_trace.emplace_back(m, th);
      inf = std::min(inf, th);
    }
    auto needed = marker_kmax_needed(spec.schedule, opt.m_max);
    if (needed && *needed > opt.k_max)
      rep.notes.push_back("k_max=" + std::to_string(opt.k_max) +
                          " is structurally insufficient for window m=" +
                          std::to_string(opt.m_max) + "; the sup needs k_max >= " +
                          std::to_string(*needed));
  }
  rep.s_assouad = inf;
  rep.convergence_gap = rep.theta_trace.back().second - inf;

  PreDimensions pre = pre_dimensions(spec, rep.tail_horizon, opt.tol);
  rep.s_lower = pre.s_lower;
  rep.s_upper = pre.s_upper;
  rep.tail_lo = pre.tail_lo;
  return rep;
}

DimensionReport assouad_cantor(const CantorLikeSpec& spec, const DimOptions& opt) {
  if (opt.m_max < 1 || opt.k_max < 1) throw std::invalid_argument("horizons must be >= 1");
  if (!spec.schedule.uniform_per_level())
    throw std::invalid_argument("Cantor-like schedule must carry one ratio per level");

  DimensionReport rep;
  rep.horizon_m = opt.m_max;
  rep.tol = opt.tol;
  rep.d = 1;
  rep.tail_horizon = opt.tail_horizon ? opt.tail_horizon : std::max<std::uint64_t>(1000, opt.m_max);
  rep.notes.push_back("perturbation a_k does not enter the dimension formula");

  std::uint64_t k_cand = spec.schedule.periodic() ? spec.schedule.periodic_candidates()
                                                  : opt.k_max;
  ScheduleView view = compile_schedule(spec.schedule, k_cand + opt.m_max);
  double inf = kInf;
  for (std::uint64_t m = 1; m <= opt.m_max; ++m) {
    auto th = theta_ratio(spec.schedule, m, opt.k_max, &view);
    rep.theta_trace.emplace_back(m, th.value);
    rep.sup_truncated = th.truncated;
    rep.horizon_k = th.k_candidates;
    inf = std::min(inf, th.value);
  }
  rep.s_assouad = inf;
  rep.convergence_gap = rep.theta_trace.back().second - inf;

  MoranSpec as_moran{spec.schedule, 1};
  PreDimensions pre = pre_dimensions(as_moran, rep.tail_horizon, opt.tol);
  rep.s_lower = pre.s_lower;
  rep.s_upper = pre.s_upper;
  rep.tail_lo = pre.tail_lo;
  return rep;
}

DimensionReport uniform_corollary(const MoranSpec& spec, const DimOptions& opt) {
  if (!spec.schedule.uniform_per_level())
    throw std::invalid_argument("uniform_corollary rejects levels with unequal ratios");
  CantorLikeSpec c;
  c.schedule = spec.schedule;
  DimensionReport rep = assouad_cantor(c, opt);
  rep.d = spec.d;
  rep.notes.clear();
  rep.notes.push_back("corollary fast path: windows evaluated as ratios of log sums");
  return rep;
}

bool report_ordering_ok(const DimensionReport& r) {
  double slack = 2.0 * std::max(r.tol, 1e-15);
  if (r.s_lower < -slack) return false;
  if (r.s_lower > r.s_upper + slack) return false;
  if (r.s_assouad > r.d + slack) return false;
  // s_{0,m} <= theta_m pointwise, so the tail max is bounded by the max of
  // theta over the same window; only checkable when the trace covers it.
  if (r.tail_horizon <= r.horizon_m) {
    double bound = r.s_assouad + r.convergence_gap;
    for (const auto& [m, th] : r.theta_trace)
      if (m >= r.tail_lo) bound = std::max(bound, th);
    if (r.s_upper > bound + slack) return false;
  }
  return true;
}

std::optional<std::uint64_t> marker_kmax_needed(const RatioSchedule& s, std::uint64_t m) {
  const auto* mf = s.get_if<MarkerFamilySchedule>();
  if (!mf) return std::nullopt;
  try {
    return mf->marker(static_cast<std::size_t>(m)) + m;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace morandim
