#include "morandim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "morandim/util.hpp"

namespace morandim {

namespace {

constexpr double kFeasSlack = 1e-12;

std::string make_meta(std::uint64_t depth, const RealizeOptions& opt, const char* flavor) {
  std::ostringstream os;
  os << "depth=" << depth << " spec=" << std::hex << opt.spec_hash << std::dec
     << " placement=" << placement_name(opt.placement) << " gamma=" << opt.gamma
     << " seed=" << opt.seed << " kind=" << flavor;
  return os.str();
}

// Child factors for one parent at level k (relative to the parent length).
// Moran: the level's ratios. Cantor-like: c_k(1 + sigma_j a_k).
struct ChildFactorSource {
  const RatioSchedule* schedule = nullptr;
  const Perturbation* perturbation = nullptr;  // null for plain Moran
  SignMode signs = SignMode::Alternating;
  mutable Rng rng{0};

  std::vector<double> factors(std::uint64_t k, const Level& lvl) const {
    std::vector<double> f(lvl.ratios.size());
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = lvl.ratios[j].value();
    if (perturbation) {
      double a = perturbation->at(k);
      for (std::size_t j = 0; j < f.size(); ++j) {
        double sigma;
        if (signs == SignMode::Alternating)
          sigma = (j % 2 == 0) ? -1.0 : 1.0;
        else
          sigma = rng.uniform(-1.0, 1.0);
        f[j] *= 1.0 + sigma * a;
      }
    }
    return f;
  }
};

// Lays out the children of [a, a+len] and calls child(j, interval).
void place_children(double a, double len, const std::vector<double>& factors,
                    Placement placement, double gamma, std::uint64_t level,
                    const std::function<void(std::size_t, Interval)>& child) {
  double sum = 0.0;
  for (double f : factors) sum += f * len;
  double slack = len - sum;
  if (slack < -kFeasSlack * len)
    throw std::runtime_error("infeasible placement at level " + std::to_string(level) +
                             ": children exceed parent length");
  double gap = 0.0;
  if (placement == Placement::UniformGap && factors.size() > 1)
    gap = gamma * std::max(0.0, slack) / static_cast<double>(factors.size() - 1);
  double x = a;
  for (std::size_t j = 0; j < factors.size(); ++j) {
    double l = factors[j] * len;
    child(j, Interval{x, x + l});
    x += l + gap;
  }
  if (x - gap > a + len + kFeasSlack * std::max(1.0, len))
    throw std::runtime_error("infeasible placement at level " + std::to_string(level) +
                             ": gaps overflow parent");
}

IntervalSet realize_levels_impl(const RatioSchedule& sched, const ChildFactorSource& src,
                                std::uint64_t depth, const RealizeOptions& opt,
                                const char* flavor) {
  std::vector<Interval> cur{{0.0, 1.0}};
  for (std::uint64_t k = 1; k <= depth; ++k) {
    Level lvl = sched.level_at(k);
    if (cur.size() > opt.max_intervals / static_cast<std::uint64_t>(lvl.n))
      throw BudgetError("realization would exceed the interval budget at level " +
                            std::to_string(k),
                        opt.max_intervals);
    std::vector<Interval> next;
    next.reserve(cur.size() * lvl.n);
    for (const auto& parent : cur) {
      auto f = src.factors(k, lvl);
      place_children(parent.a, parent.length(), f, opt.placement, opt.gamma, k,
                     [&next](std::size_t, Interval iv) { next.push_back(iv); });
    }
    cur = std::move(next);
  }
  return IntervalSet(std::move(cur), depth, make_meta(depth, opt, flavor));
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> intervals, std::uint64_t depth, std::string meta)
    : ivs_(std::move(intervals)), depth_(depth), meta_(std::move(meta)) {
  std::sort(ivs_.begin(), ivs_.end(), [](const Interval& x, const Interval& y) {
    return x.a < y.a;
  });
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (ivs_[i].b < ivs_[i].a)
      throw std::invalid_argument("IntervalSet: inverted interval");
    if (i > 0 && ivs_[i].a < ivs_[i - 1].b - 1e-15)
      throw std::invalid_argument("IntervalSet: overlapping interiors");
  }
}

double IntervalSet::max_length() const {
  double m = 0.0;
  for (const auto& iv : ivs_) m = std::max(m, iv.length());
  return m;
}

std::string placement_name(Placement p) {
  return p == Placement::UniformGap ? "uniform-gap" : "left-packed";
}

IntervalSet realize_level(const MoranSpec& spec, std::uint64_t depth,
                          const RealizeOptions& opt) {
  if (spec.d != 1)
    throw std::invalid_argument("geometric realization is 1-D only (d = 1)");
  ChildFactorSource src;
  src.schedule = &spec.schedule;
  return realize_levels_impl(spec.schedule, src, depth, opt, "moran");
}

IntervalSet realize_level(const CantorLikeSpec& spec, std::uint64_t depth,
                          const RealizeOptions& opt) {
  ChildFactorSource src;
  src.schedule = &spec.schedule;
  src.perturbation = &spec.perturbation;
  src.signs = opt.signs;
  src.rng = Rng(opt.seed);
  return realize_levels_impl(spec.schedule, src, depth, opt, "cantor");
}

IntervalSet realize_cutset(const MoranSpec& spec, const Ratio& delta,
                           const RealizeOptions& opt) {
  if (spec.d != 1)
    throw std::invalid_argument("geometric realization is 1-D only (d = 1)");
  Ratio cs = spec.schedule.c_star();
  if (!(delta > Ratio(0) && delta < cs))
    throw std::invalid_argument("cutset threshold must satisfy 0 < delta < c_* = " + cs.str());

  const double dlog = delta.log();
  std::vector<Interval> out;
  std::uint64_t visited = 0;
  std::function<void(std::uint64_t, Interval, double)> rec =
      [&](std::uint64_t level, Interval iv, double log_c) {
        Level lvl = spec.schedule.level_at(level + 1);
        std::vector<double> f(lvl.ratios.size());
        for (std::size_t j = 0; j < f.size(); ++j) f[j] = lvl.ratios[j].value();
        place_children(iv.a, iv.length(), f, opt.placement, opt.gamma, level + 1,
                       [&](std::size_t j, Interval child) {
                         if (++visited > opt.max_intervals)
                           throw BudgetError("cutset realization exceeded the interval budget",
                                             opt.max_intervals);
                         double child_log = log_c + lvl.ratios[j].log();
                         if (child_log <= dlog)
                           out.push_back(child);
                         else
                           rec(level + 1, child, child_log);
                       });
      };
  rec(0, Interval{0.0, 1.0}, 0.0);
  return IntervalSet(std::move(out), 0, make_meta(0, opt, "cutset"));
}

CoverResult covering_number(const IntervalSet& s, double x, double R, double r) {
  if (!(R > 0.0) || !(r > 0.0))
    throw std::invalid_argument("covering_number requires positive radii");

  // clip S to the closed ball [x-R, x+R]
  const double lo = x - R, hi = x + R;
  std::vector<Interval> clipped;
  for (const auto& iv : s.intervals()) {
    if (iv.b < lo || iv.a > hi) continue;
    clipped.push_back({std::max(iv.a, lo), std::min(iv.b, hi)});
  }
  CoverResult res;
  if (clipped.empty()) return res;
  if (r >= R) {
    res.n = 1;
    res.witnesses.push_back({x - r, x + r});
    return res;
  }

  const double len = 2.0 * r;
  double covered_until = clipped.front().a - 1.0;
  for (const auto& iv : clipped) {
    if (iv.b <= covered_until) continue;
    double start = std::max(iv.a, covered_until);
    while (true) {
      res.witnesses.push_back({start, start + len});
      ++res.n;
      covered_until = start + len;
      if (covered_until >= iv.b) break;
      start = covered_until;
    }
  }

  // coverage audit: merged witnesses must contain every clipped interval
  std::vector<Interval> merged;
  for (const auto& w : res.witnesses) {
    if (!merged.empty() && w.a <= merged.back().b + 1e-15)
      merged.back().b = std::max(merged.back().b, w.b);
    else
      merged.push_back(w);
  }
  std::size_t mi = 0;
  for (const auto& iv : clipped) {
    while (mi < merged.size() && merged[mi].b < iv.a) ++mi;
    if (mi >= merged.size() || merged[mi].a > iv.a + 1e-12 || merged[mi].b < iv.b - 1e-12)
      throw std::logic_error("covering_number: witness audit failed");
  }
  return res;
}

namespace {

// cumulative max child length per level, for the depth rule
std::vector<double> max_length_ladder(const RatioSchedule& sched, const Perturbation* pert,
                                      std::uint64_t max_depth) {
  std::vector<double> ladder(max_depth + 1, 1.0);
  double cur = 1.0;
  for (std::uint64_t k = 1; k <= max_depth; ++k) {
    Level lvl = sched.level_at(k);
    double mx = 0.0;
    for (const auto& c : lvl.ratios) mx = std::max(mx, c.value());
    if (pert) mx *= 1.0 + pert->at(k);
    cur *= mx;
    ladder[k] = cur;
  }
  return ladder;
}

template <class Realize>
EstimatorResult empirical_impl(const RatioSchedule& sched, const Perturbation* pert,
                               double c_star, const EstimatorOptions& opt,
                               const Realize& realize) {
  if (opt.rho_grid.empty() || opt.R_grid.empty())
    throw std::invalid_argument("empirical_assouad requires nonempty grids");
  for (std::size_t i = 1; i < opt.rho_grid.size(); ++i)
    if (opt.rho_grid[i] >= opt.rho_grid[i - 1])
      throw std::invalid_argument("rho grid must be strictly decreasing");
  for (std::size_t i = 1; i < opt.R_grid.size(); ++i)
    if (opt.R_grid[i] >= opt.R_grid[i - 1])
      throw std::invalid_argument("R grid must be strictly decreasing");

  auto ladder = max_length_ladder(sched, pert, opt.max_depth);
  auto depth_for = [&](double scale) -> std::uint64_t {
    for (std::uint64_t k = 0; k < ladder.size(); ++k)
      if (ladder[k] <= scale) return k;
    throw BudgetError("depth rule exceeded max_depth=" + std::to_string(opt.max_depth) +
                          " before resolving scale " + std::to_string(scale),
                      opt.max_depth);
  };

  std::map<std::uint64_t, IntervalSet> cache;
  auto realized = [&](std::uint64_t depth) -> const IntervalSet& {
    auto it = cache.find(depth);
    if (it == cache.end()) it = cache.emplace(depth, realize(depth)).first;
    return it->second;
  };

  EstimatorResult res;
  for (double rho : opt.rho_grid) {
    double t_rho = 0.0;
    for (double R : opt.R_grid) {
      const double r = rho * R;
      const IntervalSet& deep = realized(depth_for(r * c_star));
      const IntervalSet& coarse = realized(depth_for(R));
      // centers: leftmost points of coarse intervals, strided to the cap
      std::vector<double> xs;
      const auto& civ = coarse.intervals();
      std::size_t cap = static_cast<std::size_t>(std::max(1, opt.centers_per_R));
      std::size_t stride = std::max<std::size_t>(1, civ.size() / cap);
      for (std::size_t i = 0; i < civ.size() && xs.size() < cap; i += stride)
        xs.push_back(civ[i].a);
      for (double x : xs) {
        CoverResult cov = covering_number(deep, x, R, r);
        if (cov.n == 0) continue;
        double t = std::log(static_cast<double>(cov.n)) / (-std::log(rho));
        res.rows.push_back({rho, R, x, cov.n, t});
        t_rho = std::max(t_rho, t);
      }
    }
    res.t_of_rho.emplace_back(rho, t_rho);
  }
  res.estimate = res.t_of_rho.back().second;
  for (std::size_t i = 1; i < res.t_of_rho.size(); ++i) {
    if (res.t_of_rho[i].second > res.t_of_rho[i - 1].second + 0.05) {
      res.notes.push_back("t(rho) rose along the grid; refine rho or R grids");
      break;
    }
  }
  return res;
}

}  // namespace

EstimatorResult empirical_assouad(const MoranSpec& spec, const EstimatorOptions& opt) {
  if (spec.d != 1)
    throw std::invalid_argument("the empirical estimator works on 1-D realizations");
  return empirical_impl(spec.schedule, nullptr, spec.schedule.c_star().value(), opt,
                        [&](std::uint64_t depth) { return realize_level(spec, depth, opt.realize); });
}

EstimatorResult empirical_assouad(const CantorLikeSpec& spec, const EstimatorOptions& opt) {
  return empirical_impl(spec.schedule, &spec.perturbation, spec.schedule.c_star().value(), opt,
                        [&](std::uint64_t depth) { return realize_level(spec, depth, opt.realize); });
}

OverlapResult overlap_bound(const MoranSpec& spec, const RealizeOptions& opt,
                            const std::vector<Ratio>& deltas, int centers,
                            std::uint64_t seed) {
  OverlapResult out;
  for (const auto& delta : deltas) {
    IntervalSet cut = realize_cutset(spec, delta, opt);
    const auto& ivs = cut.intervals();
    const double dv = delta.value();

    std::vector<double> xs;
    if (centers <= 0 || static_cast<std::size_t>(centers) >= ivs.size()) {
      for (const auto& iv : ivs) xs.push_back(iv.a);
    } else {
      Rng rng(seed);
      xs.push_back(ivs.front().a);
      xs.push_back(ivs.back().a);
      for (int i = 2; i < centers; ++i)
        xs.push_back(ivs[rng.below(ivs.size())].a);
    }

    int best = 0;
    for (double x : xs) {
      const double lo = x - dv, hi = x + dv;
      auto first = std::lower_bound(ivs.begin(), ivs.end(), lo,
                                    [](const Interval& iv, double v) { return iv.b < v; });
      int count = 0;
      for (auto it = first; it != ivs.end() && it->a <= hi; ++it) ++count;
      best = std::max(best, count);
    }
    out.per_delta.emplace_back(dv, best);
    out.max_overlap = std::max(out.max_overlap, best);
  }
  return out;
}

}  // namespace morandim
