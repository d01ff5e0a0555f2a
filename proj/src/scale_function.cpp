#include "morandim/scale_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace morandim {

ScaleFunction::ScaleFunction(std::vector<double> breakpoint_x, std::vector<double> values)
    : xs_(std::move(breakpoint_x)), values_(std::move(values)) {
  if (xs_.size() != values_.size() || xs_.empty())
    throw std::invalid_argument("ScaleFunction needs one value per breakpoint");
  double prev = 0.0;
  for (double x : xs_) {
    if (!(x > prev)) throw std::invalid_argument("breakpoints must be strictly decreasing in r");
    prev = x;
  }
  double lo = inf_value(), hi = sup_value();
  if (!(lo > 0.0) || !std::isfinite(hi))
    throw std::invalid_argument("scale function values must satisfy 0 < inf <= sup < inf");
}

ScaleFunction ScaleFunction::from_breakpoints_r(const std::vector<double>& r,
                                                const std::vector<double>& values) {
  std::vector<double> xs(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0 && r[i] < 1.0))
      throw std::invalid_argument("breakpoints must lie in (0,1)");
    xs[i] = -std::log(r[i]);
  }
  return ScaleFunction(std::move(xs), values);
}

std::size_t ScaleFunction::piece_at(double x) const {
  if (x < 0.0) throw std::out_of_range("scale queried above r = 1");
  // piece k covers [x_{k-1}, x_k); value at x_K and beyond extends h_K
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin()) + 1;
  if (k > values_.size()) {
    touched_tail_ = true;
    k = values_.size();
  }
  return k;
}

double ScaleFunction::value_at_x(double x) const { return values_[piece_at(x) - 1]; }

double ScaleFunction::value_above_x(double x) const {
  // limit as r -> e^{-x} from above, i.e. x from below
  if (x <= 0.0) return values_.front();
  auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - xs_.begin()) + 1;  // piece with x_k >= x
  if (k > values_.size()) {
    touched_tail_ = true;
    k = values_.size();
  }
  return values_[k - 1];
}

double ScaleFunction::value_at_r(double r) const {
  if (!(r > 0.0 && r <= 1.0)) throw std::out_of_range("scale function domain is (0, 1]");
  return value_at_x(-std::log(r));
}

double ScaleFunction::inf_value() const {
  return *std::min_element(values_.begin(), values_.end());
}
double ScaleFunction::sup_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

ScaleFunction scale_from_cantor(const CantorLikeSpec& spec, std::uint64_t depth) {
  if (depth < 1) throw std::invalid_argument("scale_from_cantor requires depth >= 1");
  if (!spec.schedule.uniform_per_level())
    throw std::invalid_argument("Cantor-like schedule must carry one ratio per level");
  std::vector<double> xs, hs;
  xs.reserve(depth);
  hs.reserve(depth);
  double sum_log_n = 0.0, sum_neg_log_c = 0.0;
  for (std::uint64_t k = 1; k <= depth; ++k) {
    Level lvl = spec.schedule.level_at(k);
    sum_log_n += std::log(static_cast<double>(lvl.n));
    sum_neg_log_c += -lvl.ratios.front().log();
    xs.push_back(sum_neg_log_c);
    hs.push_back(sum_log_n / sum_neg_log_c);
  }
  return ScaleFunction(std::move(xs), std::move(hs));
}

double psi(const ScaleFunction& h, double R, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("psi requires rho in (0,1)");
  if (!(R > 0.0 && R <= 1.0)) throw std::invalid_argument("psi requires R in (0,1]");
  const double xR = -std::log(R);
  const double L = -std::log(rho);
  if (xR + L > h.floor_x() + 1e-12)
    throw std::out_of_range("psi: rho*R below the truncation floor of the scale function");
  double hR = h.value_at_x(xR);
  double hrR = h.value_at_x(xR + L);
  // h(R) log R - h(rho R) log(rho R) with log R = -xR
  return std::fabs(hR * (-xR) - hrR * (-(xR + L))) / L;
}

namespace {

// phi(x) = h * x evaluated with a chosen side at x
struct SideValue {
  double exact;
  double above;  // limit from r above (x below)
};

SideValue phi_sides(const ScaleFunction& h, double x) {
  return {h.value_at_x(x) * x, h.value_above_x(x) * x};
}

}  // namespace

ScaleEstimate assouad_from_scale(const ScaleFunction& h, const std::vector<double>& rho_grid,
                                 const std::vector<double>& R_grid) {
  if (rho_grid.empty() || R_grid.empty())
    throw std::invalid_argument("assouad_from_scale requires nonempty grids");
  for (std::size_t i = 1; i < rho_grid.size(); ++i)
    if (rho_grid[i] >= rho_grid[i - 1])
      throw std::invalid_argument("rho grid must be strictly decreasing");
  for (std::size_t i = 1; i < R_grid.size(); ++i)
    if (R_grid[i] >= R_grid[i - 1])
      throw std::invalid_argument("R grid must be strictly decreasing");

  ScaleEstimate out;
  const double x_floor = h.floor_x();
  double x_lo = -std::log(R_grid.front());  // largest R -> smallest x
  double x_hi_req = -std::log(R_grid.back());
  if (x_lo < 0.0) throw std::invalid_argument("R grid must lie in (0,1]");

  for (double rho : rho_grid) {
    const double L = -std::log(rho);
    double x_hi = std::min(x_hi_req, x_floor - L);
    if (x_hi < x_lo) {
      out.clipped_to_floor = true;
      out.notes.push_back("rho below the representable range; window skipped");
      out.sup_by_rho.push_back({rho, std::exp(-x_lo), 0.0});
      continue;
    }
    if (x_hi < x_hi_req) out.clipped_to_floor = true;

    // candidate x: endpoints, breakpoints, breakpoints shifted by -L,
    // and the user grid anchors
    std::set<double> cands{x_lo, x_hi};
    for (double xb : h.breakpoint_x()) {
      if (xb >= x_lo && xb <= x_hi) cands.insert(xb);
      double shifted = xb - L;
      if (shifted >= x_lo && shifted <= x_hi) cands.insert(shifted);
    }
    for (double R : R_grid) {
      double x = -std::log(R);
      if (x >= x_lo && x <= x_hi) cands.insert(x);
    }

    // psi at the candidate itself pairs the exact values; the limit from
    // R above pairs the above-limits at both ends. Mixed pairings do not
    // correspond to any R.
    double best = 0.0, best_x = x_lo;
    for (double x : cands) {
      SideValue a = phi_sides(h, x);
      SideValue b = phi_sides(h, x + L);
      double at_point = std::fabs(b.exact - a.exact) / L;
      double from_above = std::fabs(b.above - a.above) / L;
      double v = std::max(at_point, from_above);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    out.sup_by_rho.push_back({rho, std::exp(-best_x), best});
  }
  out.estimate = out.sup_by_rho.back().sup_psi;
  return out;
}

EquivalenceResult equivalence_check(const ScaleFunction& h, const ScaleFunction& g, double C,
                                    const std::vector<double>& r_grid) {
  if (C < 0.0) throw std::invalid_argument("equivalence constant C must be >= 0");
  const double x_max = std::min(h.floor_x(), g.floor_x());  // common represented range

  std::set<double> xs;
  for (double r : r_grid) {
    if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("grid points must lie in (0,1]");
    double x = -std::log(r);
    if (x <= x_max) xs.insert(x);
  }
  for (double x : h.breakpoint_x())
    if (x <= x_max) xs.insert(x);
  for (double x : g.breakpoint_x())
    if (x <= x_max) xs.insert(x);
  xs.insert(0.0);
  xs.insert(x_max);

  double needed = 0.0;
  for (double x : xs) {
    // both one-sided values, both functions taken at the same side
    double exact = std::fabs(h.value_at_x(x) - g.value_at_x(x)) * x;
    double above = std::fabs(h.value_above_x(x) - g.value_above_x(x)) * x;
    needed = std::max({needed, exact, above});
  }
  EquivalenceResult res;
  res.needed_constant = needed;
  res.excess = needed - C;
  res.equivalent = needed <= C + 1e-12;
  return res;
}

}  // namespace morandim
