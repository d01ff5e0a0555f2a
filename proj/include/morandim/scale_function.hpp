#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morandim/schedule.hpp"

namespace morandim {

// Piecewise-constant scale function h(r): value h_k on the r-piece
// (r_k, r_{k-1}], r_0 = 1. Stored over x = -log r, so deep truncations do
// not underflow: piece k is x in [x_{k-1}, x_k) with x_0 = 0.
//
// The exact value at a breakpoint r_k belongs to the piece below it
// (h(r_k) = h_{k+1}); the limit as r -> r_k from above is h_k. Both matter
// when taking sups of h(R) log R over R, so the evaluator exposes them
// separately. Queries below the truncation floor extend the last value and
// set the touched-tail flag.
class ScaleFunction {
 public:
  ScaleFunction(std::vector<double> breakpoint_x, std::vector<double> values);

  static ScaleFunction from_breakpoints_r(const std::vector<double>& r,
                                          const std::vector<double>& values);

  std::size_t pieces() const { return values_.size(); }
  const std::vector<double>& breakpoint_x() const { return xs_; }  // x_1..x_K
  const std::vector<double>& values() const { return values_; }    // h_1..h_K
  double floor_x() const { return xs_.back(); }                    // x_K

  double value_at_x(double x) const;         // exact; extends past the floor
  double value_above_x(double x) const;      // limit from smaller x (r from above)
  double value_at_r(double r) const;
  bool touched_tail() const { return touched_tail_; }
  void reset_tail_flag() const { touched_tail_ = false; }

  double inf_value() const;
  double sup_value() const;

 private:
  std::size_t piece_at(double x) const;  // 1-based, clamped to [1, K]

  std::vector<double> xs_;      // x_1 < x_2 < ... < x_K
  std::vector<double> values_;  // h_1..h_K
  mutable bool touched_tail_ = false;
};

// h from a Cantor-like construction: breakpoints r_k = c_1...c_k and
// h_k = log(n_1...n_k) / -log(c_1...c_k), truncated at `depth`.
ScaleFunction scale_from_cantor(const CantorLikeSpec& spec, std::uint64_t depth);

// psi(R, rho) = |h(R) log R - h(rho R) log(rho R)| / -log rho.
// Throws std::out_of_range when rho R falls below the truncation floor.
double psi(const ScaleFunction& h, double R, double rho);

struct ScaleEstimateRow {
  double rho = 0.0;
  double R = 0.0;  // maximizing R (reported as e^{-x})
  double sup_psi = 0.0;
};

struct ScaleEstimate {
  double estimate = 0.0;  // sup at the smallest rho
  std::vector<ScaleEstimateRow> sup_by_rho;
  bool clipped_to_floor = false;
  std::vector<std::string> notes;
};

// sup_R psi(R, rho) per rho, evaluated exactly: h(R) log R is piecewise
// linear in log R, so the sup over an R-range sits at breakpoints, shifted
// breakpoints or range endpoints, each taken with both one-sided values.
ScaleEstimate assouad_from_scale(const ScaleFunction& h, const std::vector<double>& rho_grid,
                                 const std::vector<double>& R_grid);

struct EquivalenceResult {
  bool equivalent = false;
  double needed_constant = 0.0;  // max over the grid of |h-g| * |log r|
  double excess = 0.0;           // needed_constant - C
};

// |h(r) - g(r)| <= C / |log r| over the grid plus both breakpoint sets,
// checked in the multiplied form |h-g|*|log r| <= C (no division at r = 1).
EquivalenceResult equivalence_check(const ScaleFunction& h, const ScaleFunction& g, double C,
                                    const std::vector<double>& r_grid);

}  // namespace morandim
