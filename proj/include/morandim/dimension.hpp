#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "morandim/schedule.hpp"

namespace morandim {

// log Delta_{k,k'}(s) = sum_{i=k+1}^{k'} log(sum_j c_{i,j}^s).
// Strictly decreasing in s; positive at s = 0. Requires k < k' <= view.k_max.
double log_delta(const ScheduleView& view, std::uint64_t k, std::uint64_t k_prime, double s);
double log_delta(const MoranSpec& spec, std::uint64_t k, std::uint64_t k_prime, double s);

// Unique root of Delta_{k,k'}(s) = 1, by bisection on [0, d]. The bracket is
// guaranteed for admissible specs (Delta(0) = prod n_i > 1, Delta(d) <= 1).
double solve_skk(const ScheduleView& view, int d, std::uint64_t k, std::uint64_t k_prime,
                 double tol);
double solve_skk(const MoranSpec& spec, std::uint64_t k, std::uint64_t k_prime, double tol);

struct PreDimensions {
  double s_lower = 0.0;       // min of s_{0,m} over the tail window
  double s_upper = 0.0;       // max over the tail window
  std::uint64_t tail_lo = 1;  // tail window is [tail_lo, m_max]
  std::vector<double> trace;  // s_{0,m} for m = 1..m_max
};

// s_{0,m} trace with tail min/max. The tail window [max(1, m_max/8), m_max]
// approximates liminf/limsup; values are estimates, never exact limits.
PreDimensions pre_dimensions(const MoranSpec& spec, std::uint64_t m_max, double tol);

struct ThetaResult {
  double value = 0.0;
  bool sup_truncated = false;      // sup over k cut off at k_max (block programs)
  std::uint64_t k_candidates = 0;  // window starts examined
};

// theta_m = sup_k s_{k,k+m}. Exact finite sup for uniform / eventually
// periodic schedules; truncated scan k in [0, k_max] otherwise.
ThetaResult theta(const MoranSpec& spec, std::uint64_t m, std::uint64_t k_max, double tol);

struct DimensionReport {
  double s_lower = 0.0;
  double s_upper = 0.0;
  double s_assouad = 0.0;  // running inf of theta_m: an upper estimate
  double convergence_gap = 0.0;
  std::uint64_t horizon_m = 0;
  std::uint64_t horizon_k = 0;
  std::uint64_t tail_horizon = 0;
  std::uint64_t tail_lo = 1;
  double tol = 0.0;
  int d = 1;
  bool sup_truncated = false;
  std::vector<std::pair<std::uint64_t, double>> theta_trace;  // (m, theta_m)
  std::vector<std::string> notes;

  // running inf of the recorded trace, same order
  std::vector<double> running_inf() const;
};

struct DimOptions {
  std::uint64_t m_max = 64;
  std::uint64_t k_max = 200000;
  std::uint64_t tail_horizon = 0;  // 0 -> max(1000, m_max)
  double tol = 1e-12;
};

// Assouad dimension of a Moran class: s** as the running infimum of theta_m,
// with the truncation gap reported. Also fills the tail estimates of
// s_* / s^* via pre_dimensions.
DimensionReport assouad_moran(const MoranSpec& spec, const DimOptions& opt);

// Ratio form for Cantor-like sets: the same infimum machinery applied to
// sup_k log(n_k...n_{k+m}) / -log(c_k...c_{k+m}); a_k does not enter.
DimensionReport assouad_cantor(const CantorLikeSpec& spec, const DimOptions& opt);

// Fast path when every level has equal ratios: no exponentiation, windows
// evaluated as ratios of log sums. Rejects non-uniform levels.
DimensionReport uniform_corollary(const MoranSpec& spec, const DimOptions& opt);

// Ordering sanity for reports at finite truncation:
// 0 <= s_lower <= s_upper <= s_assouad + gap (with tolerance slack).
bool report_ordering_ok(const DimensionReport& r);

// For marker-family schedules: the k_max needed so that the sup for window
// length m can see a full 1/4 run (p_m + m). nullopt for other schedules or
// past the factorial horizon.
std::optional<std::uint64_t> marker_kmax_needed(const RatioSchedule& s, std::uint64_t m);

}  // namespace morandim
