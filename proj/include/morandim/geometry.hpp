#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morandim/ratio.hpp"
#include "morandim/schedule.hpp"

namespace morandim {

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double length() const { return b - a; }
};

// Sorted, interior-disjoint closed intervals in [0,1] realizing a level or
// cutset cover of the set.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::vector<Interval> intervals, std::uint64_t depth, std::string meta);

  const std::vector<Interval>& intervals() const { return ivs_; }
  std::size_t size() const { return ivs_.size(); }
  bool empty() const { return ivs_.empty(); }
  std::uint64_t depth() const { return depth_; }
  const std::string& meta() const { return meta_; }
  double max_length() const;

 private:
  std::vector<Interval> ivs_;
  std::uint64_t depth_ = 0;
  std::string meta_;
};

enum class Placement { UniformGap, LeftPacked };
enum class SignMode { Alternating, Seeded };

struct RealizeOptions {
  Placement placement = Placement::UniformGap;
  double gamma = 1.0;  // slack share spent on inter-child gaps
  SignMode signs = SignMode::Alternating;
  std::uint64_t seed = 0;
  std::uint64_t max_intervals = 4'000'000;
  std::uint64_t spec_hash = 0;  // stamped into metadata
};

std::string placement_name(Placement p);

// Level-k cover of the 1-D realization. Children are laid out left to right
// inside their parent; uniform-gap(gamma) spends gamma of the slack on the
// n-1 inter-child gaps, left-packed keeps children flush.
IntervalSet realize_level(const MoranSpec& spec, std::uint64_t depth,
                          const RealizeOptions& opt);

// Cantor-like realization perturbs each child ratio to c_k(1 + sigma_j a_k);
// signs alternate -,+,-,.. deterministically or are drawn from the seed.
IntervalSet realize_level(const CantorLikeSpec& spec, std::uint64_t depth,
                          const RealizeOptions& opt);

// Geometric realization of the root cutset A(delta).
IntervalSet realize_cutset(const MoranSpec& spec, const Ratio& delta,
                           const RealizeOptions& opt);

struct CoverResult {
  std::uint64_t n = 0;
  std::vector<Interval> witnesses;  // placed r-balls, as closed intervals
};

// Exact N_{r,R} on the 1-D realization: minimal number of closed length-2r
// intervals covering B(x,R) ∩ S, by the optimal left-to-right greedy sweep.
// Returns 0 when the ball misses S; 1 when r >= R and the ball meets S.
CoverResult covering_number(const IntervalSet& s, double x, double R, double r);

struct EstimatorOptions {
  std::vector<double> rho_grid;  // strictly decreasing, in (0,1)
  std::vector<double> R_grid;    // strictly decreasing, in (0,1]
  int centers_per_R = 8;
  std::uint64_t max_depth = 64;
  RealizeOptions realize;
};

struct EstimatorRow {
  double rho = 0.0, R = 0.0, x = 0.0;
  std::uint64_t N = 0;
  double t = 0.0;
};

struct EstimatorResult {
  double estimate = 0.0;  // t(rho_min)
  std::vector<std::pair<double, double>> t_of_rho;
  std::vector<EstimatorRow> rows;
  std::vector<std::string> notes;
};

// Empirical Assouad estimate via t(rho) = sup_{R, x} log N_{rho R, R} / -log rho,
// realized to the first depth whose intervals resolve the rho R scale.
EstimatorResult empirical_assouad(const MoranSpec& spec, const EstimatorOptions& opt);
EstimatorResult empirical_assouad(const CantorLikeSpec& spec, const EstimatorOptions& opt);

struct OverlapResult {
  std::vector<std::pair<double, int>> per_delta;  // (delta, max count)
  int max_overlap = 0;
};

// Max number of cutset cylinders met by a delta-ball centered in the set,
// per delta; bounded overlap shows as a delta-independent max.
OverlapResult overlap_bound(const MoranSpec& spec, const RealizeOptions& opt,
                            const std::vector<Ratio>& deltas, int centers,
                            std::uint64_t seed);

}  // namespace morandim
