#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "morandim/ratio.hpp"

namespace morandim {

// One construction level: n_k branches with contraction ratios c_{k,1..n_k}.
struct Level {
  int n = 0;
  std::vector<Ratio> ratios;

  bool uniform() const {
    for (const auto& r : ratios)
      if (r != ratios.front()) return false;
    return true;
  }
  bool operator==(const Level& o) const { return n == o.n && ratios == o.ratios; }
};

inline Level uniform_level(int n, Ratio c) {
  Level l;
  l.n = n;
  l.ratios.assign(static_cast<std::size_t>(n), c);
  return l;
}

struct UniformSchedule {
  int n = 0;
  Ratio c;
};

struct EventuallyPeriodicSchedule {
  std::vector<Level> prefix;
  std::vector<Level> cycle;
};

// Explicit run-length program. A stage with length 0 extends forever and
// must be last; schedules are total over k >= 1.
struct BlockStage {
  std::uint64_t length = 0;
  Level level;
};

struct BlockProgramSchedule {
  std::vector<BlockStage> stages;
};

// The three-case family from the Moran counterexample construction:
// n_k = 2 everywhere, c_k = 1/4 on marker runs [p_i+1, p_i+i], 1/8 on even-i
// tails, 1/16 on odd-i tails; k <= p_1 extends the first 1/4 run leftward.
struct MarkerFamilySchedule {
  // empty => p_i = (i+1)!
  std::vector<std::uint64_t> explicit_markers;

  std::uint64_t marker(std::size_t i) const;  // p_i, 1-based
};

class RatioSchedule {
 public:
  using Variant = std::variant<UniformSchedule, EventuallyPeriodicSchedule,
                               BlockProgramSchedule, MarkerFamilySchedule>;

  RatioSchedule() = default;
  explicit RatioSchedule(Variant v) : v_(std::move(v)) {}

  const Variant& variant() const { return v_; }

  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  // (n_k, ratio vector) for level k >= 1. Pure; total for valid schedules.
  Level level_at(std::uint64_t k) const;

  // Exact infimum over the finite presentation.
  Ratio c_star() const;

  // Every level's ratios all equal (Cantor-like shape).
  bool uniform_per_level() const;

  // All distinct levels reachable by the presentation (prefix + cycle /
  // stages / the three marker-family cases).
  std::vector<Level> distinct_levels() const;

  // True for schedules whose sup over window starts is exactly captured by
  // finitely many candidates (prefix + one period).
  bool periodic() const {
    return std::holds_alternative<UniformSchedule>(v_) ||
           std::holds_alternative<EventuallyPeriodicSchedule>(v_);
  }

  // Number of window-start candidates that exhaust all distinct windows for
  // periodic schedules: prefix length + cycle length.
  std::uint64_t periodic_candidates() const;

 private:
  Variant v_;
};

// Run-length decomposition of levels [1, k_max]: contiguous spans sharing
// one level shape, plus the deduplicated level/ratio tables the numeric
// kernels iterate over.
struct ScheduleView {
  struct Run {
    std::uint64_t first = 0;  // inclusive, 1-based level index
    std::uint64_t last = 0;   // inclusive
    std::uint32_t level_id = 0;
  };
  struct LevelRef {
    int n = 0;
    std::vector<std::uint32_t> ratio_ids;
    double log_n = 0.0;
  };

  std::vector<Run> runs;
  std::vector<LevelRef> levels;
  std::vector<double> ratio_values;
  std::vector<double> ratio_logs;
  std::vector<Ratio> ratio_exact;
  std::uint64_t k_max = 0;

  std::uint32_t level_id_at(std::uint64_t k) const;  // k in [1, k_max]
};

ScheduleView compile_schedule(const RatioSchedule& s, std::uint64_t k_max);

// Perturbation band a_k for Cantor-like constructions.
struct GeometricPerturbation {
  double amplitude = 0.0;  // A
  double decay = 0.5;      // gamma in (0,1); a_k = A * gamma^k
};

struct FinitePerturbation {
  std::vector<double> values;  // a_1..a_n, zero afterwards
};

class Perturbation {
 public:
  using Variant = std::variant<GeometricPerturbation, FinitePerturbation>;

  Perturbation() : v_(GeometricPerturbation{0.0, 0.5}) {}
  explicit Perturbation(Variant v) : v_(std::move(v)) {}

  double at(std::uint64_t k) const;   // a_k, k >= 1
  double sup() const;                 // sup_k a_k
  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

struct MoranSpec {
  RatioSchedule schedule;
  int d = 1;  // ambient dimension; |J| normalized to 1
};

struct CantorLikeSpec {
  RatioSchedule schedule;  // one ratio value per level (validated)
  Perturbation perturbation;
};

}  // namespace morandim
