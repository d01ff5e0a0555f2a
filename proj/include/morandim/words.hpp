#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morandim/schedule.hpp"

namespace morandim {

// Finite address: letters u_{base+1}..u_{base+len}, 1-based within each
// level's alphabet. The empty word has c = 1 (log 0).
struct Word {
  std::uint64_t base = 0;
  std::vector<std::uint32_t> letters;
  double log_c = 0.0;
  std::optional<Ratio> exact_c = Ratio(1);  // product while in int64 range

  std::uint64_t end_level() const { return base + letters.size(); }
  std::string str() const;
};

// Builds a word over a spec, filling the cached product. Throws when a
// letter exceeds its level's alphabet.
Word make_word(const MoranSpec& spec, std::uint64_t base,
               const std::vector<std::uint32_t>& letters);

// delta-cutset A_u(delta): suffix words v with c_v <= delta < c_{v^-}.
// Members' cylinders partition [u] and are prefix-free by construction.
struct Cutset {
  Word base;
  Ratio delta;
  std::vector<Word> members;  // suffixes; member.base == base.end_level()
  bool exact = true;          // all sandwich comparisons done in rationals
  bool near_tie = false;      // a log-space comparison fell in the guard band
  bool count_bound_ok = true; // count * delta^d <= c_*^{-d}
};

struct CutsetOptions {
  std::uint64_t budget = 10'000'000;  // enumerated nodes
};

Cutset cutset(const MoranSpec& spec, const Word& u, const Ratio& delta,
              const CutsetOptions& opt = {});

// Streaming visitor over the members of A_u(delta); avoids materializing
// large cutsets. visit(log_c_v, log_weight_denominator, depth).
void for_each_cutset_member(
    const MoranSpec& spec, const Word& u, const Ratio& delta, double s,
    const CutsetOptions& opt,
    const std::function<void(double log_c, double log_denom, std::uint32_t len)>& visit);

// |sum over A_u(delta) of (c_v)^s / prod_p sum_q c_{p,q}^s  -  1|.
// Kahan-summed; the measure identity makes the exact value 0.
double cutset_identity_residual(const MoranSpec& spec, const Word& u, const Ratio& delta,
                                double s, const CutsetOptions& opt = {});

// Dyadic classes B_{p} over the window D_{k_lo+1, k_hi}:
// 2^{-p-1} < c_j <= 2^{-p}. Counts partition the window.
struct DyadicClasses {
  std::map<int, std::uint64_t> counts;
  std::uint64_t total = 0;
  int p_min = 0;
  bool exact = true;
  bool near_tie = false;
};

DyadicClasses dyadic_classes(const MoranSpec& spec, std::uint64_t k_lo, std::uint64_t k_hi,
                             std::uint64_t budget = 10'000'000);

// Smallest q with 2^{-eps q}(1 - 2^{-eps}) <= #B_q * 2^{-q s}. Exists
// whenever Delta_{k_lo,k_hi}(s) > 1; the precondition s < s_{k_lo,k_hi} is
// checked and violations throw (distinct from a none return).
struct Witness {
  int q = 0;
  std::uint64_t count = 0;
  double lhs_log = 0.0;  // log of 2^{-eps q}(1-2^{-eps})
  double rhs_log = 0.0;  // log of count * 2^{-q s}
};

std::optional<Witness> lower_bound_witness(const MoranSpec& spec, std::uint64_t k_lo,
                                           std::uint64_t k_hi, double s, double eps,
                                           std::uint64_t budget = 10'000'000);

}  // namespace morandim
