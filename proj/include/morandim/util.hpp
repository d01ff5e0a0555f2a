#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace morandim {

// Thrown when an enumeration would exceed its word/interval budget.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(std::string_view what, std::uint64_t budget)
      : std::runtime_error(std::string(what) + " (budget " + std::to_string(budget) + ")"),
        budget_(budget) {}
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t budget_;
};

// Thrown on malformed spec files; carries the offending field/line.
class SpecParseError : public std::runtime_error {
 public:
  SpecParseError(const std::string& message, std::string field, int line = -1)
      : std::runtime_error(message), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  std::string field_;
  int line_;
};

// FNV-1a, used to stamp generated artifacts with their source spec.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// SplitMix64. Deterministic across platforms, unlike the standard
// distributions; all seeded sampling in the toolkit goes through this.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // uniform integer in [0, n)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace morandim
