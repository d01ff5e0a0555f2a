#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace morandim {

// Exact rational on int64 with __int128-checked arithmetic. Contraction
// ratios and perturbations are kept exact so that c_*, validation sums and
// cutset sandwich comparisons do not depend on floating point; numeric
// kernels convert to double at their boundary.
class Ratio {
 public:
  Ratio() : num_(0), den_(1) {}
  Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Ratio: zero denominator");
    normalize();
  }
  explicit Ratio(std::int64_t n) : num_(n), den_(1) {}

  // Doubles are dyadic rationals; the conversion is exact.
  static Ratio from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("Ratio: non-finite value");
    int exp = 0;
    double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
    std::int64_t num = static_cast<std::int64_t>(std::ldexp(m, 53));
    exp -= 53;
    while (num != 0 && (num & 1) == 0 && exp < 0) {
      num >>= 1;
      ++exp;
    }
    if (exp > 0) {
      if (exp > 10) throw std::invalid_argument("Ratio: double too large");
      return Ratio(num << exp, 1);
    }
    if (exp < -62) throw std::invalid_argument("Ratio: double below int64 rational range");
    return Ratio(num, std::int64_t(1) << -exp);
  }

  // Accepts "a/b", integers and plain decimals ("0.25").
  static Ratio parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  // natural log; requires a positive ratio
  double log() const {
    if (num_ <= 0) throw std::domain_error("Ratio::log of non-positive value");
    return std::log(static_cast<double>(num_)) - std::log(static_cast<double>(den_));
  }

  bool positive() const { return num_ > 0; }
  bool operator==(const Ratio& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Ratio& o) const { return !(*this == o); }
  bool operator<(const Ratio& o) const {
    return static_cast<__int128>(num_) * o.den_ < static_cast<__int128>(o.num_) * den_;
  }
  bool operator<=(const Ratio& o) const { return !(o < *this); }
  bool operator>(const Ratio& o) const { return o < *this; }
  bool operator>=(const Ratio& o) const { return !(*this < o); }

  // Checked ops: nullopt on int64 overflow (callers fall back to log space).
  std::optional<Ratio> checked_mul(const Ratio& o) const {
    __int128 n = static_cast<__int128>(num_) * o.num_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return reduce128(n, d);
  }
  std::optional<Ratio> checked_add(const Ratio& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    return reduce128(n, d);
  }
  std::optional<Ratio> checked_pow(int e) const {
    if (e < 0) throw std::invalid_argument("Ratio::checked_pow: negative exponent");
    Ratio acc(1);
    Ratio base = *this;
    while (e > 0) {
      if (e & 1) {
        auto r = acc.checked_mul(base);
        if (!r) return std::nullopt;
        acc = *r;
      }
      e >>= 1;
      if (e == 0) break;
      auto sq = base.checked_mul(base);
      if (!sq) return std::nullopt;
      base = *sq;
    }
    return acc;
  }

  // Exact comparison against 2^-p. nullopt when 2^p exceeds the checked range.
  std::optional<bool> le_pow2_neg(int p) const {
    if (p < 0 || p > 126) return std::nullopt;
    __int128 lhs = static_cast<__int128>(num_);
    for (int i = 0; i < p; ++i) {
      lhs <<= 1;
      if (lhs > (static_cast<__int128>(1) << 126)) return std::nullopt;
    }
    return lhs <= static_cast<__int128>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static std::optional<Ratio> reduce128(__int128 n, __int128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 a = n < 0 ? -n : n;
    __int128 b = d;
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    if (a != 0) {
      n /= a;
      d /= a;
    }
    const __int128 lim = static_cast<__int128>(INT64_MAX);
    if (n > lim || n < -lim || d > lim) return std::nullopt;
    Ratio r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

inline Ratio Ratio::parse(const std::string& text) {
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t pa = 0, pb = 0;
      std::int64_t a = std::stoll(text.substr(0, slash), &pa);
      std::int64_t b = std::stoll(text.substr(slash + 1), &pb);
      if (pa != slash || pb != text.size() - slash - 1)
        throw std::invalid_argument("trailing characters");
      return Ratio(a, b);
    }
    if (text.find('.') != std::string::npos || text.find('e') != std::string::npos ||
        text.find('E') != std::string::npos) {
      std::size_t p = 0;
      double v = std::stod(text, &p);
      if (p != text.size()) throw std::invalid_argument("trailing characters");
      return from_double(v);
    }
    std::size_t p = 0;
    std::int64_t v = std::stoll(text, &p);
    if (p != text.size()) throw std::invalid_argument("trailing characters");
    return Ratio(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("Ratio: cannot parse '" + text + "'");
  }
}

}  // namespace morandim
