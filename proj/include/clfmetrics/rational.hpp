#pragma once

#include <cstdint>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clfmetrics {

using int128 = __int128;

/// Thrown by Rational when an intermediate leaves the 128-bit range.
/// Metric code catches it and falls back to a floating-point value.
struct RationalOverflow : std::overflow_error {
  RationalOverflow() : std::overflow_error("rational overflow") {}
};

namespace detail {

inline int128 checked_mul(int128 a, int128 b) {
  int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw RationalOverflow{};
  return r;
}

inline int128 checked_add(int128 a, int128 b) {
  int128 r;
  if (__builtin_add_overflow(a, b, &r)) throw RationalOverflow{};
  return r;
}

inline int128 checked_sub(int128 a, int128 b) {
  int128 r;
  if (__builtin_sub_overflow(a, b, &r)) throw RationalOverflow{};
  return r;
}

inline int128 abs128(int128 v) { return v < 0 ? -v : v; }

inline int128 gcd128(int128 a, int128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::string int128_to_string(int128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  // Work on the negative side so the minimum value does not overflow.
  if (!neg) v = -v;
  std::string digits;
  while (v != 0) {
    digits.push_back(static_cast<char>('0' - static_cast<int>(v % 10)));
    v /= 10;
  }
  if (neg) digits.push_back('-');
  return {digits.rbegin(), digits.rend()};
}

inline bool parse_int128(std::string_view s, int128& out) {
  if (s.empty()) return false;
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
    if (s.size() == 1) return false;
  }
  int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    int128 next;
    if (__builtin_mul_overflow(v, 10, &next)) return false;
    if (__builtin_sub_overflow(next, s[i] - '0', &v)) return false;
  }
  if (!neg) {
    if (v == -v && v != 0) return false;
    v = -v;
  }
  out = v;
  return true;
}

}  // namespace detail

/// Exact fraction over 128-bit integers, always in lowest terms with a
/// positive denominator. Arithmetic throws RationalOverflow instead of
/// wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT(implicit)
  Rational(int128 num, int128 den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
      num = detail::checked_sub(0, num);
      den = detail::checked_sub(0, den);
    }
    int128 g = detail::gcd128(num, den);
    num_ = num / g;
    den_ = den / g;
  }

  int128 numerator() const { return num_; }
  int128 denominator() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  double to_double() const {
    constexpr int128 exact_limit = int128{1} << 53;
    if (detail::abs128(num_) <= exact_limit && den_ <= exact_limit)
      return static_cast<double>(num_) / static_cast<double>(den_);
    return static_cast<double>(static_cast<long double>(num_) /
                               static_cast<long double>(den_));
  }

  /// "37/52", or "3" for integers.
  std::string to_string() const {
    if (den_ == 1) return detail::int128_to_string(num_);
    return detail::int128_to_string(num_) + "/" + detail::int128_to_string(den_);
  }

  static Rational parse(std::string_view text) {
    auto slash = text.find('/');
    int128 n = 0, d = 1;
    bool ok = detail::parse_int128(text.substr(0, slash), n);
    if (ok && slash != std::string_view::npos)
      ok = detail::parse_int128(text.substr(slash + 1), d) && d != 0;
    if (!ok) throw std::invalid_argument("not a rational: " + std::string(text));
    return {n, d};
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    int128 g = detail::gcd128(a.den_, b.den_);
    int128 da = a.den_ / g;
    int128 db = b.den_ / g;
    return {detail::checked_add(detail::checked_mul(a.num_, db),
                                detail::checked_mul(b.num_, da)),
            detail::checked_mul(a.den_, db)};
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    return a + Rational(detail::checked_sub(0, b.num_), b.den_);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so products stay small.
    int128 g1 = detail::gcd128(a.num_, b.den_);
    int128 g2 = detail::gcd128(b.num_, a.den_);
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    return {detail::checked_mul(a.num_ / g1, b.num_ / g2),
            detail::checked_mul(a.den_ / g2, b.den_ / g1)};
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int128 lhs = detail::checked_mul(a.num_, b.den_);
    int128 rhs = detail::checked_mul(b.num_, a.den_);
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  int128 num_ = 0;
  int128 den_ = 1;
};

}  // namespace clfmetrics
