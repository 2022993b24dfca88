#ifndef TWOSCVRP_RATIONAL_H_
#define TWOSCVRP_RATIONAL_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace twoscvrp {

// Exact rational number over 64-bit integers. Always normalised: the
// denominator is positive and gcd(num, den) == 1. Arithmetic that does not
// fit in 64 bits throws std::overflow_error instead of wrapping.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(int64_t value) : num_(value) {}  // NOLINT: implicit so integer coefficients read naturally
  Rational(int64_t num, int64_t den);

  // Nearest rational with denominator <= max_den (continued fractions).
  static Rational FromDouble(double value, int64_t max_den = 1'000'000);

  // Accepts integers, decimals with optional exponent ("-2.5e-3") and "p/q".
  static std::optional<Rational> Parse(std::string_view text);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }

  double ToDouble() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // "7", "-3/4".
  std::string ToString() const;
  // Exact decimal when the expansion terminates ("0.0001", "-12.5"),
  // otherwise 17 significant digits.
  std::string ToDecimal() const;

  int64_t Floor() const;
  int64_t Ceil() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  static Rational FromWide(__int128 num, __int128 den);

  int64_t num_ = 0;
  int64_t den_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace twoscvrp

#endif  // TWOSCVRP_RATIONAL_H_
