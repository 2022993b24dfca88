#include "twoscvrp/rational.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace twoscvrp {
namespace {

__int128 Gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool FitsInt64(__int128 v) {
  return v >= std::numeric_limits<int64_t>::min() &&
         v <= std::numeric_limits<int64_t>::max();
}

bool ParseInt64(std::string_view s, int64_t& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  *this = FromWide(num, den);
}

Rational Rational::FromWide(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = Gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!FitsInt64(num) || !FitsInt64(den)) {
    throw std::overflow_error("rational arithmetic overflow");
  }
  Rational r;
  r.num_ = static_cast<int64_t>(num);
  r.den_ = static_cast<int64_t>(den);
  return r;
}

Rational Rational::FromDouble(double value, int64_t max_den) {
  if (!std::isfinite(value)) throw std::domain_error("non-finite value");
  double rounded = std::nearbyint(value);
  if (std::abs(value - rounded) < 1e-12 * std::max(1.0, std::abs(value)) &&
      std::abs(rounded) < 9e18) {
    return Rational(static_cast<int64_t>(rounded));
  }
  // Continued-fraction convergents with a bounded denominator.
  int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double x = value;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(x);
    if (std::abs(a) > 9e18) break;
    int64_t ai = static_cast<int64_t>(a);
    __int128 p2 = static_cast<__int128>(ai) * p1 + p0;
    __int128 q2 = static_cast<__int128>(ai) * q1 + q0;
    if (q2 > max_den || !FitsInt64(p2)) break;
    p0 = p1;
    q0 = q1;
    p1 = static_cast<int64_t>(p2);
    q1 = static_cast<int64_t>(q2);
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (q1 == 0) return Rational(static_cast<int64_t>(std::nearbyint(value)));
  return Rational(p1, q1);
}

std::optional<Rational> Rational::Parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    int64_t n = 0, d = 0;
    if (!ParseInt64(text.substr(0, slash), n) || !ParseInt64(text.substr(slash + 1), d) ||
        d == 0) {
      return std::nullopt;
    }
    return Rational(n, d);
  }
  // Decimal with optional exponent, parsed exactly.
  std::string_view s = text;
  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int64_t exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    if (!ParseInt64(s.substr(e + 1), exponent)) return std::nullopt;
    s = s.substr(0, e);
  }
  if (s.empty()) return std::nullopt;
  __int128 mantissa = 0;
  int64_t frac_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : s) {
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    seen_digit = true;
    mantissa = mantissa * 10 + (c - '0');
    if (mantissa > (static_cast<__int128>(1) << 100)) return std::nullopt;
    if (seen_point) ++frac_digits;
  }
  if (!seen_digit) return std::nullopt;
  int64_t scale = exponent - frac_digits;
  __int128 num = negative ? -mantissa : mantissa;
  __int128 den = 1;
  if (scale > 30 || scale < -30) return std::nullopt;
  for (int64_t k = 0; k < scale; ++k) num *= 10;
  for (int64_t k = 0; k < -scale; ++k) den *= 10;
  try {
    return FromWide(num, den);
  } catch (const std::overflow_error&) {
    return std::nullopt;
  }
}

std::string Rational::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::ToDecimal() const {
  if (den_ == 1) return std::to_string(num_);
  // Terminating iff den has no prime factors other than 2 and 5.
  int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  if (d != 1) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", ToDouble());
    return buf;
  }
  int digits = std::max(twos, fives);
  __int128 scaled = static_cast<__int128>(num_);
  __int128 factor = 1;
  for (int k = 0; k < digits; ++k) factor *= 10;
  scaled = scaled * (factor / den_);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits_str;
  while (scaled > 0) {
    digits_str.insert(digits_str.begin(), static_cast<char>('0' + static_cast<int>(scaled % 10)));
    scaled /= 10;
  }
  while (static_cast<int>(digits_str.size()) <= digits) digits_str.insert(digits_str.begin(), '0');
  std::string out = digits_str.substr(0, digits_str.size() - digits) + "." +
                    digits_str.substr(digits_str.size() - digits);
  return negative ? "-" + out : out;
}

int64_t Rational::Floor() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

int64_t Rational::Ceil() const {
  int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational Rational::operator-() const { return FromWide(-static_cast<__int128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == 1 && o.den_ == 1) {
    __int128 s = static_cast<__int128>(num_) + o.num_;
    if (!FitsInt64(s)) throw std::overflow_error("rational arithmetic overflow");
    num_ = static_cast<int64_t>(s);
    return *this;
  }
  *this = FromWide(static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_,
                   static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  *this = FromWide(static_cast<__int128>(num_) * o.num_, static_cast<__int128>(den_) * o.den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  *this = FromWide(static_cast<__int128>(num_) * o.den_, static_cast<__int128>(den_) * o.num_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.ToString(); }

}  // namespace twoscvrp
