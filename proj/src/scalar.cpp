#include "recur/scalar.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace recur {

namespace {

constexpr i64 kDenLimit = i64(1) << 62;

i64 checked_i64(i128 v, const char* what) {
  if (v > kDenLimit || v < -kDenLimit)
    throw std::overflow_error(std::string("rational arithmetic overflow in ") + what);
  return (i64)v;
}

}  // namespace

Rat64 Rat64::make(i64 n, i64 d) {
  if (d == 0) throw std::invalid_argument("Rat64: zero denominator");
  if (d < 0) { n = -n; d = -d; }
  i64 g = gcd_i64(n, d);
  if (g > 1) { n /= g; d /= g; }
  return Rat64{n, d};
}

Rat64 Rat64::operator+(const Rat64& o) const {
  i64 g0 = gcd_i64(den, o.den);
  i128 d = (i128)den * (o.den / g0);
  i128 n = (i128)num * (o.den / g0) + (i128)o.num * (den / g0);
  if (n >= INT64_MIN && n <= INT64_MAX && d <= INT64_MAX) {
    i64 g = gcd_i64((i64)n, (i64)d);
    if (g > 1) { n /= g; d /= g; }
    return Rat64{(i64)n, (i64)d};
  }
  i128 a = n < 0 ? -n : n, b = d;
  while (b) { i128 t = a % b; a = b; b = t; }
  if (a > 1) { n /= a; d /= a; }
  return Rat64{checked_i64(n, "add"), checked_i64(d, "add")};
}

Rat64 Rat64::operator-(const Rat64& o) const { return *this + (-o); }

Rat64 Rat64::operator*(const Rat64& o) const {
  i64 g1 = gcd_i64(num, o.den);
  i64 g2 = gcd_i64(o.num, den);
  i128 n = (i128)(num / g1) * (o.num / g2);
  i128 d = (i128)(den / g2) * (o.den / g1);
  return Rat64{checked_i64(n, "mul"), checked_i64(d, "mul")};
}

std::strong_ordering Rat64::operator<=>(const Rat64& o) const {
  i128 l = (i128)num * o.den;
  i128 r = (i128)o.num * den;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Rat64::str() const { return std::to_string(num) + "/" + std::to_string(den); }

Scalar Scalar::rational(i64 num, i64 den) {
  Rat64 r = Rat64::make(num, den);
  i64 m = r.num % r.den;
  if (m < 0) m += r.den;
  Scalar s;
  s.mode_ = Mode::Rational;
  s.rat_ = Rat64{m, r.den};
  return s;
}

u128 Scalar::fixed_value() const {
  if (!is_fixed()) throw std::logic_error("Scalar: rational value queried as fixed");
  return fix_;
}

Rat64 Scalar::rational_value() const {
  if (is_fixed()) throw std::logic_error("Scalar: fixed value queried as rational");
  return rat_;
}

Scalar Scalar::to_fixed() const {
  if (is_fixed()) return *this;
  return fixed_bits(fixed_from_fraction(BigInt(rat_.num), BigInt(rat_.den)));
}

Scalar Scalar::operator+(const Scalar& o) const {
  if (mode_ != o.mode_) throw std::logic_error("Scalar: mixed-mode addition");
  if (is_fixed()) return fixed_bits(fix_ + o.fix_);
  Scalar s;
  s.mode_ = Mode::Rational;
  if (rat_.den == o.rat_.den) {
    i64 n = rat_.num + o.rat_.num;  // both in [0, den), no overflow
    if (n >= rat_.den) n -= rat_.den;
    i64 g = n ? gcd_i64(n, rat_.den) : rat_.den;
    s.rat_ = Rat64{n / g, rat_.den / g};
    return s;
  }
  Rat64 sum = rat_ + o.rat_;
  return rational(sum.num, sum.den);
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator-() const {
  if (is_fixed()) return fixed_bits(u128(0) - fix_);
  return rational(-rat_.num, rat_.den);
}

Scalar Scalar::times(const BigInt& n) const {
  if (is_fixed()) return fixed_bits(mod_pow2_128(n) * fix_);
  BigInt m = n % rat_.den;
  i64 mi = m.get_si();  // |m| < den <= 2^62
  i128 prod = (i128)mi * rat_.num % rat_.den;
  if (prod < 0) prod += rat_.den;
  return rational((i64)prod, rat_.den);
}

Scalar Scalar::times_i128(i128 n) const {
  if (is_fixed()) return fixed_bits((u128)n * fix_);
  i128 m = n % rat_.den;
  i128 prod = m * rat_.num % rat_.den;
  if (prod < 0) prod += rat_.den;
  Scalar s;
  s.mode_ = Mode::Rational;
  s.rat_ = Rat64{(i64)prod, rat_.den};
  i64 g = gcd_i64(s.rat_.num, s.rat_.den);
  if (g > 1) s.rat_ = Rat64{s.rat_.num / g, s.rat_.den / g};
  return s;
}

Scalar Scalar::div_int(i64 k) const {
  if (k <= 0) throw std::invalid_argument("Scalar::div_int: k must be positive");
  if (is_fixed()) return fixed_bits(fix_ / (u128)k);
  return rational(rat_.num, checked_i64((i128)rat_.den * k, "div_int"));
}

Scalar Scalar::norm() const {
  if (is_fixed()) {
    u128 neg = u128(0) - fix_;
    return fixed_bits(fix_ <= neg ? fix_ : neg);
  }
  Rat64 x = rat_;
  Rat64 oneminus{x.den - x.num, x.den};
  return x <= oneminus ? rational(x.num, x.den) : rational(oneminus.num, oneminus.den);
}

bool Scalar::operator==(const Scalar& o) const {
  if (mode_ == o.mode_) return is_fixed() ? fix_ == o.fix_ : rat_ == o.rat_;
  const Scalar& f = is_fixed() ? *this : o;
  const Scalar& r = is_fixed() ? o : *this;
  // f/2^128 == p/q  <=>  f*q == p*2^128
  BigInt lhs = bigint_from_i128((i128)(f.fix_ >> 64)) << 64;
  lhs += (u64)f.fix_;
  return lhs * r.rat_.den == (BigInt(r.rat_.num) << 128);
}

bool Scalar::less(const Scalar& o) const {
  if (mode_ == o.mode_) {
    if (is_fixed()) return fix_ < o.fix_;
    return rat_ < o.rat_;
  }
  if (is_fixed()) {
    return fixed_less_than_fraction(fix_, o.rat_.num, o.rat_.den);
  }
  // rational < fixed  <=>  !(fixed < rational) && !(equal)
  return !o.less(*this) && !(*this == o);
}

bool Scalar::near(const Scalar& a, const Scalar& b) {
  if (!a.is_fixed() || !b.is_fixed()) return false;
  constexpr u128 guard = (u128)1 << 28;  // 2^-100 in fixed units
  u128 d = a.fix_ - b.fix_;
  u128 e = b.fix_ - a.fix_;
  return (d < e ? d : e) < guard;
}

long double Scalar::to_long_double() const {
  if (!is_fixed()) return (long double)rat_.num / (long double)rat_.den;
  return std::ldexp((long double)(u64)(fix_ >> 64), -64) +
         std::ldexp((long double)(u64)fix_, -128);
}

std::string Scalar::str() const {
  if (is_fixed()) return "fixed:" + u128_to_hex(fix_);
  return rat_.str();
}

Scalar Scalar::parse(const std::string& text) {
  if (text.rfind("fixed:", 0) == 0) {
    std::string body = text.substr(6);
    if (body == "sqrt2m1") return sqrt2m1();
    if (body.rfind("0x", 0) == 0) body = body.substr(2);
    return fixed_bits(u128_from_hex(body));
  }
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    i64 p = std::stoll(text.substr(0, slash));
    i64 q = std::stoll(text.substr(slash + 1));
    return rational(p, q);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 17)
      throw std::invalid_argument("Scalar::parse: unsupported decimal '" + text + "'");
    i64 den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::string ip = text.substr(0, dot);
    bool neg = !ip.empty() && ip[0] == '-';
    i64 whole = (ip.empty() || ip == "-" || ip == "+") ? 0 : std::stoll(ip);
    i64 f = std::stoll(frac);
    i64 num = whole * den + (neg ? -f : f);
    return rational(num, den);
  }
  return rational(std::stoll(text), 1);
}

bool fixed_less_than_fraction(u128 value, i64 num, i64 den) {
  if (den <= 0) throw std::invalid_argument("fixed_less_than_fraction: den must be positive");
  BigInt lhs = bigint_from_i128((i128)(value >> 64)) << 64;
  lhs += (u64)value;
  return lhs * den < (BigInt(num) << 128);
}

}  // namespace recur
