// Points on the circle R/Z in one of two exact representations.
//
// Rational mode: reduced int64 fractions, value taken mod 1.  All group
// operations stay within the denominator lattice of the inputs, so int64
// never overflows in practice; intermediates use __int128 and loudly
// reject denominators beyond 2^62.
//
// Fixed mode: a 128-bit unsigned fraction f representing f/2^128.
// Addition and multiplication by an arbitrary exact integer wrap mod 2^128,
// which is exactly arithmetic mod 1 on the represented lattice.  A value
// entered as Fixed is treated as irrational by construction; nothing here
// attempts to detect rationality of a bit pattern.
//
// Multiplying a Fixed scalar by an integer n is exact: (n mod 2^128) * f
// mod 2^128.  Hence ||p(n)*alpha|| carries an absolute error of at most
// |p(n)| * 2^-128 relative to the real alpha it truncates, i.e. ~2^-127
// per unit of |p(n)|.

#pragma once

#include "recur/arith.hpp"

#include <compare>
#include <string>

namespace recur {

struct Rat64 {
  i64 num = 0;
  i64 den = 1;  // > 0, gcd(num, den) == 1

  static Rat64 make(i64 n, i64 d);  // reduces, normalizes sign
  static Rat64 of(i64 n) { return Rat64{n, 1}; }

  Rat64 operator+(const Rat64& o) const;
  Rat64 operator-(const Rat64& o) const;
  Rat64 operator*(const Rat64& o) const;
  Rat64 operator-() const { return Rat64{-num, den}; }
  bool operator==(const Rat64& o) const { return num == o.num && den == o.den; }
  std::strong_ordering operator<=>(const Rat64& o) const;

  double to_double() const { return (double)num / (double)den; }
  std::string str() const;
};

class Scalar {
 public:
  enum class Mode { Rational, Fixed };

  Scalar() = default;

  static Scalar rational(i64 num, i64 den);      // value mod 1
  static Scalar rational(const Rat64& r) { return rational(r.num, r.den); }
  static Scalar fixed_bits(u128 f) { Scalar s; s.mode_ = Mode::Fixed; s.fix_ = f; return s; }
  static Scalar sqrt2m1() { return fixed_bits(sqrt2_minus_1_bits()); }
  static Scalar zero(Mode m) { return m == Mode::Fixed ? fixed_bits(0) : rational(0, 1); }

  Mode mode() const { return mode_; }
  bool is_fixed() const { return mode_ == Mode::Fixed; }
  bool is_zero() const { return is_fixed() ? fix_ == 0 : rat_.num == 0; }
  u128 fixed_value() const;
  Rat64 rational_value() const;

  Scalar to_fixed() const;  // truncates rationals at 2^-128; identity on Fixed

  // Group operations; both operands must be in the same mode.
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;

  // n * x mod 1, exact in both modes.
  Scalar times(const BigInt& n) const;
  Scalar times_i64(i64 n) const { return times_i128(n); }
  Scalar times_i128(i128 n) const;

  // x / k with k > 0.  Exact for rationals; floor quantization at 2^-128
  // for Fixed values.
  Scalar div_int(i64 k) const;

  // Circle distance to 0: min(x, 1-x), same mode as x.
  Scalar norm() const;

  // Exact comparisons of the represented values, across modes.
  bool operator==(const Scalar& o) const;
  bool less(const Scalar& o) const;

  // True when the circle distance between a and b is below 2^-100.  Only
  // Fixed comparisons can be ambiguous; rational arithmetic is exact.
  static bool near(const Scalar& a, const Scalar& b);

  long double to_long_double() const;
  double to_double() const { return (double)to_long_double(); }

  // "p/q" for rationals, "fixed:<32 hex digits>" for fixed values.
  std::string str() const;
  // Accepts p/q, integers, decimal literals (exact), fixed:<hex>,
  // and fixed:sqrt2m1.
  static Scalar parse(const std::string& text);

 private:
  Mode mode_ = Mode::Rational;
  Rat64 rat_{0, 1};
  u128 fix_ = 0;
};

// Strict comparison value < num/den for a Fixed fraction, exact.
bool fixed_less_than_fraction(u128 value, i64 num, i64 den);

}  // namespace recur
