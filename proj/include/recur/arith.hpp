// Exact integer arithmetic helpers shared across the library.
//
// Polynomial coefficients and evaluations are arbitrary-precision (GMP).
// Circle coordinates use either reduced int64 rationals or 128-bit
// fixed-point fractions; both live in scalar.hpp.  This header holds the
// glue between the two worlds: reductions of big integers modulo small
// moduli and modulo 2^128, and a few small utilities.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace recur {

using BigInt = mpz_class;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline i64 gcd_i64(i64 a, i64 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    i64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// m(m-1)/2 as an exact integer, valid for negative m as well.
inline BigInt binom2(const BigInt& m) { return m * (m - 1) / 2; }

// Value of n modulo 2^128, as the unique representative in [0, 2^128).
// Used to multiply fixed-point fractions by arbitrary integers: the
// product modulo 1 only depends on n mod 2^128.
u128 mod_pow2_128(const BigInt& n);

// Floor of p*2^128/q for 0 <= p < q; exact.  den must be positive.
u128 fixed_from_fraction(const BigInt& num, const BigInt& den);

// floor(sqrt(2)*2^128) - 2^128, the default irrational rotation number
// sqrt(2)-1 truncated to 128 fractional bits.
u128 sqrt2_minus_1_bits();

std::string u128_to_hex(u128 v);  // 32 hex digits, zero padded
u128 u128_from_hex(const std::string& s);

BigInt bigint_from_i128(i128 v);
BigInt bigint_from_u128(u128 v);

// Runs fn(begin, end) over [lo, hi] split into `threads` chunks whose
// boundaries are aligned to 64-element strides of (n - align_base), so
// bitmap writers never share a word.  threads <= 1 runs inline.
void parallel_chunks(i64 lo, i64 hi, int threads, i64 align_base,
                     const std::function<void(i64, i64)>& fn);

}  // namespace recur
