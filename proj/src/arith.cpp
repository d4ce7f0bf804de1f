#include "recur/arith.hpp"

#include <thread>

namespace recur {

u128 mod_pow2_128(const BigInt& n) {
  const BigInt mask(0xffffffffffffffffUL);
  BigInt r = n & ((BigInt(1) << 128) - 1);  // GMP bitwise-and is floor-based, so r >= 0
  u64 lo = mpz_class(r & mask).get_ui();
  u64 hi = mpz_class((r >> 64) & mask).get_ui();
  return ((u128)hi << 64) | lo;
}

u128 fixed_from_fraction(const BigInt& num, const BigInt& den) {
  if (den <= 0) throw std::invalid_argument("fixed_from_fraction: denominator must be positive");
  BigInt n = num % den;
  if (n < 0) n += den;
  BigInt v = (n << 128) / den;
  return mod_pow2_128(v);
}

u128 sqrt2_minus_1_bits() {
  static const u128 bits = [] {
    BigInt two257 = BigInt(1) << 257;
    BigInt s;
    mpz_sqrt(s.get_mpz_t(), two257.get_mpz_t());  // floor(sqrt(2) * 2^128)
    return mod_pow2_128(s - (BigInt(1) << 128));
  }();
  return bits;
}

std::string u128_to_hex(u128 v) {
  static const char* digits = "0123456789abcdef";
  std::string s(32, '0');
  for (int i = 31; i >= 0; --i) {
    s[i] = digits[(unsigned)(v & 0xf)];
    v >>= 4;
  }
  return s;
}

u128 u128_from_hex(const std::string& s) {
  if (s.empty() || s.size() > 32) throw std::invalid_argument("u128_from_hex: need 1..32 hex digits, got '" + s + "'");
  u128 v = 0;
  for (char c : s) {
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else throw std::invalid_argument(std::string("u128_from_hex: bad digit '") + c + "'");
    v = (v << 4) | (u128)d;
  }
  return v;
}

BigInt bigint_from_u128(u128 v) {
  BigInt r = (u64)(v >> 64);
  r <<= 64;
  r += (u64)v;
  return r;
}

BigInt bigint_from_i128(i128 v) {
  bool neg = v < 0;
  u128 m = neg ? (u128)(-(v + 1)) + 1 : (u128)v;
  BigInt r = (u64)(m >> 64);
  r <<= 64;
  r += (u64)m;
  return neg ? BigInt(-r) : r;
}

void parallel_chunks(i64 lo, i64 hi, int threads, i64 align_base,
                     const std::function<void(i64, i64)>& fn) {
  if (lo > hi) return;
  i64 total = hi - lo + 1;
  if (threads <= 1 || total < 4096) {
    fn(lo, hi);
    return;
  }
  i64 per = (total + threads - 1) / threads;
  per = ((per + 63) / 64) * 64;  // word-aligned relative to align_base
  std::vector<std::thread> pool;
  i64 start = lo - ((lo - align_base) % 64 + 64) % 64;  // align down
  // first chunk may start before lo; clamp inside the loop
  for (i64 a = start; a <= hi; a += per) {
    i64 b = std::min(hi, a + per - 1);
    i64 c0 = std::max(a, lo);
    pool.emplace_back([&fn, c0, b] { fn(c0, b); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace recur
