#include "recur/generators.hpp"

#include <stdexcept>

namespace recur {

WindowSet gen_beatty(const Scalar& beta, i64 lo, i64 hi) {
  Scalar threshold = -beta;  // 1 - beta mod 1
  WindowSet s(lo, hi);
  for (i64 m = lo; m <= hi; ++m) {
    Scalar t = beta.times_i64(m);
    if (t.is_zero() || threshold.less(t)) s.set(m);
  }
  return s;
}

WindowSet gen_nu2_even(i64 lo, i64 hi) {
  WindowSet s(lo, hi);
  for (i64 n = lo; n <= hi; ++n) {
    if (n == 0) continue;
    u64 m = n < 0 ? (u64)(-n) : (u64)n;
    if ((__builtin_ctzll(m) & 1) == 0) s.set(n);
  }
  return s;
}

WindowSet gen_example121(i64 lo, i64 hi) {
  WindowSet s(lo, hi);
  for (i64 n = lo; n <= hi; ++n) {
    if (n <= 0) {
      s.set(n);
      continue;
    }
    int k = 63 - __builtin_clzll((u64)n);  // n in [2^k, 2^(k+1))
    bool k_even = (k & 1) == 0;
    bool n_even = (n & 1) == 0;
    if (k_even == n_even) s.set(n);
  }
  return s;
}

WindowSet gen_poly_small(const Scalar& alpha, const IntPoly& p, const Rat64& eps,
                         i64 lo, i64 hi) {
  if (!(eps > Rat64{0, 1}) || !(eps < Rat64{1, 2}))
    throw std::invalid_argument("gen_poly_small: need 0 < eps < 1/2, got " + eps.str());
  WindowSet s(lo, hi);
  if (alpha.is_fixed()) {
    // ||x|| < p/q on the fixed lattice is an exact u128 compare against
    // ceil(p * 2^128 / q).
    BigInt num = BigInt(eps.num) << 128;
    u128 bound = mod_pow2_128(num / eps.den) + (num % eps.den != 0 ? 1 : 0);
    for (i64 n = lo; n <= hi; ++n) {
      u128 v = alpha.times(p.eval_i64(n)).fixed_value();
      u128 neg = u128(0) - v;
      if ((v < neg ? v : neg) < bound) s.set(n);
    }
  } else {
    Scalar eps_s = Scalar::rational(eps.num, eps.den);
    for (i64 n = lo; n <= hi; ++n)
      if (alpha.times(p.eval_i64(n)).norm().less(eps_s)) s.set(n);
  }
  return s;
}

WindowSet gen_ap(i64 step, i64 offset, i64 lo, i64 hi) {
  if (step < 1) throw std::invalid_argument("gen_ap: step must be >= 1");
  i64 r = ((offset % step) + step) % step;
  i64 first = lo + ((r - lo) % step + step) % step;
  WindowSet s(lo, hi);
  for (i64 n = first; n <= hi; n += step) s.set(n);
  return s;
}

}  // namespace recur
