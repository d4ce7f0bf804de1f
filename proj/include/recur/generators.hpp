// Arithmetic generators for the window engine: the example zoo of
// syndetic and dynamically syndetic sets.

#pragma once

#include "recur/poly.hpp"
#include "recur/scalar.hpp"
#include "recur/window_set.hpp"

namespace recur {

// {m : {m*beta} = 0 or {m*beta} > 1-beta}, the visit-time form of the
// Beatty sequence {floor(n/beta) : n in Z} for the reciprocal slope.
WindowSet gen_beatty(const Scalar& beta, i64 lo, i64 hi);

// {n != 0 : the 2-adic valuation of |n| is even}; 0 is excluded.
WindowSet gen_nu2_even(i64 lo, i64 hi);

// All n <= 0, together with even n in dyadic blocks [2^k, 2^(k+1)) for
// even k and odd n in those blocks for odd k.
WindowSet gen_example121(i64 lo, i64 hi);

// {n : ||p(n) * alpha|| < eps}; requires 0 < eps < 1/2.
WindowSet gen_poly_small(const Scalar& alpha, const IntPoly& p, const Rat64& eps,
                         i64 lo, i64 hi);

// {n : n = offset mod step}; step >= 1.
WindowSet gen_ap(i64 step, i64 offset, i64 lo, i64 hi);

}  // namespace recur
