// Visit-time sets and polynomial return-time sets over windows.
//
// Exact mode is available for rotation-type systems (cyclic and torus
// rotations under product/power/diagonal): membership of n is decided by
// intersecting the translated arcs and residue sets per coordinate, all in
// exact scalar arithmetic.  Every other system runs in Sample mode, which
// certifies membership by exhibiting a grid point whose orbit lands in all
// the regions; sample results are sound inner approximations of the true
// return set by construction.

#pragma once

#include "recur/poly.hpp"
#include "recur/systems.hpp"
#include "recur/window_set.hpp"

#include <optional>

namespace recur {

enum class Soundness { ExactSet, InnerApprox };

struct ReturnResult {
  WindowSet set;
  Soundness soundness = Soundness::ExactSet;
  i64 ambiguity_count = 0;
};

struct SampleSpec {
  int grid = 64;  // per-coordinate resolution on circle coordinates
};

struct ReturnQuery {
  SystemPtr sys;
  std::vector<Region> regions;
  PolyTuple tuple;
  i64 lo = 0, hi = 0;
  std::optional<SampleSpec> sample;  // nullopt requests Exact mode
  int threads = 1;

  ReturnQuery(SystemPtr s, std::vector<Region> r, PolyTuple t, i64 lo_, i64 hi_,
              std::optional<SampleSpec> mode = std::nullopt, int threads_ = 1)
      : sys(std::move(s)), regions(std::move(r)), tuple(std::move(t)),
        lo(lo_), hi(hi_), sample(mode), threads(threads_) {}
};

// {n in [lo, hi] : T^n y lands in V}.
ReturnResult visit_set(const SystemPtr& sys, const Point& y, const Region& V,
                       i64 lo, i64 hi, int threads = 1);

// {n in [lo, hi] : the translated regions T^-p_i(n) U_i have a common point}.
ReturnResult return_set(const ReturnQuery& q);

// Same along the diagonal tuple (0, p, 2p, ..., d*p) with regions (U,...,U).
ReturnResult return_set_diag(const SystemPtr& sys, const Region& U, int d,
                             const IntPoly& p, i64 lo, i64 hi,
                             std::optional<SampleSpec> mode = std::nullopt,
                             int threads = 1);

// Translation identity: the return set of the shifted tuple
// q_i(n) = p_i(n+a) - p_i(a) over the preimage regions T^-p_i(a) U_i must
// equal the original return set translated by -a, element for element.
struct Lemma31Report {
  bool equal = false;
  i64 window_lo = 0, window_hi = 0;
  std::vector<i64> mismatches;  // first few witnesses
  i64 mismatch_count = 0;
};
Lemma31Report lemma31_harness(const SystemPtr& sys, const std::vector<Region>& regions,
                              const PolyTuple& tuple, i64 a, i64 lo, i64 hi);

// Sampled return set of box regions upstairs in a skew product must embed in
// the exact return set of the projected arcs in the base rotation.
struct ContainmentReport {
  bool contained = false;
  std::vector<i64> violations;
  i64 upstairs_count = 0;
  i64 downstairs_count = 0;
  WindowSet upstairs;
  WindowSet downstairs;
};
ContainmentReport factor_containment_harness(const SystemPtr& skew,
                                             const std::vector<Region>& boxes,
                                             const PolyTuple& tuple, i64 lo, i64 hi,
                                             int grid = 64, int threads = 1);

}  // namespace recur
