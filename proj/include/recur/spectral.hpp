// Eigenvalue groups of the concrete systems, disjointness verdicts, the
// divide-by-k spectrum operation, and Kronecker correlation sequences.
//
// The rational part of a spectrum is always exact: a finitely generated
// subgroup of Q/Z is cyclic and is stored through its denominator L as
// <1/L>.  Irrational generators are 128-bit fixed values trusted to be
// irrational by construction; groups listing any are tagged Heuristic
// because no finite procedure certifies completeness of such a listing.
// Unknown is a first-class verdict and experiments must refuse on it
// rather than assume disjointness.

#pragma once

#include "recur/scalar.hpp"
#include "recur/systems.hpp"
#include "recur/window_set.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace recur {

struct EigenGroup {
  i64 rational_denominator = 1;              // subgroup <1/L> of Q/Z
  std::vector<Scalar> irrational_generators; // Fixed values, deduplicated
  enum class Exactness { Exact, Heuristic } exactness = Exactness::Exact;
  i64 comparison_bound = 1;  // multiplier height searched when comparing

  bool trivial() const { return rational_denominator == 1 && irrational_generators.empty(); }
  std::string str() const;
};

// Rejects Diagonal specs: spectra of diagonal orbit closures have no
// desk-scale certification path here.
EigenGroup eigen_group(const SystemPtr& sys);

struct ShareVerdict {
  enum class Kind { Yes, No, Unknown } kind = Kind::Unknown;
  std::optional<Scalar> witness;  // a shared nontrivial eigenvalue, for Yes
  std::string note;
};

ShareVerdict shares_nontrivial_eigenvalue(const EigenGroup& a, const EigenGroup& b);

// {theta : k*theta lies in g}: the rational part <1/L> becomes <1/(kL)> and
// each irrational generator gamma contributes gamma/k alongside 1/k.
EigenGroup spectrum_div_k(const EigenGroup& g, i64 k);

struct FourierMode {
  i64 freq = 0;
  Rat64 re, im;  // exact coefficient
};

struct FourierData {
  std::vector<FourierMode> modes;  // distinct frequencies
  static FourierData from_modes(std::vector<FourierMode> modes);
  std::optional<FourierMode> mode_at(i64 freq) const;
  // sum over k of |a_k| * |b_k| upper bound via |re| + |im|
  double l1_bound(const FourierData& other) const;
  bool conjugate_symmetric() const;  // mode at -k is the conjugate of mode at k
};

// gamma(n) = sum_k a_k * conj(b_k) * e(k * alpha * n) over shared
// frequencies.  Phases k*n*alpha are reduced exactly on the scalar lattice
// before the long-double evaluation; the per-mode accuracy budget is 2^-60.
std::complex<long double> kronecker_gamma(const FourierData& f1, const FourierData& f2,
                                          const Scalar& alpha, i64 n);

// {n in [lo, hi] : Re gamma(n) > eps}; both spectra must encode real-valued
// functions (conjugate-symmetric mode lists).
WindowSet d_eps_set(const FourierData& f1, const FourierData& f2, const Scalar& alpha,
                    const Rat64& eps, i64 lo, i64 hi);

}  // namespace recur
