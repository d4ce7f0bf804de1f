// Exact integer-coefficient polynomials and tuples.
//
// Coefficients are arbitrary-precision and stored constant-term first in
// canonical form (no trailing zeros; the zero polynomial has an empty
// coefficient list), so equality is plain sequence comparison.

#pragma once

#include "recur/arith.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace recur {

class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<BigInt> coeffs_constant_first);

  static IntPoly zero() { return IntPoly(); }
  static IntPoly constant(const BigInt& c) { return IntPoly({c}); }
  // c * n^k
  static IntPoly monomial(const BigInt& c, int k);
  static IntPoly n() { return monomial(1, 1); }

  int degree() const { return (int)coeffs_.size() - 1; }  // -1 for zero
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<BigInt>& coeffs() const { return coeffs_; }
  BigInt coeff(size_t k) const { return k < coeffs_.size() ? coeffs_[k] : BigInt(0); }
  BigInt constant_term() const { return coeff(0); }

  BigInt eval(const BigInt& x) const;
  BigInt eval_i64(i64 x) const { return eval(BigInt((long)x)); }

  IntPoly operator+(const IntPoly& o) const;
  IntPoly operator-(const IntPoly& o) const;
  IntPoly operator*(const IntPoly& o) const;
  IntPoly scaled(const BigInt& c) const;
  bool operator==(const IntPoly& o) const { return coeffs_ == o.coeffs_; }

  // q with q(n) = p(n+a) - p(a); q(0) = 0 always and deg q = deg p.
  IntPoly shift_root(const BigInt& a) const;

  // Expanded n -> p(k*n + j); k must be nonzero.
  IntPoly compose_ap(const BigInt& k, const BigInt& j) const;

  // "n^2+6*n" style: sum of c*n^k terms, descending powers.
  std::string str() const;
  static IntPoly parse(const std::string& text);

 private:
  std::vector<BigInt> coeffs_;
  void trim();
};

struct PolyTuple {
  std::vector<IntPoly> entries;

  explicit PolyTuple(std::vector<IntPoly> e) : entries(std::move(e)) {
    if (entries.empty()) throw std::invalid_argument("PolyTuple: needs at least one entry");
  }
  size_t size() const { return entries.size(); }
  const IntPoly& operator[](size_t i) const { return entries[i]; }
};

struct DistinctnessResult {
  bool ok = true;
  std::optional<std::pair<size_t, size_t>> offending_pair;  // 0-based
  std::string reason;
};

// Every pairwise difference has degree >= 1.
DistinctnessResult is_essentially_distinct(const PolyTuple& t);

// All constant terms vanish and entries are pairwise unequal.
DistinctnessResult in_pol_d(const PolyTuple& t);

// Scale-and-compose transformation: for p with p(0) = 0 and M >= 1, a != 0,
// returns (q, p_tilde) with p_tilde(n) = sum_{l>=1} c_l M^(l-1) n^l and
// q(n) = p_tilde(a*n + b), so that M*q(n) = p(M*(a*n + b)) identically.
struct ChangePolyResult {
  IntPoly q;
  IntPoly p_tilde;
};
ChangePolyResult change_poly(const IntPoly& p, const BigInt& M, const BigInt& a,
                             const BigInt& b);

}  // namespace recur
