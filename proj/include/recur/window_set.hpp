// Finite-window subsets of Z with bit-parallel storage.
//
// Every set carries its window [lo, hi] explicitly.  Set algebra is
// defined on the intersection of the operand windows; translation shifts
// the window.  Largeness diagnostics (gaps, covered runs, block density)
// are windowed evidence for the corresponding notions on Z, never proofs:
// edge effects are reported separately so truncation cannot inflate a
// verdict.

#pragma once

#include "recur/arith.hpp"
#include "recur/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace recur {

struct GapProfile {
  i64 max_internal_gap = 0;       // max difference of consecutive members
  i64 first_element_offset = 0;   // first member minus lo
  i64 last_element_offset = 0;    // hi minus last member
  i64 element_count = 0;
  bool gap_defined = false;       // false for the empty set
};

struct PwsProfile {
  i64 translate_count = 0;        // the N in the union s u (s-1) u ... u (s-N)
  i64 longest_covered_run = 0;    // consecutive integers inside [lo, hi-N]
  i64 run_location = 0;           // start of one maximal run (0 if none)
};

class WindowSet {
 public:
  WindowSet(i64 lo, i64 hi);  // empty set on [lo, hi]

  static WindowSet from_elements(i64 lo, i64 hi, const std::vector<i64>& elements);
  static WindowSet full(i64 lo, i64 hi);
  // membership_of(n) decides every n in [lo, hi]
  template <typename Pred>
  static WindowSet from_predicate(i64 lo, i64 hi, Pred&& membership_of) {
    WindowSet s(lo, hi);
    for (i64 n = lo; n <= hi; ++n)
      if (membership_of(n)) s.set(n);
    return s;
  }

  i64 lo() const { return lo_; }
  i64 hi() const { return hi_; }
  i64 window_length() const { return hi_ - lo_; }
  i64 count() const;
  bool empty() const { return count() == 0; }
  bool contains(i64 n) const;
  void set(i64 n);

  std::vector<i64> members() const;
  std::optional<i64> first_member() const;
  template <typename Fn>
  void for_each_member(Fn&& fn) const {
    for (size_t w = 0; w < bits_.size(); ++w) {
      u64 word = bits_[w];
      while (word) {
        int b = __builtin_ctzll(word);
        word &= word - 1;
        fn(lo_ + (i64)(w * 64 + b));
      }
    }
  }

  WindowSet translate(i64 t) const;
  WindowSet restricted(i64 lo, i64 hi) const;  // [lo,hi] must meet the window
  WindowSet complement() const;                // within the own window

  // Results live on the window intersection; disjoint windows are rejected.
  friend WindowSet intersect(const WindowSet& a, const WindowSet& b);
  friend WindowSet set_union(const WindowSet& a, const WindowSet& b);
  friend WindowSet difference(const WindowSet& a, const WindowSet& b);

  bool is_subset_of(const WindowSet& other) const;  // on the window overlap
  bool operator==(const WindowSet& o) const { return lo_ == o.lo_ && hi_ == o.hi_ && bits_ == o.bits_; }

  GapProfile gap_profile() const;

  // Longest run of consecutive integers in [lo, hi-N] covered by the union
  // of s-0, ..., s-N.  Requires 0 <= N < window length.
  PwsProfile pws_profile(i64 N) const;

  // Max over blocks [a, a+L] inside the window of |s n block| / L, clamped
  // to 1.  Requires 1 <= L <= window length.
  Rat64 banach_density_estimate(i64 L) const;

  std::string summary() const;

 private:
  i64 lo_, hi_;
  std::vector<u64> bits_;
  bool bit(i64 idx) const { return (bits_[idx >> 6] >> (idx & 63)) & 1; }
};

struct FamilySpec {
  std::vector<WindowSet> generators;  // each nonempty on its window
  explicit FamilySpec(std::vector<WindowSet> gens);
};

// Index of a generator g with B - a certain to contain g on the overlap of
// their windows, or nullopt.  Disjoint windows are rejected.
std::optional<size_t> family_membership_witness(i64 a, const WindowSet& B,
                                                const FamilySpec& fam);

struct Lemma21Report {
  bool b_subset_of_a = false;
  std::optional<i64> first_b_element_missing_from_a;
  bool all_a_witnessed = false;
  std::optional<i64> first_unwitnessed_a;
  struct PairEvidence {
    size_t i = 0, j = 0;
    bool nonempty = false;
    GapProfile gaps;
  };
  std::vector<PairEvidence> pairwise;  // includes i == j (single generators)
  bool pairwise_ok = false;            // all pairwise intersections nonempty
  bool hypotheses_pass = false;
  std::vector<PwsProfile> difference_profiles;  // of A \ B, one per N
  i64 difference_count = 0;
  std::string note;  // windowed-evidence framing
};

// Windowed checker for the hypothesis "B subset A subset B - F" and the
// non-piecewise-syndeticity evidence on A \ B.
Lemma21Report lemma21_check(const WindowSet& A, const WindowSet& B,
                            const FamilySpec& fam, const std::vector<i64>& N_list);

}  // namespace recur
