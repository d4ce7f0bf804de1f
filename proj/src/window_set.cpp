#include "recur/window_set.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace recur {

namespace {

constexpr i64 kMaxWindowBits = 1'100'000'000;  // generous cap above the 1e8 target

void check_window(i64 lo, i64 hi) {
  if (lo > hi) throw std::invalid_argument("WindowSet: lo > hi");
  if (hi - lo + 1 > kMaxWindowBits)
    throw std::invalid_argument("WindowSet: window longer than supported");
}

}  // namespace

WindowSet::WindowSet(i64 lo, i64 hi) : lo_(lo), hi_(hi) {
  check_window(lo, hi);
  bits_.assign((size_t)((hi - lo) / 64 + 1), 0);
}

WindowSet WindowSet::from_elements(i64 lo, i64 hi, const std::vector<i64>& elements) {
  WindowSet s(lo, hi);
  for (i64 n : elements) {
    if (n < lo || n > hi)
      throw std::invalid_argument("WindowSet: element " + std::to_string(n) +
                                  " outside window [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
    s.set(n);
  }
  return s;
}

WindowSet WindowSet::full(i64 lo, i64 hi) {
  WindowSet s(lo, hi);
  for (auto& w : s.bits_) w = ~0ULL;
  i64 tail = (hi - lo + 1) & 63;
  if (tail) s.bits_.back() &= (~0ULL >> (64 - tail));
  return s;
}

i64 WindowSet::count() const {
  i64 c = 0;
  for (u64 w : bits_) c += std::popcount(w);
  return c;
}

bool WindowSet::contains(i64 n) const {
  if (n < lo_ || n > hi_) return false;
  return bit(n - lo_);
}

void WindowSet::set(i64 n) {
  if (n < lo_ || n > hi_) throw std::invalid_argument("WindowSet::set: out of window");
  bits_[(size_t)((n - lo_) >> 6)] |= 1ULL << ((n - lo_) & 63);
}

std::vector<i64> WindowSet::members() const {
  std::vector<i64> out;
  out.reserve((size_t)count());
  for_each_member([&](i64 n) { out.push_back(n); });
  return out;
}

std::optional<i64> WindowSet::first_member() const {
  for (size_t w = 0; w < bits_.size(); ++w)
    if (bits_[w]) return lo_ + (i64)(w * 64 + __builtin_ctzll(bits_[w]));
  return std::nullopt;
}

WindowSet WindowSet::translate(i64 t) const {
  WindowSet s = *this;
  s.lo_ += t;
  s.hi_ += t;
  return s;
}

namespace {

// 64 membership bits starting at absolute position pos; bits outside the
// window read as zero.  Relies on the storage invariant that tail bits
// beyond the window length are kept zero.
u64 extract_word(const std::vector<u64>& bits, i64 window_lo, i64 pos) {
  i64 r = pos - window_lo;
  auto word_at = [&](i64 w) -> u64 {
    return (w < 0 || w >= (i64)bits.size()) ? 0 : bits[(size_t)w];
  };
  if (r >= 0) {
    i64 q = r >> 6;
    int sh = (int)(r & 63);
    u64 low = word_at(q) >> sh;
    u64 high = sh ? (word_at(q + 1) << (64 - sh)) : 0;
    return low | high;
  }
  i64 s = -r;
  if (s >= 64) return 0;
  return word_at(0) << s;
}

}  // namespace

WindowSet WindowSet::restricted(i64 lo, i64 hi) const {
  i64 a = std::max(lo, lo_), b = std::min(hi, hi_);
  if (a > b) throw std::invalid_argument("WindowSet::restricted: disjoint ranges");
  WindowSet s(a, b);
  for (size_t w = 0; w < s.bits_.size(); ++w)
    s.bits_[w] = extract_word(bits_, lo_, a + (i64)(w * 64));
  i64 tail = (b - a + 1) & 63;
  if (tail) s.bits_.back() &= (~0ULL >> (64 - tail));
  return s;
}

WindowSet WindowSet::complement() const {
  WindowSet s = *this;
  for (auto& w : s.bits_) w = ~w;
  i64 tail = (hi_ - lo_ + 1) & 63;
  if (tail) s.bits_.back() &= (~0ULL >> (64 - tail));
  return s;
}

WindowSet intersect(const WindowSet& a, const WindowSet& b) {
  WindowSet out = a.restricted(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
  for (size_t w = 0; w < out.bits_.size(); ++w)
    out.bits_[w] &= extract_word(b.bits_, b.lo_, out.lo_ + (i64)(w * 64));
  return out;
}

WindowSet set_union(const WindowSet& a, const WindowSet& b) {
  WindowSet out = a.restricted(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
  for (size_t w = 0; w < out.bits_.size(); ++w)
    out.bits_[w] |= extract_word(b.bits_, b.lo_, out.lo_ + (i64)(w * 64));
  i64 tail = (out.hi_ - out.lo_ + 1) & 63;
  if (tail) out.bits_.back() &= (~0ULL >> (64 - tail));
  return out;
}

WindowSet difference(const WindowSet& a, const WindowSet& b) {
  WindowSet out = a.restricted(std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi()));
  for (size_t w = 0; w < out.bits_.size(); ++w)
    out.bits_[w] &= ~extract_word(b.bits_, b.lo_, out.lo_ + (i64)(w * 64));
  return out;
}

bool WindowSet::is_subset_of(const WindowSet& other) const {
  i64 lo = std::max(lo_, other.lo_), hi = std::min(hi_, other.hi_);
  if (lo > hi) throw std::invalid_argument("WindowSet::is_subset_of: disjoint windows");
  size_t words = (size_t)((hi - lo) / 64 + 1);
  for (size_t w = 0; w < words; ++w) {
    i64 pos = lo + (i64)(w * 64);
    u64 mine = extract_word(bits_, lo_, pos);
    if (pos + 63 > hi) mine &= ~0ULL >> (63 - (hi - pos));
    if (mine & ~extract_word(other.bits_, other.lo_, pos)) return false;
  }
  return true;
}

GapProfile WindowSet::gap_profile() const {
  GapProfile p;
  i64 prev = 0;
  bool seen = false;
  for (size_t w = 0; w < bits_.size(); ++w) {
    u64 word = bits_[w];
    while (word) {
      int b = __builtin_ctzll(word);
      word &= word - 1;
      i64 n = lo_ + (i64)(w * 64 + b);
      if (!seen) {
        p.first_element_offset = n - lo_;
        seen = true;
      } else {
        p.max_internal_gap = std::max(p.max_internal_gap, n - prev);
      }
      prev = n;
      ++p.element_count;
    }
  }
  if (seen) {
    p.last_element_offset = hi_ - prev;
    p.gap_defined = true;
  }
  return p;
}

PwsProfile WindowSet::pws_profile(i64 N) const {
  if (N < 0 || N >= hi_ - lo_ + 1)
    throw std::invalid_argument("pws_profile: need 0 <= N < window length");
  PwsProfile p;
  p.translate_count = N;
  // Covered integers are exactly those m in [lo, hi-N] with a member in
  // [m, m+N]; each member b contributes the interval [b-N, b].
  i64 range_hi = hi_ - N;
  i64 cur_start = 0, cur_end = 0;
  bool open = false;
  auto flush = [&] {
    if (!open) return;
    i64 len = cur_end - cur_start + 1;
    if (len > p.longest_covered_run) {
      p.longest_covered_run = len;
      p.run_location = cur_start;
    }
    open = false;
  };
  for_each_member([&](i64 b) {
    i64 a = std::max(b - N, lo_), e = std::min(b, range_hi);
    if (a > e) return;
    if (open && a <= cur_end + 1) {
      cur_end = std::max(cur_end, e);
    } else {
      flush();
      cur_start = a;
      cur_end = e;
      open = true;
    }
  });
  flush();
  return p;
}

Rat64 WindowSet::banach_density_estimate(i64 L) const {
  if (L < 1 || L > hi_ - lo_)
    throw std::invalid_argument("banach_density_estimate: need 1 <= L <= window length");
  // Sliding count over blocks [a, a+L] (L+1 integers measured over length L).
  i64 cnt = 0;
  for (i64 n = lo_; n <= lo_ + L; ++n) cnt += bit(n - lo_);
  i64 best = cnt;
  for (i64 a = lo_ + 1; a + L <= hi_; ++a) {
    cnt -= bit(a - 1 - lo_);
    cnt += bit(a + L - lo_);
    best = std::max(best, cnt);
  }
  return Rat64::make(std::min(best, L), L);
}

std::string WindowSet::summary() const {
  std::ostringstream out;
  GapProfile g = gap_profile();
  out << "window [" << lo_ << ", " << hi_ << "], " << g.element_count << " elements";
  if (g.gap_defined)
    out << ", max internal gap " << g.max_internal_gap << ", edge offsets "
        << g.first_element_offset << "/" << g.last_element_offset;
  return out.str();
}

FamilySpec::FamilySpec(std::vector<WindowSet> gens) : generators(std::move(gens)) {
  if (generators.empty()) throw std::invalid_argument("FamilySpec: no generators");
  for (size_t i = 0; i < generators.size(); ++i)
    if (generators[i].empty())
      throw std::invalid_argument("FamilySpec: generator " + std::to_string(i) +
                                  " is empty on its window");
}

std::optional<size_t> family_membership_witness(i64 a, const WindowSet& B,
                                                const FamilySpec& fam) {
  WindowSet shifted = B.translate(-a);
  for (size_t g = 0; g < fam.generators.size(); ++g) {
    const WindowSet& gen = fam.generators[g];
    i64 lo = std::max(shifted.lo(), gen.lo()), hi = std::min(shifted.hi(), gen.hi());
    if (lo > hi)
      throw std::invalid_argument("family_membership_witness: translated window ["
                                  + std::to_string(shifted.lo()) + ", " + std::to_string(shifted.hi())
                                  + "] does not meet generator " + std::to_string(g));
    if (gen.restricted(lo, hi).is_subset_of(shifted)) return g;
  }
  return std::nullopt;
}

Lemma21Report lemma21_check(const WindowSet& A, const WindowSet& B,
                            const FamilySpec& fam, const std::vector<i64>& N_list) {
  i64 lo = std::max(A.lo(), B.lo()), hi = std::min(A.hi(), B.hi());
  if (lo > hi) throw std::invalid_argument("lemma21_check: A and B have disjoint windows");
  WindowSet a = A.restricted(lo, hi), b = B.restricted(lo, hi);

  Lemma21Report r;
  r.b_subset_of_a = true;
  b.for_each_member([&](i64 n) {
    if (r.b_subset_of_a && !a.contains(n)) {
      r.b_subset_of_a = false;
      r.first_b_element_missing_from_a = n;
    }
  });

  r.all_a_witnessed = true;
  a.for_each_member([&](i64 n) {
    if (!r.all_a_witnessed) return;
    if (!family_membership_witness(n, b, fam)) {
      r.all_a_witnessed = false;
      r.first_unwitnessed_a = n;
    }
  });

  r.pairwise_ok = true;
  for (size_t i = 0; i < fam.generators.size(); ++i)
    for (size_t j = i; j < fam.generators.size(); ++j) {
      Lemma21Report::PairEvidence ev;
      ev.i = i;
      ev.j = j;
      WindowSet meet = intersect(fam.generators[i], fam.generators[j]);
      ev.nonempty = !meet.empty();
      ev.gaps = meet.gap_profile();
      if (!ev.nonempty) r.pairwise_ok = false;
      r.pairwise.push_back(ev);
    }

  r.hypotheses_pass = r.b_subset_of_a && r.all_a_witnessed && r.pairwise_ok;

  WindowSet diff = difference(a, b);
  r.difference_count = diff.count();
  for (i64 N : N_list) r.difference_profiles.push_back(diff.pws_profile(N));
  r.note = "windowed evidence on [" + std::to_string(lo) + ", " + std::to_string(hi) +
           "]; profiles bound covered runs of A\\B, not piecewise syndeticity on Z";
  return r;
}

}  // namespace recur
