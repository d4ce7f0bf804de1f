#include "recur/returns.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <stdexcept>

namespace recur {

namespace {

// ---------------------------------------------------------------------------
// Circular-arc intersection.  Arcs are open (start, start+length) on R/Z.
// The running intersection of d arcs is a list of at most 2 disjoint arcs per
// fold step (two pieces arise when the operands jointly wrap the circle).

struct Arc {
  Scalar start;
  Scalar length;
};

void note_boundary(const Scalar& len, i64& ambiguous) {
  Scalar zero = Scalar::zero(len.mode());
  if (Scalar::near(len, zero)) ++ambiguous;
}

// Intersect a with b, appending the open pieces to out.
void intersect_arcs(const Arc& a, const Arc& b, std::vector<Arc>& out, i64& ambiguous) {
  Scalar t = b.start - a.start;  // position of b's start inside a
  if (t.is_zero() || t.less(a.length)) {
    Scalar rest = a.length - t;
    Scalar len = rest.less(b.length) ? rest : b.length;
    note_boundary(len, ambiguous);
    if (!len.is_zero()) out.push_back({b.start, len});
  }
  Scalar u = a.start - b.start;
  if (!u.is_zero() && u.less(b.length)) {
    Scalar rest = b.length - u;
    Scalar len = rest.less(a.length) ? rest : a.length;
    note_boundary(len, ambiguous);
    if (!len.is_zero()) out.push_back({a.start, len});
  }
}

struct ArcList {
  bool everything = true;  // no constraint folded in yet
  std::vector<Arc> arcs;

  void constrain(const Arc& next, i64& ambiguous) {
    if (everything) {
      everything = false;
      arcs = {next};
      return;
    }
    std::vector<Arc> folded;
    for (const Arc& a : arcs) intersect_arcs(a, next, folded, ambiguous);
    arcs = std::move(folded);
  }
  bool nonempty() const { return everything || !arcs.empty(); }
};

// ---------------------------------------------------------------------------
// Exact evaluation context for rotation-type systems.

struct ExactCircle {
  Scalar delta;  // step * alpha: translation per exponent unit
  std::vector<std::optional<Arc>> region_arcs;  // nullopt = full circle
};

struct ExactCyclic {
  i64 modulus = 0;
  i64 step = 1;
  std::vector<std::optional<std::vector<std::uint8_t>>> region_sets;  // nullopt = all
};

struct ExactContext {
  std::vector<ExactCircle> circles;
  std::vector<ExactCyclic> cyclics;
  size_t region_count = 0;

  ExactContext(const FlatSystem& fs, const std::vector<Region>& regions) {
    if (!fs.rotation_type)
      throw std::invalid_argument(
          "return_set: exact mode requested on a non-rotation system; use sample mode");
    region_count = regions.size();
    for (size_t uidx = 0; uidx < fs.units.size(); ++uidx) {
      const Unit& u = fs.units[uidx];
      if (u.kind == Unit::Kind::Circle) {
        ExactCircle c;
        c.delta = u.alpha.times_i64(u.step);
        for (const Region& r : regions) {
          const ArcSpec& a = r.units[uidx].arcs[0];
          if (a.full) c.region_arcs.push_back(std::nullopt);
          else c.region_arcs.push_back(Arc{a.start, a.length});
        }
        circles.push_back(std::move(c));
      } else {
        ExactCyclic c;
        c.modulus = u.modulus;
        c.step = u.step;
        for (const Region& r : regions) {
          const auto& res = r.units[uidx].residues;
          bool all = std::all_of(res.begin(), res.end(), [](std::uint8_t v) { return v != 0; });
          if (all) c.region_sets.push_back(std::nullopt);
          else c.region_sets.push_back(res);
        }
        cyclics.push_back(std::move(c));
      }
    }
  }

  // shifts[i] = p_i(n)
  bool member(const std::vector<BigInt>& shifts, i64& ambiguous) const {
    for (const ExactCyclic& c : cyclics) {
      bool any = false;
      std::vector<std::uint8_t> cur;
      bool everything = true;
      for (size_t i = 0; i < region_count; ++i) {
        if (!c.region_sets[i]) continue;
        i64 m = mpz_class(shifts[i] * c.step % c.modulus).get_si();
        if (m < 0) m += c.modulus;
        if (everything) {
          cur.assign((size_t)c.modulus, 0);
          for (i64 r = 0; r < c.modulus; ++r)
            cur[(size_t)r] = (*c.region_sets[i])[(size_t)((r + m) % c.modulus)];
          everything = false;
        } else {
          for (i64 r = 0; r < c.modulus; ++r)
            cur[(size_t)r] &= (*c.region_sets[i])[(size_t)((r + m) % c.modulus)];
        }
      }
      if (everything) {
        any = true;
      } else {
        for (auto v : cur)
          if (v) { any = true; break; }
      }
      if (!any) return false;
    }
    for (const ExactCircle& c : circles) {
      ArcList fold;
      for (size_t i = 0; i < region_count; ++i) {
        if (!c.region_arcs[i]) continue;
        const Arc& base = *c.region_arcs[i];
        Arc moved{base.start - c.delta.times(shifts[i]), base.length};
        fold.constrain(moved, ambiguous);
        if (!fold.nonempty()) return false;
      }
      if (!fold.nonempty()) return false;
    }
    return true;
  }
};

// ---------------------------------------------------------------------------
// Sample evaluation: a deterministic phase-space grid plus the witness rule.

std::vector<Point> build_grid(const FlatSystem& fs, int resolution, size_t chacon_span) {
  if (resolution < 1) throw std::invalid_argument("sample grid: resolution must be positive");
  std::vector<std::vector<PointAtom>> axes;  // per atom
  for (const Unit& u : fs.units) {
    switch (u.kind) {
      case Unit::Kind::Circle:
      case Unit::Kind::Skew2:
      case Unit::Kind::SkewS: {
        std::vector<PointAtom> axis;
        for (int j = 0; j < resolution; ++j) {
          Scalar v = Scalar::rational(j, resolution);
          axis.push_back(fs.mode == Scalar::Mode::Fixed ? v.to_fixed() : v);
        }
        axes.push_back(axis);
        if (u.arity() == 2) axes.push_back(axis);
        break;
      }
      case Unit::Kind::CyclicRot: {
        std::vector<PointAtom> axis;
        for (i64 r = 0; r < u.modulus; ++r) axis.push_back(r);
        axes.push_back(std::move(axis));
        break;
      }
      case Unit::Kind::Chacon: {
        const std::string& ref = chacon_reference(2 * chacon_span + 8);
        size_t feasible = ref.size() > chacon_span ? ref.size() - chacon_span : 1;
        size_t limit = 4096;
        size_t stride = std::max<size_t>(1, feasible / limit);
        std::vector<PointAtom> axis;
        for (size_t j = 0; j < feasible; j += stride) axis.push_back((i64)j);
        axes.push_back(std::move(axis));
        break;
      }
    }
  }
  size_t total = 1;
  for (const auto& a : axes) {
    total *= a.size();
    if (total > (size_t)1 << 22)
      throw std::invalid_argument("sample grid: grid of this resolution is too large");
  }
  std::vector<Point> grid;
  grid.reserve(total);
  std::vector<size_t> idx(axes.size(), 0);
  for (size_t c = 0; c < total; ++c) {
    Point p;
    p.atoms.reserve(axes.size());
    for (size_t a = 0; a < axes.size(); ++a) p.atoms.push_back(axes[a][idx[a]]);
    grid.push_back(std::move(p));
    for (size_t a = axes.size(); a-- > 0;) {
      if (++idx[a] < axes[a].size()) break;
      idx[a] = 0;
    }
  }
  return grid;
}

struct SampleContext {
  const FlatSystem& fs;
  const std::vector<Region>& regions;
  std::vector<Point> grid;
  std::vector<size_t> active;  // region indices with nonzero polynomials
  i64 prefilter_ambiguous = 0;

  SampleContext(const FlatSystem& fs_, const std::vector<Region>& regions_,
                const PolyTuple& tuple, int resolution, size_t chacon_span)
      : fs(fs_), regions(regions_) {
    grid = build_grid(fs, resolution, chacon_span);
    // Regions attached to the zero polynomial constrain grid points
    // independently of n; filter them once.
    std::vector<size_t> zero;
    for (size_t i = 0; i < tuple.size(); ++i)
      (tuple[i].is_zero() ? zero : active).push_back(i);
    if (!zero.empty()) {
      std::vector<Point> kept;
      for (const Point& p : grid) {
        bool ok = true;
        for (size_t i : zero) {
          ContainResult c = region_contains(fs, regions[i], p);
          prefilter_ambiguous += c.ambiguous;
          if (!c.inside) { ok = false; break; }
        }
        if (ok) kept.push_back(p);
      }
      grid = std::move(kept);
    }
  }

  bool member(const std::vector<BigInt>& shifts, i64& ambiguous) const {
    for (const Point& p : grid) {
      bool ok = true;
      for (size_t i : active) {
        Point moved = orbit_eval_big(fs, p, shifts[i]);
        ContainResult c = region_contains(fs, regions[i], moved);
        ambiguous += c.ambiguous;
        if (!c.inside) { ok = false; break; }
      }
      if (ok) return true;
    }
    return false;
  }
};

// Fast path for a bare Chacon subshift: occurrence bitmasks per region and a
// shifted-AND word scan per n.

struct ChaconMasks {
  std::vector<std::vector<u64>> occ;  // per region, bit j = all-cylinder match at j
  std::vector<i64> max_start;         // last j with a full-length window
  i64 step = 1;
  size_t word_len = 0;

  ChaconMasks(const FlatSystem& fs, const std::vector<Region>& regions, size_t span) {
    step = fs.units[0].step;
    const std::string& ref = chacon_reference(2 * span + 8);
    word_len = ref.size();
    for (const Region& r : regions) {
      const auto& cyls = r.units[0].cylinders;
      size_t maxlen = 0;
      for (const auto& w : cyls) maxlen = std::max(maxlen, w.size());
      std::vector<u64> bits(word_len / 64 + 1, 0);
      i64 last = (i64)word_len - (i64)maxlen;
      for (i64 j = 0; j <= last; ++j) {
        for (const auto& w : cyls)
          if (ref.compare((size_t)j, w.size(), w) == 0) {
            bits[(size_t)j >> 6] |= 1ULL << (j & 63);
            break;
          }
      }
      occ.push_back(std::move(bits));
      max_start.push_back(last);
    }
  }

  u64 word_at(const std::vector<u64>& bits, i64 bitpos) const {
    if (bitpos < 0) {
      if (bitpos <= -64) return 0;
      return bits[0] << (-bitpos);
    }
    size_t q = (size_t)(bitpos >> 6);
    int sh = (int)(bitpos & 63);
    u64 low = q < bits.size() ? bits[q] >> sh : 0;
    u64 high = (sh && q + 1 < bits.size()) ? bits[q + 1] << (64 - sh) : 0;
    return low | high;
  }

  bool member(const std::vector<BigInt>& shifts) const {
    std::vector<i64> m(shifts.size());
    i64 jhi = std::numeric_limits<i64>::max();
    for (size_t i = 0; i < shifts.size(); ++i) {
      BigInt s = shifts[i] * step;
      if (!s.fits_slong_p()) return false;  // beyond any generated word
      m[i] = s.get_si();
      jhi = std::min(jhi, max_start[i] - m[i]);
    }
    i64 jlo = 0;
    for (i64 v : m) jlo = std::max(jlo, -v);
    if (jlo > jhi) return false;
    for (i64 base = jlo; base <= jhi; base += 64) {
      u64 acc = ~0ULL;
      for (size_t i = 0; i < shifts.size() && acc; ++i)
        acc &= word_at(occ[i], base + m[i]);
      if (base + 63 > jhi && acc) acc &= ~0ULL >> (63 - (jhi - base));
      if (acc) return true;
    }
    return false;
  }
};

size_t chacon_span_needed(const PolyTuple& tuple, i64 lo, i64 hi, i64 step) {
  BigInt worst = 0;
  for (const IntPoly& p : tuple.entries) {
    for (i64 n : {lo, hi, i64(0)}) {
      if (n < lo || n > hi) continue;
      BigInt v = abs(p.eval_i64(n) * step);
      worst = std::max(worst, v);
    }
  }
  // Polynomials are monotone only eventually; scanning endpoints is enough
  // for the degree-1 and degree-2 shapes used here, and the reference word is
  // grown with slack.  Region evaluation re-checks bounds anyway.
  worst += 8;
  if (!worst.fits_slong_p())
    throw std::invalid_argument("return_set: polynomial shifts exceed any generated word");
  return (size_t)worst.get_si();
}

WindowSet evaluate_over_window(i64 lo, i64 hi, int threads, i64& ambiguous,
                               const std::function<bool(const std::vector<BigInt>&, i64&)>& member,
                               const PolyTuple& tuple) {
  WindowSet out(lo, hi);
  std::atomic<i64> amb_total{0};
  auto run = [&](i64 a, i64 b) {
    i64 amb = 0;
    std::vector<BigInt> shifts(tuple.size());
    for (i64 n = a; n <= b; ++n) {
      for (size_t i = 0; i < tuple.size(); ++i) shifts[i] = tuple[i].eval_i64(n);
      if (member(shifts, amb)) out.set(n);
    }
    amb_total += amb;
  };
  if (threads <= 1) {
    run(lo, hi);
  } else {
    parallel_chunks(lo, hi, threads, lo, run);
  }
  ambiguous += amb_total.load();
  return out;
}

}  // namespace

ReturnResult visit_set(const SystemPtr& sys, const Point& y, const Region& V,
                       i64 lo, i64 hi, int threads) {
  if (lo > hi) throw std::invalid_argument("visit_set: empty window");
  FlatSystem fs = flatten(sys);
  validate_point(fs, y);
  validate_region(fs, V);
  WindowSet out(lo, hi);
  std::atomic<i64> amb{0};
  auto run = [&](i64 a, i64 b) {
    i64 local = 0;
    for (i64 n = a; n <= b; ++n) {
      Point p = orbit_eval(fs, y, n);
      ContainResult c = region_contains(fs, V, p);
      local += c.ambiguous;
      if (c.inside) out.set(n);
    }
    amb += local;
  };
  if (threads <= 1) run(lo, hi);
  else parallel_chunks(lo, hi, threads, lo, run);
  return ReturnResult{std::move(out), Soundness::ExactSet, amb.load()};
}

ReturnResult return_set(const ReturnQuery& q) {
  if (q.lo > q.hi) throw std::invalid_argument("return_set: empty window");
  if (q.regions.size() != q.tuple.size())
    throw std::invalid_argument("return_set: tuple length must equal region count");
  FlatSystem fs = flatten(q.sys);
  for (const Region& r : q.regions) validate_region(fs, r);

  i64 ambiguous = 0;
  if (!q.sample) {
    ExactContext ctx(fs, q.regions);
    WindowSet set = evaluate_over_window(
        q.lo, q.hi, q.threads, ambiguous,
        [&](const std::vector<BigInt>& shifts, i64& amb) { return ctx.member(shifts, amb); },
        q.tuple);
    return ReturnResult{std::move(set), Soundness::ExactSet, ambiguous};
  }

  bool bare_chacon = fs.units.size() == 1 && fs.units[0].kind == Unit::Kind::Chacon;
  if (bare_chacon) {
    size_t span = chacon_span_needed(q.tuple, q.lo, q.hi, fs.units[0].step);
    ChaconMasks masks(fs, q.regions, span);
    WindowSet set = evaluate_over_window(
        q.lo, q.hi, q.threads, ambiguous,
        [&](const std::vector<BigInt>& shifts, i64&) { return masks.member(shifts); },
        q.tuple);
    return ReturnResult{std::move(set), Soundness::InnerApprox, ambiguous};
  }

  size_t span = fs.has_chacon ? chacon_span_needed(q.tuple, q.lo, q.hi, 1) : 0;
  SampleContext ctx(fs, q.regions, q.tuple, q.sample->grid, span);
  ambiguous += ctx.prefilter_ambiguous;
  WindowSet set = evaluate_over_window(
      q.lo, q.hi, q.threads, ambiguous,
      [&](const std::vector<BigInt>& shifts, i64& amb) { return ctx.member(shifts, amb); },
      q.tuple);
  return ReturnResult{std::move(set), Soundness::InnerApprox, ambiguous};
}

ReturnResult return_set_diag(const SystemPtr& sys, const Region& U, int d,
                             const IntPoly& p, i64 lo, i64 hi,
                             std::optional<SampleSpec> mode, int threads) {
  if (d < 1) throw std::invalid_argument("return_set_diag: d must be positive");
  std::vector<IntPoly> tuple;
  std::vector<Region> regions;
  for (int i = 0; i <= d; ++i) {
    tuple.push_back(p.scaled(i));
    regions.push_back(U);
  }
  return return_set(ReturnQuery(sys, std::move(regions), PolyTuple(std::move(tuple)),
                                lo, hi, mode, threads));
}

Lemma31Report lemma31_harness(const SystemPtr& sys, const std::vector<Region>& regions,
                              const PolyTuple& tuple, i64 a, i64 lo, i64 hi) {
  FlatSystem fs = flatten(sys);
  ReturnQuery right_q(sys, regions, tuple, lo, hi);
  ReturnResult right = return_set(right_q);
  WindowSet right_shifted = right.set.translate(-a);

  std::vector<Region> pre_regions;
  std::vector<IntPoly> shifted;
  for (size_t i = 0; i < tuple.size(); ++i) {
    pre_regions.push_back(preimage_region(fs, regions[i], tuple[i].eval_i64(a)));
    shifted.push_back(tuple[i].shift_root(a));
  }
  ReturnQuery left_q(sys, std::move(pre_regions), PolyTuple(std::move(shifted)),
                     lo - a, hi - a);
  ReturnResult left = return_set(left_q);

  Lemma31Report rep;
  rep.window_lo = lo - a;
  rep.window_hi = hi - a;
  for (i64 n = rep.window_lo; n <= rep.window_hi; ++n) {
    if (left.set.contains(n) != right_shifted.contains(n)) {
      ++rep.mismatch_count;
      if (rep.mismatches.size() < 16) rep.mismatches.push_back(n);
    }
  }
  rep.equal = rep.mismatch_count == 0;
  return rep;
}

ContainmentReport factor_containment_harness(const SystemPtr& skew,
                                             const std::vector<Region>& boxes,
                                             const PolyTuple& tuple, i64 lo, i64 hi,
                                             int grid, int threads) {
  FlatSystem fs = flatten(skew);
  if (fs.units.size() != 1 ||
      (fs.units[0].kind != Unit::Kind::Skew2 && fs.units[0].kind != Unit::Kind::SkewS))
    throw std::invalid_argument("factor_containment_harness: expected a bare skew product");
  ReturnResult up = return_set(ReturnQuery(skew, boxes, tuple, lo, hi,
                                           SampleSpec{grid}, threads));

  // Projection to the first coordinate is the base rotation; boxes project to
  // their x-arcs, which are open and equal to their interiors.
  SystemPtr base = SystemSpec::torus_rot({fs.units[0].alpha});
  FlatSystem base_fs = flatten(base);
  std::vector<Region> arcs;
  for (const Region& b : boxes) {
    Region r;
    r.units.resize(1);
    r.units[0].arcs = {b.units[0].arcs[0]};
    arcs.push_back(std::move(r));
  }
  ReturnResult down = return_set(ReturnQuery(base, std::move(arcs), tuple, lo, hi,
                                             std::nullopt, threads));

  ContainmentReport rep{false, {}, up.set.count(), down.set.count(),
                        up.set, down.set};
  up.set.for_each_member([&](i64 n) {
    if (!down.set.contains(n) && rep.violations.size() < 16) rep.violations.push_back(n);
  });
  rep.contained = rep.violations.empty();
  return rep;
}

}  // namespace recur
