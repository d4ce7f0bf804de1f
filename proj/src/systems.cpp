#include "recur/systems.hpp"

#include <cctype>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace recur {

namespace {

constexpr size_t kChaconWordCap = 100'000'000;
constexpr int kChaconLevelCap = 20;

size_t chacon_length(int level) {
  // length(l) = (3^(l+1) - 1) / 2
  size_t p = 1;
  for (int i = 0; i <= level; ++i) p *= 3;
  return (p - 1) / 2;
}

}  // namespace

SystemPtr SystemSpec::cyclic(i64 k) {
  if (k < 1) throw std::invalid_argument("cyclic: modulus must be positive");
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Cyclic;
  s->param = k;
  return s;
}

SystemPtr SystemSpec::torus_rot(std::vector<Scalar> alphas) {
  if (alphas.empty()) throw std::invalid_argument("torus_rot: needs at least one coordinate");
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::TorusRot;
  s->alphas = std::move(alphas);
  return s;
}

SystemPtr SystemSpec::skew2(const Scalar& alpha) {
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Skew2;
  s->alphas = {alpha};
  return s;
}

SystemPtr SystemSpec::skew_s(const Scalar& alpha) {
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::SkewS;
  s->alphas = {alpha};
  return s;
}

SystemPtr SystemSpec::chacon() {
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Chacon;
  return s;
}

SystemPtr SystemSpec::product(SystemPtr l, SystemPtr r) {
  if (!l || !r) throw std::invalid_argument("product: null factor");
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Product;
  s->left = std::move(l);
  s->right = std::move(r);
  return s;
}

SystemPtr SystemSpec::power(SystemPtr base, i64 k) {
  if (!base) throw std::invalid_argument("power: null base");
  if (k == 0) throw std::invalid_argument("power: exponent must be nonzero");
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Power;
  s->param = k;
  s->left = std::move(base);
  return s;
}

SystemPtr SystemSpec::diagonal(SystemPtr base, i64 d) {
  if (!base) throw std::invalid_argument("diagonal: null base");
  if (d < 1) throw std::invalid_argument("diagonal: d must be positive");
  auto s = std::make_shared<SystemSpec>();
  s->kind = Kind::Diagonal;
  s->param = d;
  s->left = std::move(base);
  return s;
}

namespace {

bool spec_has_fixed(const SystemSpec& s) {
  for (const auto& a : s.alphas)
    if (a.is_fixed()) return true;
  if (s.left && spec_has_fixed(*s.left)) return true;
  if (s.right && spec_has_fixed(*s.right)) return true;
  return false;
}

void flatten_into(const SystemSpec& s, i64 step, Scalar::Mode mode, FlatSystem& out) {
  auto coord = [&](const Scalar& a) {
    return mode == Scalar::Mode::Fixed ? a.to_fixed() : a;
  };
  switch (s.kind) {
    case SystemSpec::Kind::Cyclic: {
      Unit u{Unit::Kind::CyclicRot, Scalar(), s.param, step, out.atom_count};
      out.units.push_back(u);
      out.atom_count += 1;
      break;
    }
    case SystemSpec::Kind::TorusRot:
      for (const auto& a : s.alphas) {
        Unit u{Unit::Kind::Circle, coord(a), 0, step, out.atom_count};
        out.units.push_back(u);
        out.atom_count += 1;
      }
      break;
    case SystemSpec::Kind::Skew2:
    case SystemSpec::Kind::SkewS: {
      Unit u{s.kind == SystemSpec::Kind::Skew2 ? Unit::Kind::Skew2 : Unit::Kind::SkewS,
             coord(s.alphas[0]), 0, step, out.atom_count};
      out.units.push_back(u);
      out.atom_count += 2;
      break;
    }
    case SystemSpec::Kind::Chacon: {
      Unit u{Unit::Kind::Chacon, Scalar(), 0, step, out.atom_count};
      out.units.push_back(u);
      out.atom_count += 1;
      break;
    }
    case SystemSpec::Kind::Product:
      flatten_into(*s.left, step, mode, out);
      flatten_into(*s.right, step, mode, out);
      break;
    case SystemSpec::Kind::Power:
      flatten_into(*s.left, step * s.param, mode, out);
      break;
    case SystemSpec::Kind::Diagonal:
      for (i64 i = 0; i <= s.param; ++i) flatten_into(*s.left, step * i, mode, out);
      break;
  }
}

}  // namespace

FlatSystem flatten(const SystemPtr& spec) {
  if (!spec) throw std::invalid_argument("flatten: null system");
  FlatSystem fs;
  fs.spec = spec;
  fs.mode = spec_has_fixed(*spec) ? Scalar::Mode::Fixed : Scalar::Mode::Rational;
  flatten_into(*spec, 1, fs.mode, fs);
  fs.rotation_type = true;
  for (const auto& u : fs.units) {
    if (u.kind == Unit::Kind::Chacon) fs.has_chacon = true;
    if (u.kind != Unit::Kind::Circle && u.kind != Unit::Kind::CyclicRot)
      fs.rotation_type = false;
  }
  return fs;
}

Point make_torus_point(const FlatSystem& fs, std::vector<Scalar> coords) {
  if (coords.size() != fs.atom_count)
    throw std::invalid_argument("make_torus_point: coordinate count mismatch");
  Point p;
  for (auto& c : coords)
    p.atoms.emplace_back(fs.mode == Scalar::Mode::Fixed ? c.to_fixed() : c);
  return p;
}

void validate_point(const FlatSystem& fs, const Point& x) {
  if (x.atoms.size() != fs.atom_count)
    throw std::invalid_argument("point has " + std::to_string(x.atoms.size()) +
                                " coordinates, system expects " + std::to_string(fs.atom_count));
  for (const auto& u : fs.units) {
    switch (u.kind) {
      case Unit::Kind::Circle:
        if (!std::holds_alternative<Scalar>(x.atoms[u.atom_index]))
          throw std::invalid_argument("point: circle coordinate must be a scalar");
        break;
      case Unit::Kind::Skew2:
      case Unit::Kind::SkewS:
        if (!std::holds_alternative<Scalar>(x.atoms[u.atom_index]) ||
            !std::holds_alternative<Scalar>(x.atoms[u.atom_index + 1]))
          throw std::invalid_argument("point: skew coordinates must be scalars");
        break;
      case Unit::Kind::CyclicRot: {
        if (!std::holds_alternative<i64>(x.atoms[u.atom_index]))
          throw std::invalid_argument("point: cyclic coordinate must be an integer");
        i64 r = std::get<i64>(x.atoms[u.atom_index]);
        if (r < 0 || r >= u.modulus)
          throw std::invalid_argument("point: residue " + std::to_string(r) +
                                      " outside [0, " + std::to_string(u.modulus) + ")");
        break;
      }
      case Unit::Kind::Chacon:
        if (!std::holds_alternative<i64>(x.atoms[u.atom_index]) ||
            std::get<i64>(x.atoms[u.atom_index]) < 0)
          throw std::invalid_argument("point: word index must be a nonnegative integer");
        break;
    }
  }
}

ArcSpec ArcSpec::between(const Scalar& a, const Scalar& b) {
  if (a == b) throw std::invalid_argument("arc: endpoints must differ (open, nondegenerate)");
  ArcSpec arc;
  arc.full = false;
  arc.start = a;
  arc.length = b - a;
  return arc;
}

void validate_region(const FlatSystem& fs, const Region& r) {
  if (r.units.size() != fs.units.size())
    throw std::invalid_argument("region has " + std::to_string(r.units.size()) +
                                " components, system has " + std::to_string(fs.units.size()));
  for (size_t i = 0; i < fs.units.size(); ++i) {
    const Unit& u = fs.units[i];
    const RegionUnit& ru = r.units[i];
    switch (u.kind) {
      case Unit::Kind::Circle:
        if (ru.arcs.size() != 1)
          throw std::invalid_argument("region: circle coordinate needs exactly one arc");
        break;
      case Unit::Kind::Skew2:
      case Unit::Kind::SkewS:
        if (ru.arcs.size() != 2)
          throw std::invalid_argument("region: skew coordinate needs exactly two arcs");
        break;
      case Unit::Kind::CyclicRot:
        if (ru.residues.size() != (size_t)u.modulus)
          throw std::invalid_argument("region: residue vector must have modulus entries");
        break;
      case Unit::Kind::Chacon: {
        if (ru.cylinders.empty())
          throw std::invalid_argument("region: cylinder set must be nonempty");
        for (const auto& w : ru.cylinders) {
          if (w.empty()) throw std::invalid_argument("region: empty cylinder word");
          for (char c : w)
            if (c != '0' && c != '1')
              throw std::invalid_argument("region: cylinder words are over {0,1}");
          const std::string& ref = chacon_reference(4096);
          if (ref.find(w) == std::string::npos)
            throw std::invalid_argument("region: '" + w + "' is not a factor of the substitution language");
        }
        break;
      }
    }
  }
}

namespace {

struct UnitShift {
  // Closed-form data for applying T^m on one unit.
  Scalar alpha_m;    // alpha * m
  Scalar alpha_b2m;  // alpha * m(m-1)/2        (Skew2)
  Scalar alpha_m2;   // alpha * m^2             (SkewS)
  BigInt m;          // exponent; also reduced forms for coordinate coupling
  bool big = false;
  i64 m_small = 0;
};

UnitShift unit_shift(const Unit& u, const BigInt& n) {
  UnitShift s;
  s.m = n * u.step;
  s.big = true;
  switch (u.kind) {
    case Unit::Kind::Circle:
      s.alpha_m = u.alpha.times(s.m);
      break;
    case Unit::Kind::Skew2:
      s.alpha_m = u.alpha.times(s.m);
      s.alpha_b2m = u.alpha.times(binom2(s.m));
      break;
    case Unit::Kind::SkewS:
      s.alpha_m = u.alpha.times(s.m);
      s.alpha_m2 = u.alpha.times(s.m * s.m);
      break;
    default:
      break;
  }
  return s;
}

UnitShift unit_shift_i64(const Unit& u, i64 n) {
  UnitShift s;
  i128 m = (i128)n * u.step;
  s.big = false;
  s.m_small = (i64)m;  // |n * step| stays far below 2^63 in every caller
  switch (u.kind) {
    case Unit::Kind::Circle:
      s.alpha_m = u.alpha.times_i128(m);
      break;
    case Unit::Kind::Skew2:
      s.alpha_m = u.alpha.times_i128(m);
      s.alpha_b2m = u.alpha.times_i128(m * (m - 1) / 2);
      break;
    case Unit::Kind::SkewS:
      s.alpha_m = u.alpha.times_i128(m);
      s.alpha_m2 = u.alpha.times_i128(m * m);
      break;
    default:
      break;
  }
  return s;
}

void apply_unit(const Unit& u, const UnitShift& s, const Point& x, Point& out) {
  size_t a = u.atom_index;
  switch (u.kind) {
    case Unit::Kind::Circle:
      out.atoms[a] = x.scalar_at(a) + s.alpha_m;
      break;
    case Unit::Kind::CyclicRot: {
      i64 m = s.big ? mpz_class(s.m % u.modulus).get_si() : s.m_small % u.modulus;
      i64 r = (x.int_at(a) + m) % u.modulus;
      if (r < 0) r += u.modulus;
      out.atoms[a] = r;
      break;
    }
    case Unit::Kind::Skew2: {
      Scalar px = x.scalar_at(a);
      Scalar py = x.scalar_at(a + 1);
      Scalar mx = s.big ? px.times(s.m) : px.times_i128(s.m_small);
      out.atoms[a] = px + s.alpha_m;
      out.atoms[a + 1] = py + mx + s.alpha_b2m;
      break;
    }
    case Unit::Kind::SkewS: {
      Scalar px = x.scalar_at(a);
      Scalar py = x.scalar_at(a + 1);
      Scalar mx2 = s.big ? px.times(2 * s.m) : px.times_i128(2 * (i128)s.m_small);
      out.atoms[a] = px + s.alpha_m;
      out.atoms[a + 1] = py + mx2 + s.alpha_m2;
      break;
    }
    case Unit::Kind::Chacon: {
      i64 m = s.big ? (s.m.fits_slong_p()
                           ? s.m.get_si()
                           : throw std::invalid_argument("chacon: shift exceeds any generated word"))
                    : s.m_small;
      i64 idx = x.int_at(a) + m;
      if (idx < 0 || (size_t)idx >= kChaconWordCap)
        throw std::invalid_argument(
            "chacon: orbit index " + std::to_string(idx) +
            " leaves the generated word; a longer substitution word is required "
            "but the length bound is 1e8");
      out.atoms[a] = idx;
      break;
    }
  }
}

}  // namespace

Point orbit_eval(const FlatSystem& fs, const Point& x, i64 n) {
  validate_point(fs, x);
  Point out = x;
  for (const auto& u : fs.units) apply_unit(u, unit_shift_i64(u, n), x, out);
  return out;
}

void orbit_eval_into(const FlatSystem& fs, const Point& x, i64 n, Point& out) {
  if (&out != &x) out.atoms = x.atoms;
  for (const auto& u : fs.units) apply_unit(u, unit_shift_i64(u, n), out, out);
}

Point orbit_eval_big(const FlatSystem& fs, const Point& x, const BigInt& n) {
  validate_point(fs, x);
  Point out = x;
  for (const auto& u : fs.units) apply_unit(u, unit_shift(u, n), x, out);
  return out;
}

namespace {

// Open-arc membership with fixed-mode guard flags.
void arc_contains(const ArcSpec& arc, const Scalar& x, bool& inside, i64& ambiguous) {
  if (arc.full) {
    inside = true;
    return;
  }
  Scalar t = x - arc.start;
  inside = !t.is_zero() && t.less(arc.length);
  Scalar zero = Scalar::zero(t.mode());
  if (Scalar::near(t, zero) || Scalar::near(t, arc.length)) ++ambiguous;
}

}  // namespace

ContainResult region_contains(const FlatSystem& fs, const Region& r, const Point& x) {
  validate_point(fs, x);
  validate_region(fs, r);
  ContainResult res;
  res.inside = true;
  for (size_t i = 0; i < fs.units.size(); ++i) {
    const Unit& u = fs.units[i];
    const RegionUnit& ru = r.units[i];
    switch (u.kind) {
      case Unit::Kind::Circle: {
        bool in = false;
        arc_contains(ru.arcs[0], x.scalar_at(u.atom_index), in, res.ambiguous);
        res.inside = res.inside && in;
        break;
      }
      case Unit::Kind::Skew2:
      case Unit::Kind::SkewS: {
        bool in0 = false, in1 = false;
        arc_contains(ru.arcs[0], x.scalar_at(u.atom_index), in0, res.ambiguous);
        arc_contains(ru.arcs[1], x.scalar_at(u.atom_index + 1), in1, res.ambiguous);
        res.inside = res.inside && in0 && in1;
        break;
      }
      case Unit::Kind::CyclicRot:
        res.inside = res.inside && ru.residues[(size_t)x.int_at(u.atom_index)] != 0;
        break;
      case Unit::Kind::Chacon: {
        size_t idx = (size_t)x.int_at(u.atom_index);
        size_t longest = 0;
        for (const auto& w : ru.cylinders) longest = std::max(longest, w.size());
        const std::string& ref = chacon_reference(idx + longest);
        bool any = false;
        for (const auto& w : ru.cylinders)
          if (ref.compare(idx, w.size(), w) == 0) {
            any = true;
            break;
          }
        res.inside = res.inside && any;
        break;
      }
    }
  }
  return res;
}

Region preimage_region(const FlatSystem& fs, const Region& r, const BigInt& shift) {
  validate_region(fs, r);
  if (!fs.rotation_type)
    throw std::invalid_argument(
        "preimage_region: exact preimages exist only for rotation-type systems; "
        "use sampling for skew products and subshifts");
  Region out = r;
  for (size_t i = 0; i < fs.units.size(); ++i) {
    const Unit& u = fs.units[i];
    if (u.kind == Unit::Kind::Circle) {
      ArcSpec& arc = out.units[i].arcs[0];
      if (!arc.full) arc.start = arc.start - u.alpha.times(shift * u.step);
    } else {
      i64 m = mpz_class(shift * u.step % u.modulus).get_si();
      std::vector<std::uint8_t> shifted((size_t)u.modulus, 0);
      for (i64 q = 0; q < u.modulus; ++q) {
        i64 img = (q + m) % u.modulus;
        if (img < 0) img += u.modulus;
        shifted[(size_t)q] = r.units[i].residues[(size_t)img];
      }
      out.units[i].residues = std::move(shifted);
    }
  }
  return out;
}

std::string chacon_word(int level) {
  if (level < 0) throw std::invalid_argument("chacon_word: negative level");
  if (level > kChaconLevelCap)
    throw std::invalid_argument("chacon_word: level " + std::to_string(level) +
                                " exceeds the cap of 20");
  if (chacon_length(level) > kChaconWordCap)
    throw std::invalid_argument("chacon_word: level " + std::to_string(level) +
                                " would exceed the 1e8 word-length bound");
  std::string w = "0";
  for (int i = 0; i < level; ++i) {
    std::string next;
    next.reserve(w.size() * 4);
    for (char c : w) next += (c == '0') ? "0010" : "1";
    w = std::move(next);
  }
  return w;
}

const std::string& chacon_reference(size_t min_len) {
  static std::mutex mu;
  static std::map<int, std::string> cache;
  std::lock_guard<std::mutex> lock(mu);
  for (int level = 0; level <= kChaconLevelCap; ++level) {
    if (chacon_length(level) < min_len) continue;
    if (chacon_length(level) > kChaconWordCap) break;
    auto it = cache.find(level);
    if (it == cache.end()) it = cache.emplace(level, chacon_word(level)).first;
    return it->second;
  }
  throw std::invalid_argument(
      "chacon: no substitution word of length >= " + std::to_string(min_len) +
      " fits the 1e8 word-length bound");
}

}  // namespace recur
