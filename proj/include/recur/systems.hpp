// Concrete dynamical systems with closed-form orbits.
//
// A SystemSpec is a constructor tree: cyclic rotations, torus rotations,
// the two torus skew products T(x,y) = (x+a, y+x) and S(x,y) = (x+a, y+2x+a),
// the Chacon substitution subshift, and product / power / diagonal
// combinations.  For evaluation the tree is flattened into units, each
// carrying the effective exponent multiplier ("step") induced by powers and
// diagonal coordinates, so orbit evaluation is a closed form in n*step per
// unit and never iterates.
//
// Systems containing any Fixed scalar evaluate entirely in Fixed mode;
// rational inputs are truncated at 2^-128 when promoted.

#pragma once

#include "recur/poly.hpp"
#include "recur/scalar.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace recur {

struct SystemSpec;
using SystemPtr = std::shared_ptr<const SystemSpec>;

struct SystemSpec {
  enum class Kind { Cyclic, TorusRot, Skew2, SkewS, Chacon, Product, Power, Diagonal };
  Kind kind;
  i64 param = 0;               // Cyclic modulus, Power exponent, Diagonal d
  std::vector<Scalar> alphas;  // TorusRot coordinates; Skew2/SkewS use alphas[0]
  SystemPtr left, right;

  static SystemPtr cyclic(i64 k);
  static SystemPtr torus_rot(std::vector<Scalar> alphas);
  static SystemPtr skew2(const Scalar& alpha);
  static SystemPtr skew_s(const Scalar& alpha);
  static SystemPtr chacon();
  static SystemPtr product(SystemPtr l, SystemPtr r);
  static SystemPtr power(SystemPtr base, i64 k);   // k nonzero, may be negative
  static SystemPtr diagonal(SystemPtr base, i64 d);  // I x T x ... x T^d
};

struct Unit {
  enum class Kind { Circle, CyclicRot, Skew2, SkewS, Chacon };
  Kind kind;
  Scalar alpha;        // Circle / Skew2 / SkewS, already in evaluation mode
  i64 modulus = 0;     // CyclicRot
  i64 step = 1;        // effective exponent multiplier (0 allowed on diagonals)
  size_t atom_index = 0;
  int arity() const { return kind == Kind::Skew2 || kind == Kind::SkewS ? 2 : 1; }
};

struct FlatSystem {
  SystemPtr spec;
  std::vector<Unit> units;
  size_t atom_count = 0;
  Scalar::Mode mode = Scalar::Mode::Rational;
  bool rotation_type = false;  // only Circle / CyclicRot units
  bool has_chacon = false;
};

FlatSystem flatten(const SystemPtr& spec);

// One phase-space coordinate: a circle position, a residue, or a word index.
using PointAtom = std::variant<Scalar, i64>;

struct Point {
  std::vector<PointAtom> atoms;
  const Scalar& scalar_at(size_t i) const { return std::get<Scalar>(atoms[i]); }
  i64 int_at(size_t i) const { return std::get<i64>(atoms[i]); }
};

Point make_torus_point(const FlatSystem& fs, std::vector<Scalar> coords);
void validate_point(const FlatSystem& fs, const Point& x);

// Open arc (a, b) counterclockwise, stored as start + positive length < 1.
struct ArcSpec {
  bool full = false;
  Scalar start;
  Scalar length;
  static ArcSpec full_circle() { return ArcSpec{true, {}, {}}; }
  static ArcSpec between(const Scalar& a, const Scalar& b);  // open (a, b), a != b
};

struct RegionUnit {
  std::vector<ArcSpec> arcs;            // Circle: 1 arc, Skew2/SkewS: 2 arcs
  std::vector<std::uint8_t> residues;   // CyclicRot: modulus entries
  std::vector<std::string> cylinders;   // Chacon: nonempty factor words
};

struct Region {
  std::vector<RegionUnit> units;  // aligned with FlatSystem::units
};

void validate_region(const FlatSystem& fs, const Region& r);

struct ContainResult {
  bool inside = false;
  i64 ambiguous = 0;  // Fixed-mode comparisons within 2^-100 of an endpoint
};

Point orbit_eval(const FlatSystem& fs, const Point& x, i64 n);
Point orbit_eval_big(const FlatSystem& fs, const Point& x, const BigInt& n);
// Allocation-free variant; out may alias x.  Skips point validation.
void orbit_eval_into(const FlatSystem& fs, const Point& x, i64 n, Point& out);

ContainResult region_contains(const FlatSystem& fs, const Region& r, const Point& x);

// Exact preimage T^-shift of a region under a rotation-type system: arcs and
// residue sets translate.  Rejected for skew products and subshifts.
Region preimage_region(const FlatSystem& fs, const Region& r, const BigInt& shift);

// Substitution 0 -> 0010, 1 -> 1 applied `level` times to "0".
// level <= 20, word length capped at 1e8 (so levels above 16 are rejected).
std::string chacon_word(int level);

// Shared reference word of the smallest level whose length reaches min_len;
// throws when no allowed level is long enough.
const std::string& chacon_reference(size_t min_len);

// Scenario-file grammars (round-tripping printers/parsers).
SystemPtr parse_system(const std::string& text);
std::string print_system(const SystemPtr& spec);
Region parse_region(const std::string& text, const FlatSystem& fs);
std::string print_region(const Region& r, const FlatSystem& fs);
Point parse_point(const std::string& text, const FlatSystem& fs);
std::string print_point(const Point& p, const FlatSystem& fs);

}  // namespace recur
