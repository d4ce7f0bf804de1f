#include "recur/systems.hpp"

#include <doctest.h>

#include <random>

using namespace recur;

namespace {

Point pt(const FlatSystem& fs, const std::string& text) { return parse_point(text, fs); }

}  // namespace

TEST_CASE("orbit closed forms on the worked examples") {
  // skew product: T^7 (0,0) at alpha = 1/5
  FlatSystem skew = flatten(SystemSpec::skew2(Scalar::rational(1, 5)));
  Point p = orbit_eval(skew, pt(skew, "pt(0, 0)"), 7);
  CHECK(p.scalar_at(0) == Scalar::rational(2, 5));
  CHECK(p.scalar_at(1) == Scalar::rational(1, 5));

  // auxiliary system: S^n(0,0) = (n a, n^2 a)
  Scalar a = Scalar::sqrt2m1();
  FlatSystem aux = flatten(SystemSpec::skew_s(a));
  Point q = orbit_eval(aux, pt(aux, "pt(0, 0)"), 3);
  CHECK(q.scalar_at(0) == a.times_i64(3));
  CHECK(q.scalar_at(1) == a.times_i64(9));

  FlatSystem cyc = flatten(SystemSpec::cyclic(4));
  CHECK(orbit_eval(cyc, pt(cyc, "pt(1)"), 6).int_at(0) == 3);
  CHECK(orbit_eval(cyc, pt(cyc, "pt(1)"), -3).int_at(0) == 2);
}

TEST_CASE("group law and inverses") {
  std::mt19937_64 rng(5);
  for (const SystemPtr& sys :
       {SystemSpec::skew2(Scalar::sqrt2m1()), SystemSpec::skew_s(Scalar::rational(2, 7)),
        SystemSpec::product(SystemSpec::cyclic(5), SystemSpec::torus_rot({Scalar::rational(1, 3)})),
        SystemSpec::diagonal(SystemSpec::skew2(Scalar::rational(1, 9)), 2)}) {
    FlatSystem fs = flatten(sys);
    Point x;
    x.atoms.resize(fs.atom_count);
    for (const Unit& u : fs.units)
      for (int j = 0; j < u.arity(); ++j) {
        if (u.kind == Unit::Kind::CyclicRot) x.atoms[u.atom_index] = (i64)(rng() % u.modulus);
        else if (u.kind == Unit::Kind::Chacon) x.atoms[u.atom_index] = (i64)(rng() % 100);
        else {
          Scalar v = Scalar::rational((i64)(rng() % 63), 63);
          x.atoms[u.atom_index + j] = fs.mode == Scalar::Mode::Fixed ? v.to_fixed() : v;
        }
      }
    for (int t = 0; t < 20; ++t) {
      i64 m = (i64)(rng() % 200) - 100, n = (i64)(rng() % 200) - 100;
      Point lhs = orbit_eval(fs, x, m + n);
      Point rhs = orbit_eval(fs, orbit_eval(fs, x, m), n);
      CHECK(lhs.atoms == rhs.atoms);
      Point back = orbit_eval(fs, orbit_eval(fs, x, m), -m);
      CHECK(back.atoms == x.atoms);
    }
  }
}

TEST_CASE("power and diagonal consistency") {
  SystemPtr base = SystemSpec::skew2(Scalar::sqrt2m1());
  FlatSystem fs_base = flatten(base);
  FlatSystem fs_pow = flatten(SystemSpec::power(base, 3));
  FlatSystem fs_diag = flatten(SystemSpec::diagonal(base, 2));

  Point x = pt(fs_base, "pt(1/7, 2/7)");
  Point xp = pt(fs_pow, "pt(1/7, 2/7)");
  Point xd = pt(fs_diag, "pt(1/7, 2/7, 1/7, 2/7, 1/7, 2/7)");

  for (i64 n : {-5, -1, 0, 1, 2, 9}) {
    Point a = orbit_eval(fs_pow, xp, n);
    Point b = orbit_eval(fs_base, x, 3 * n);
    CHECK(a.atoms == b.atoms);

    Point d = orbit_eval(fs_diag, xd, n);
    for (int i = 0; i <= 2; ++i) {
      Point c = orbit_eval(fs_base, x, i * n);
      CHECK(d.atoms[2 * i] == c.atoms[0]);
      CHECK(d.atoms[2 * i + 1] == c.atoms[1]);
    }
  }

  // negative powers are invertible systems
  FlatSystem fs_inv = flatten(SystemSpec::power(base, -1));
  Point y = orbit_eval(fs_inv, x, 4);
  CHECK(y.atoms == orbit_eval(fs_base, x, -4).atoms);
}

TEST_CASE("skew inverse matches the algebraic closed form") {
  // T^-1(x, y) = (x - a, y - x + a) for the (x, y) -> (x + a, y + x) product
  Scalar a = Scalar::rational(3, 11);
  FlatSystem fs = flatten(SystemSpec::skew2(a));
  Point p = pt(fs, "pt(5/11, 2/11)");
  Point inv = orbit_eval(fs, p, -1);
  CHECK(inv.scalar_at(0) == p.scalar_at(0) - a);
  CHECK(inv.scalar_at(1) == p.scalar_at(1) - p.scalar_at(0) + a);
  CHECK(orbit_eval(fs, inv, 1).atoms == p.atoms);
}

TEST_CASE("chacon words") {
  CHECK(chacon_word(0) == "0");
  CHECK(chacon_word(1) == "0010");
  CHECK(chacon_word(2) == "0010001010010");
  for (int level = 0; level < 8; ++level) {
    std::string w = chacon_word(level), next = chacon_word(level + 1);
    CHECK(next.substr(0, w.size()) == w);  // prefix fixed point
  }
  CHECK_THROWS_AS(chacon_word(17), std::invalid_argument);  // 1e8 length bound
  CHECK_THROWS_AS(chacon_word(21), std::invalid_argument);  // level cap
  CHECK(chacon_reference(1000).size() >= 1000);
}

TEST_CASE("chacon orbit bounds") {
  FlatSystem fs = flatten(SystemSpec::chacon());
  Point x = pt(fs, "pt(idx:5)");
  CHECK(orbit_eval(fs, x, 7).int_at(0) == 12);
  CHECK_THROWS_AS(orbit_eval(fs, x, -6), std::invalid_argument);
  CHECK_THROWS_AS(orbit_eval(fs, x, 200'000'000), std::invalid_argument);
}

TEST_CASE("region membership") {
  FlatSystem fs = flatten(SystemSpec::torus_rot({Scalar::rational(0, 1)}));
  Region arc = parse_region("arc(0, 0.3)", fs);
  auto inside = [&](const char* coord) {
    return region_contains(fs, arc, pt(fs, std::string("pt(") + coord + ")")).inside;
  };
  CHECK(inside("1/4"));
  CHECK(!inside("0.3"));   // open at the end
  CHECK(!inside("0"));     // open at the start
  CHECK(!inside("1/2"));

  Region wrap = parse_region("arc(0.9, 0.2)", fs);
  CHECK(region_contains(fs, wrap, pt(fs, "pt(0.95)")).inside);
  CHECK(region_contains(fs, wrap, pt(fs, "pt(1/10)")).inside);
  CHECK(!region_contains(fs, wrap, pt(fs, "pt(1/2)")).inside);

  Region full = parse_region("full", fs);
  CHECK(region_contains(fs, full, pt(fs, "pt(17/19)")).inside);
}

TEST_CASE("region membership flags fixed-mode boundary grazes") {
  FlatSystem fs = flatten(SystemSpec::torus_rot({Scalar::sqrt2m1()}));
  Region arc = parse_region("arc(0, 1/4)", fs);
  Point barely;
  barely.atoms = {Scalar::fixed_bits(5)};  // 5 * 2^-128 from the open endpoint
  ContainResult c = region_contains(fs, arc, barely);
  CHECK(c.inside);
  CHECK(c.ambiguous > 0);
  Point comfy;
  comfy.atoms = {Scalar::rational(1, 8).to_fixed()};
  CHECK(region_contains(fs, arc, comfy).ambiguous == 0);
}

TEST_CASE("cyclic and subshift regions") {
  FlatSystem cyc = flatten(SystemSpec::cyclic(6));
  Region r = parse_region("residues(0, 2)", cyc);
  CHECK(region_contains(cyc, r, pt(cyc, "pt(2)")).inside);
  CHECK(!region_contains(cyc, r, pt(cyc, "pt(3)")).inside);

  FlatSystem ch = flatten(SystemSpec::chacon());
  Region cylr = parse_region("cyl(0010)", ch);
  CHECK(region_contains(ch, cylr, pt(ch, "pt(idx:0)")).inside);
  CHECK(!region_contains(ch, cylr, pt(ch, "pt(idx:1)")).inside);
  CHECK_THROWS_AS(parse_region("cyl(1111)", ch), std::invalid_argument);  // not a factor
}

TEST_CASE("preimages of rotation regions") {
  FlatSystem fs = flatten(SystemSpec::torus_rot({Scalar::rational(1, 4)}));
  Region arc = parse_region("arc(0, 0.3)", fs);
  Region moved = preimage_region(fs, arc, 1);
  CHECK(moved.units[0].arcs[0].start == Scalar::rational(3, 4));
  CHECK(moved.units[0].arcs[0].length == Scalar::rational(3, 10));
  CHECK(print_region(moved, fs) == "arc(3/4, 1/20)");

  CHECK(print_region(preimage_region(fs, arc, 0), fs) == print_region(arc, fs));
  FlatSystem still = flatten(SystemSpec::torus_rot({Scalar::rational(0, 1)}));
  Region same = preimage_region(still, parse_region("arc(0, 0.3)", still), 5);
  CHECK(print_region(same, still) == "arc(0/1, 3/10)");

  FlatSystem skew = flatten(SystemSpec::skew2(Scalar::rational(1, 4)));
  CHECK_THROWS_AS(preimage_region(skew, parse_region("box(arc(0,1/4), arc(0,1/4))", skew), 1),
                  std::invalid_argument);

  // semantic check: x in T^-m U iff T^m x in U
  FlatSystem mix = flatten(SystemSpec::product(SystemSpec::cyclic(5),
                                               SystemSpec::torus_rot({Scalar::rational(2, 7)})));
  Region u = parse_region("prod(residues(1, 3), arc(1/7, 5/7))", mix);
  Region pre = preimage_region(mix, u, 3);
  for (i64 r = 0; r < 5; ++r)
    for (i64 num = 0; num < 14; ++num) {
      Point x;
      x.atoms = {r, Scalar::rational(num, 14)};
      bool lhs = region_contains(mix, pre, x).inside;
      bool rhs = region_contains(mix, u, orbit_eval(mix, x, 3)).inside;
      CHECK(lhs == rhs);
    }
}

TEST_CASE("system grammar round-trips") {
  for (const char* text :
       {"cyclic(6)", "torus(1/4)", "torus(fixed:6a09e667f3bcc908b2fb1366ea957d3e, 1/3)",
        "skew2(fixed:6a09e667f3bcc908b2fb1366ea957d3e)", "skews(1/5)", "chacon",
        "product(cyclic(2), torus(1/3))", "power(skew2(1/5), 2)",
        "diagonal(skew2(fixed:6a09e667f3bcc908b2fb1366ea957d3e), 2)"}) {
    SystemPtr s = parse_system(text);
    CHECK(print_system(s) == text);
    CHECK(print_system(parse_system(print_system(s))) == text);
  }
  CHECK_THROWS_AS(parse_system("torus()"), std::invalid_argument);
  CHECK_THROWS_AS(parse_system("power(cyclic(2), 0)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_system("frobnicate(1)"), std::invalid_argument);
}

TEST_CASE("region and point grammar round-trips") {
  FlatSystem fs = flatten(parse_system("product(cyclic(4), skew2(1/5))"));
  Region r = parse_region("prod(residues(0, 2), box(arc(0, 1/4), arc(1/2, 9/10)))", fs);
  CHECK(print_region(r, fs) == "prod(residues(0, 2), box(arc(0/1, 1/4), arc(1/2, 9/10)))");
  Point p = parse_point("pt(3, 1/5, 2/5)", fs);
  CHECK(print_point(p, fs) == "pt(3, 1/5, 2/5)");
  CHECK(parse_point(print_point(p, fs), fs).atoms == p.atoms);
  CHECK_THROWS_AS(parse_point("pt(9, 1/5, 2/5)", fs), std::invalid_argument);
  CHECK_THROWS_AS(parse_region("residues(0)", fs), std::invalid_argument);

  // diagonal systems take one region component per copy
  FlatSystem diag = flatten(parse_system("diagonal(torus(1/3), 2)"));
  Region rd = parse_region("prod(arc(0, 1/3), arc(0, 1/3), full)", diag);
  CHECK(print_region(rd, diag) == "prod(arc(0/1, 1/3), arc(0/1, 1/3), full)");
}

TEST_CASE("mode promotion converts rational inputs to fixed") {
  FlatSystem fs = flatten(parse_system("torus(fixed:sqrt2m1, 1/3)"));
  CHECK(fs.mode == Scalar::Mode::Fixed);
  Point p = parse_point("pt(1/4, 1/4)", fs);
  CHECK(p.scalar_at(0).is_fixed());
  Region r = parse_region("box(arc(0, 1/4), full)", fs);
  CHECK(r.units[0].arcs[0].start.is_fixed());
}
