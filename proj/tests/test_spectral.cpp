#include "recur/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace recur;

namespace {

// Brute-force subgroup of Q/Z generated by fractions, as a set of residues
// over a common denominator.
std::set<i64> subgroup(const std::vector<Rat64>& gens, i64 denom) {
  std::set<i64> elems{0};
  bool grew = true;
  while (grew) {
    grew = false;
    std::set<i64> next = elems;
    for (i64 e : elems)
      for (const Rat64& g : gens) {
        i64 add = (e + g.num * (denom / g.den)) % denom;
        if (next.insert(add).second) grew = true;
      }
    elems = next;
  }
  return elems;
}

}  // namespace

TEST_CASE("eigen groups of the zoo") {
  EigenGroup c6 = eigen_group(SystemSpec::cyclic(6));
  CHECK(c6.rational_denominator == 6);
  CHECK(c6.irrational_generators.empty());
  CHECK(c6.exactness == EigenGroup::Exactness::Exact);

  EigenGroup prod = eigen_group(SystemSpec::product(SystemSpec::cyclic(2), SystemSpec::cyclic(3)));
  CHECK(prod.rational_denominator == 6);
  // brute force: sums of 1/2 and 1/3 generate all sixths
  CHECK(subgroup({Rat64{1, 2}, Rat64{1, 3}}, 6).size() == 6);

  EigenGroup skew = eigen_group(SystemSpec::skew2(Scalar::sqrt2m1()));
  CHECK(skew.rational_denominator == 1);
  CHECK(skew.irrational_generators.size() == 1);
  CHECK(skew.exactness == EigenGroup::Exactness::Heuristic);
  CHECK(skew.irrational_generators[0] == Scalar::sqrt2m1());

  EigenGroup chacon = eigen_group(SystemSpec::chacon());
  CHECK(chacon.trivial());
  CHECK(chacon.exactness == EigenGroup::Exactness::Exact);

  EigenGroup pow = eigen_group(SystemSpec::power(SystemSpec::cyclic(6), 2));
  CHECK(pow.rational_denominator == 3);  // spectrum scaled by 2

  CHECK_THROWS_AS(eigen_group(SystemSpec::diagonal(SystemSpec::cyclic(2), 1)),
                  std::invalid_argument);

  // rational torus coordinates contribute their reduced denominators
  EigenGroup rot = eigen_group(SystemSpec::torus_rot(
      {Scalar::rational(2, 6), Scalar::rational(3, 4)}));
  CHECK(rot.rational_denominator == 12);
}

TEST_CASE("shared-eigenvalue verdicts") {
  EigenGroup a = eigen_group(SystemSpec::cyclic(6));
  EigenGroup b = eigen_group(SystemSpec::cyclic(4));
  ShareVerdict v = shares_nontrivial_eigenvalue(a, b);
  CHECK(v.kind == ShareVerdict::Kind::Yes);
  CHECK(*v.witness == Scalar::rational(1, 2));
  {
    // brute force over all element pairs of <1/6> and <1/4>
    std::set<i64> s6 = subgroup({Rat64{1, 6}}, 12), s4 = subgroup({Rat64{1, 4}}, 12);
    bool shared = false;
    for (i64 x : s6)
      if (x != 0 && s4.count(x)) shared = true;
    CHECK(shared);
  }

  ShareVerdict no = shares_nontrivial_eigenvalue(eigen_group(SystemSpec::cyclic(2)),
                                                 eigen_group(SystemSpec::cyclic(3)));
  CHECK(no.kind == ShareVerdict::Kind::No);

  EigenGroup g1 = eigen_group(SystemSpec::torus_rot({Scalar::sqrt2m1()}));
  ShareVerdict same = shares_nontrivial_eigenvalue(g1, g1);
  CHECK(same.kind == ShareVerdict::Kind::Yes);
  CHECK(*same.witness == Scalar::sqrt2m1());

  // distinct irrational generators: Unknown, never a silent No
  EigenGroup g2 = eigen_group(SystemSpec::torus_rot({Scalar::fixed_bits(12345)}));
  CHECK(shares_nontrivial_eigenvalue(g1, g2).kind == ShareVerdict::Kind::Unknown);

  // rational-only versus irrational: exact No by the construction tag
  CHECK(shares_nontrivial_eigenvalue(eigen_group(SystemSpec::cyclic(5)), g1).kind ==
        ShareVerdict::Kind::No);
}

TEST_CASE("shared-eigenvalue verdicts are symmetric") {
  std::vector<EigenGroup> groups = {
      eigen_group(SystemSpec::cyclic(6)),
      eigen_group(SystemSpec::cyclic(35)),
      eigen_group(SystemSpec::torus_rot({Scalar::sqrt2m1()})),
      eigen_group(SystemSpec::product(SystemSpec::cyclic(4),
                                      SystemSpec::torus_rot({Scalar::fixed_bits(999)}))),
  };
  for (const auto& x : groups)
    for (const auto& y : groups)
      CHECK(shares_nontrivial_eigenvalue(x, y).kind == shares_nontrivial_eigenvalue(y, x).kind);
}

TEST_CASE("cyclic disjointness matches product orbit size") {
  for (i64 k = 2; k <= 12; ++k)
    for (i64 m = 2; m <= 12; ++m) {
      ShareVerdict v = shares_nontrivial_eigenvalue(eigen_group(SystemSpec::cyclic(k)),
                                                    eigen_group(SystemSpec::cyclic(m)));
      i64 a = 0, b = 0, size = 0;
      do {
        a = (a + 1) % k;
        b = (b + 1) % m;
        ++size;
      } while (a != 0 || b != 0);
      CHECK((v.kind == ShareVerdict::Kind::No) == (size == k * m));
    }
}

TEST_CASE("spectrum divided by k") {
  EigenGroup third = eigen_group(SystemSpec::cyclic(3));
  EigenGroup sixth = spectrum_div_k(third, 2);
  CHECK(sixth.rational_denominator == 6);
  {
    // oracle: over denominators dividing 60, {theta : 2 theta in <1/3>} is
    // exactly the multiples of 1/6
    for (i64 j = 0; j < 60; ++j) {
      bool doubled_in_third = (2 * j) % 60 % 20 == 0;  // 2j/60 in {0, 1/3, 2/3}
      bool in_sixth = j % 10 == 0;
      CHECK(doubled_in_third == in_sixth);
    }
  }

  EigenGroup trivial;
  CHECK(spectrum_div_k(trivial, 5).rational_denominator == 5);

  EigenGroup alpha = eigen_group(SystemSpec::torus_rot({Scalar::sqrt2m1()}));
  EigenGroup halved = spectrum_div_k(alpha, 2);
  CHECK(halved.rational_denominator == 2);
  REQUIRE(halved.irrational_generators.size() == 1);
  CHECK(halved.irrational_generators[0] == Scalar::sqrt2m1().div_int(2));
  // closure sanity: doubling the new generator recovers the original up to
  // the fixed-point quantization step
  u128 twice = halved.irrational_generators[0].fixed_value() * 2;
  u128 orig = Scalar::sqrt2m1().fixed_value();
  CHECK((orig - twice) <= 1);
}

TEST_CASE("dividing twice composes") {
  EigenGroup g = eigen_group(SystemSpec::cyclic(4));
  EigenGroup once = spectrum_div_k(spectrum_div_k(g, 2), 3);
  EigenGroup direct = spectrum_div_k(g, 6);
  CHECK(once.rational_denominator == direct.rational_denominator);
}

TEST_CASE("kronecker correlation values") {
  Scalar alpha = Scalar::rational(1, 8);
  FourierData single = FourierData::from_modes({{1, Rat64{1, 1}, Rat64{0, 1}}});
  for (i64 n = 0; n < 16; ++n) {
    auto g = kronecker_gamma(single, single, alpha, n);
    double th = 2.0 * M_PI * n / 8.0;
    CHECK(std::abs((double)g.real() - std::cos(th)) < 1e-12);
    CHECK(std::abs((double)g.imag() - std::sin(th)) < 1e-12);
  }

  FourierData empty = FourierData::from_modes({});
  CHECK(std::abs(kronecker_gamma(single, empty, alpha, 3)) == 0.0);

  // conjugate pair with real coefficients: gamma(n) = 2 a^2 cos(2 pi alpha n)
  FourierData pair = FourierData::from_modes(
      {{1, Rat64{1, 2}, Rat64{0, 1}}, {-1, Rat64{1, 2}, Rat64{0, 1}}});
  for (i64 n = 0; n < 16; ++n) {
    auto g = kronecker_gamma(pair, pair, alpha, n);
    CHECK(std::abs((double)g.real() - 0.5 * std::cos(2.0 * M_PI * n / 8.0)) < 1e-12);
    CHECK(std::abs((double)g.imag()) < 1e-12);
  }
}

TEST_CASE("correlation magnitude respects the l1 bound") {
  Scalar alpha = Scalar::sqrt2m1();
  FourierData f = FourierData::from_modes({{1, Rat64{1, 2}, Rat64{1, 4}},
                                           {-1, Rat64{1, 2}, Rat64{-1, 4}},
                                           {3, Rat64{1, 8}, Rat64{0, 1}},
                                           {-3, Rat64{1, 8}, Rat64{0, 1}}});
  double bound = f.l1_bound(f) + 1e-9;
  for (i64 n = -500; n <= 500; ++n)
    CHECK(std::abs(kronecker_gamma(f, f, alpha, n)) <= bound);
}

TEST_CASE("superlevel sets") {
  Scalar alpha = Scalar::sqrt2m1();
  FourierData f = FourierData::from_modes({{0, Rat64{1, 4}, Rat64{0, 1}},
                                           {1, Rat64{1, 2}, Rat64{0, 1}},
                                           {-1, Rat64{1, 2}, Rat64{0, 1}}});
  // above the l1 bound the set is empty
  CHECK(d_eps_set(f, f, alpha, Rat64{9, 8}, -100, 100).empty());
  // at eps = 0 the positive mean mode keeps n = 0 in the set
  WindowSet d0 = d_eps_set(f, f, alpha, Rat64{0, 1}, -100, 100);
  CHECK(d0.contains(0));
  // nesting
  WindowSet d2 = d_eps_set(f, f, alpha, Rat64{2, 10}, -100, 100);
  WindowSet d1 = d_eps_set(f, f, alpha, Rat64{1, 10}, -100, 100);
  CHECK(d2.is_subset_of(d1));
  CHECK(d1.is_subset_of(d0));

  FourierData lopsided = FourierData::from_modes({{1, Rat64{1, 2}, Rat64{0, 1}}});
  CHECK_THROWS_AS(d_eps_set(lopsided, lopsided, alpha, Rat64{0, 1}, 0, 10),
                  std::invalid_argument);
}
