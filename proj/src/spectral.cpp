#include "recur/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace recur {

namespace {

i64 lcm_i64(i64 a, i64 b) {
  i64 g = gcd_i64(a, b);
  i128 v = (i128)(a / g) * b;
  if (v > (i64(1) << 62)) throw std::overflow_error("eigen_group: denominator overflow");
  return (i64)v;
}

void add_irrational(std::vector<Scalar>& gens, const Scalar& g) {
  if (g.is_zero()) return;
  for (const auto& have : gens)
    if (have == g) return;
  gens.push_back(g);
}

void eigen_walk(const SystemSpec& s, i64 step, EigenGroup& out) {
  auto rotation_contribution = [&](const Scalar& alpha) {
    if (alpha.is_fixed()) {
      out.exactness = EigenGroup::Exactness::Heuristic;
      add_irrational(out.irrational_generators, alpha.times_i64(step));
    } else {
      Rat64 r = alpha.rational_value();
      // subgroup generated by step * p / q
      i64 num = (i64)(((i128)step % r.den) * r.num % r.den);
      if (num < 0) num += r.den;
      i64 g = gcd_i64(num, r.den);
      out.rational_denominator = lcm_i64(out.rational_denominator, r.den / g);
    }
  };
  switch (s.kind) {
    case SystemSpec::Kind::Cyclic: {
      i64 g = gcd_i64(step % s.param, s.param);
      out.rational_denominator = lcm_i64(out.rational_denominator, s.param / g);
      break;
    }
    case SystemSpec::Kind::TorusRot:
      for (const auto& a : s.alphas) rotation_contribution(a);
      break;
    case SystemSpec::Kind::Skew2:
    case SystemSpec::Kind::SkewS:
      // The continuous eigenfunctions of either skew product are those of its
      // first-coordinate rotation (the maximal equicontinuous factor).
      rotation_contribution(s.alphas[0]);
      break;
    case SystemSpec::Kind::Chacon:
      break;  // weakly mixing: trivial spectrum (literature value, not verified)
    case SystemSpec::Kind::Product:
      eigen_walk(*s.left, step, out);
      eigen_walk(*s.right, step, out);
      break;
    case SystemSpec::Kind::Power: {
      i64 k = s.param < 0 ? -s.param : s.param;
      eigen_walk(*s.left, step * k, out);
      break;
    }
    case SystemSpec::Kind::Diagonal:
      throw std::invalid_argument(
          "eigen_group: diagonal systems are rejected; spectra of diagonal orbit "
          "closures are not computed here");
  }
}

}  // namespace

std::string EigenGroup::str() const {
  std::ostringstream out;
  out << "<";
  bool first = true;
  if (rational_denominator > 1) {
    out << "1/" << rational_denominator;
    first = false;
  }
  for (const auto& g : irrational_generators) {
    out << (first ? "" : ", ") << g.str();
    first = false;
  }
  if (first) out << "0";
  out << ">";
  out << (exactness == Exactness::Exact ? " (exact)" : " (heuristic)");
  return out.str();
}

EigenGroup eigen_group(const SystemPtr& sys) {
  if (!sys) throw std::invalid_argument("eigen_group: null system");
  EigenGroup g;
  eigen_walk(*sys, 1, g);
  return g;
}

ShareVerdict shares_nontrivial_eigenvalue(const EigenGroup& a, const EigenGroup& b) {
  i64 g = gcd_i64(a.rational_denominator, b.rational_denominator);
  if (g > 1)
    return {ShareVerdict::Kind::Yes, Scalar::rational(1, g),
            "shared rational eigenvalue 1/" + std::to_string(g)};
  for (const auto& x : a.irrational_generators)
    for (const auto& y : b.irrational_generators)
      if (x == y)
        return {ShareVerdict::Kind::Yes, x, "identical irrational generator"};
  if (a.irrational_generators.empty() || b.irrational_generators.empty()) {
    // Rational parts are exact and meet only at 0; an irrational-by-
    // construction generator never produces a rational eigenvalue.
    return {ShareVerdict::Kind::No, std::nullopt,
            "rational parts are coprime and irrational generators cannot meet them"};
  }
  return {ShareVerdict::Kind::Unknown, std::nullopt,
          "both spectra list irrational generators with no exact coincidence; "
          "comparison bound " + std::to_string(std::max(a.comparison_bound, b.comparison_bound))};
}

EigenGroup spectrum_div_k(const EigenGroup& g, i64 k) {
  if (k < 1) throw std::invalid_argument("spectrum_div_k: k must be positive");
  EigenGroup out;
  out.exactness = g.exactness;
  out.comparison_bound = g.comparison_bound;
  i128 l = (i128)g.rational_denominator * k;
  if (l > (i64(1) << 62)) throw std::overflow_error("spectrum_div_k: denominator overflow");
  out.rational_denominator = (i64)l;
  for (const auto& gamma : g.irrational_generators)
    add_irrational(out.irrational_generators, gamma.div_int(k));
  return out;
}

FourierData FourierData::from_modes(std::vector<FourierMode> modes) {
  std::sort(modes.begin(), modes.end(),
            [](const FourierMode& a, const FourierMode& b) { return a.freq < b.freq; });
  for (size_t i = 1; i < modes.size(); ++i)
    if (modes[i].freq == modes[i - 1].freq)
      throw std::invalid_argument("FourierData: duplicate frequency " +
                                  std::to_string(modes[i].freq));
  FourierData f;
  f.modes = std::move(modes);
  return f;
}

std::optional<FourierMode> FourierData::mode_at(i64 freq) const {
  for (const auto& m : modes)
    if (m.freq == freq) return m;
  return std::nullopt;
}

double FourierData::l1_bound(const FourierData& other) const {
  double total = 0;
  for (const auto& m : modes) {
    auto o = other.mode_at(m.freq);
    if (!o) continue;
    double ma = std::hypot(m.re.to_double(), m.im.to_double());
    double mb = std::hypot(o->re.to_double(), o->im.to_double());
    total += ma * mb;
  }
  return total;
}

bool FourierData::conjugate_symmetric() const {
  for (const auto& m : modes) {
    auto o = mode_at(-m.freq);
    if (!o) return false;
    if (!(o->re == m.re) || !(o->im == -m.im)) return false;
  }
  return true;
}

std::complex<long double> kronecker_gamma(const FourierData& f1, const FourierData& f2,
                                          const Scalar& alpha, i64 n) {
  constexpr long double kTwoPi = 6.283185307179586476925286766559L;
  std::complex<long double> total = 0;
  for (const auto& m : f1.modes) {
    auto o = f2.mode_at(m.freq);
    if (!o) continue;
    // phase k*n*alpha reduced exactly on the scalar lattice
    Scalar phase = alpha.times_i128((i128)m.freq * n);
    long double th = kTwoPi * phase.to_long_double();
    std::complex<long double> a((long double)m.re.to_double(), (long double)m.im.to_double());
    std::complex<long double> bbar((long double)o->re.to_double(), -(long double)o->im.to_double());
    total += a * bbar * std::complex<long double>(std::cos(th), std::sin(th));
  }
  return total;
}

WindowSet d_eps_set(const FourierData& f1, const FourierData& f2, const Scalar& alpha,
                    const Rat64& eps, i64 lo, i64 hi) {
  if (eps < Rat64{0, 1}) throw std::invalid_argument("d_eps_set: eps must be >= 0");
  if (!f1.conjugate_symmetric() || !f2.conjugate_symmetric())
    throw std::invalid_argument(
        "d_eps_set: mode data must be conjugate-symmetric (real-valued functions)");
  WindowSet out(lo, hi);
  long double cut = (long double)eps.num / (long double)eps.den;
  for (i64 n = lo; n <= hi; ++n) {
    if (kronecker_gamma(f1, f2, alpha, n).real() > cut) out.set(n);
  }
  return out;
}

}  // namespace recur
