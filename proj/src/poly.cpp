#include "recur/poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace recur {

IntPoly::IntPoly(std::vector<BigInt> coeffs_constant_first)
    : coeffs_(std::move(coeffs_constant_first)) {
  trim();
}

void IntPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::monomial(const BigInt& c, int k) {
  if (k < 0) throw std::invalid_argument("IntPoly::monomial: negative exponent");
  std::vector<BigInt> v(k + 1, BigInt(0));
  v[k] = c;
  return IntPoly(std::move(v));
}

BigInt IntPoly::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
  std::vector<BigInt> v(std::max(coeffs_.size(), o.coeffs_.size()), BigInt(0));
  for (size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
  for (size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
  return IntPoly(std::move(v));
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + o.scaled(-1); }

IntPoly IntPoly::operator*(const IntPoly& o) const {
  if (is_zero() || o.is_zero()) return zero();
  std::vector<BigInt> v(coeffs_.size() + o.coeffs_.size() - 1, BigInt(0));
  for (size_t i = 0; i < coeffs_.size(); ++i)
    for (size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  return IntPoly(std::move(v));
}

IntPoly IntPoly::scaled(const BigInt& c) const {
  std::vector<BigInt> v = coeffs_;
  for (auto& x : v) x *= c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::shift_root(const BigInt& a) const {
  // Horner in the polynomial ring: p(x + a), then drop the constant term p(a).
  IntPoly shifted = zero();
  IntPoly lin({a, BigInt(1)});  // x + a
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    shifted = shifted * lin + constant(*it);
  return shifted - constant(shifted.constant_term());
}

IntPoly IntPoly::compose_ap(const BigInt& k, const BigInt& j) const {
  if (k == 0) throw std::invalid_argument("IntPoly::compose_ap: step k must be nonzero");
  IntPoly acc = zero();
  IntPoly lin({j, k});  // k*x + j
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * lin + constant(*it);
  return acc;
}

std::string IntPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream out;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const BigInt& c = coeffs_[k];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (first) {
      if (c < 0) out << "-";
      first = false;
    } else {
      out << (c < 0 ? "-" : "+");
    }
    bool unit = mag == 1;
    if (k == 0) {
      out << mag.get_str();
    } else {
      if (!unit) out << mag.get_str() << "*";
      out << "n";
      if (k > 1) out << "^" << k;
    }
  }
  return out.str();
}

IntPoly IntPoly::parse(const std::string& text) {
  size_t i = 0;
  auto skip_ws = [&] { while (i < text.size() && std::isspace((unsigned char)text[i])) ++i; };
  std::vector<BigInt> coeffs;
  auto add_term = [&](const BigInt& c, int k) {
    if ((int)coeffs.size() <= k) coeffs.resize(k + 1, BigInt(0));
    coeffs[k] += c;
  };
  skip_ws();
  if (i >= text.size()) throw std::invalid_argument("IntPoly::parse: empty input");
  while (true) {
    skip_ws();
    if (i >= text.size()) break;
    int sign = 1;
    if (text[i] == '+' || text[i] == '-') {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip_ws();
    }
    BigInt coef = 1;
    bool saw_digits = false;
    if (i < text.size() && std::isdigit((unsigned char)text[i])) {
      size_t start = i;
      while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
      coef = BigInt(text.substr(start, i - start));
      saw_digits = true;
      skip_ws();
      if (i < text.size() && text[i] == '*') { ++i; skip_ws(); }
    }
    int k = 0;
    if (i < text.size() && (text[i] == 'n' || text[i] == 'x')) {
      ++i;
      k = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        size_t start = i;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) ++i;
        if (start == i) throw std::invalid_argument("IntPoly::parse: missing exponent in '" + text + "'");
        k = std::stoi(text.substr(start, i - start));
      }
    } else if (!saw_digits) {
      throw std::invalid_argument("IntPoly::parse: expected term at position " +
                                  std::to_string(i) + " in '" + text + "'");
    }
    add_term(sign * coef, k);
  }
  return IntPoly(std::move(coeffs));
}

DistinctnessResult is_essentially_distinct(const PolyTuple& t) {
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j)
      if ((t[i] - t[j]).is_constant())
        return {false, {{i, j}},
                "difference of entries " + std::to_string(i + 1) + " and " +
                    std::to_string(j + 1) + " is constant"};
  return {};
}

DistinctnessResult in_pol_d(const PolyTuple& t) {
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i].constant_term() != 0)
      return {false, {{i, i}}, "entry " + std::to_string(i + 1) + " has nonzero constant term"};
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j])
        return {false, {{i, j}},
                "entries " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                    " are equal"};
  return {};
}

ChangePolyResult change_poly(const IntPoly& p, const BigInt& M, const BigInt& a,
                             const BigInt& b) {
  if (p.constant_term() != 0)
    throw std::invalid_argument(
        "change_poly: polynomial must have zero constant term (got " +
        p.constant_term().get_str() + ")");
  if (M < 1) throw std::invalid_argument("change_poly: M must be a positive integer");
  if (a == 0) throw std::invalid_argument("change_poly: a must be nonzero");
  std::vector<BigInt> tilde(p.coeffs().size(), BigInt(0));
  BigInt mpow = 1;  // M^(l-1)
  for (size_t l = 1; l < p.coeffs().size(); ++l) {
    tilde[l] = p.coeff(l) * mpow;
    mpow *= M;
  }
  IntPoly p_tilde(std::move(tilde));
  return {p_tilde.compose_ap(a, b), p_tilde};
}

}  // namespace recur
