// Parsers and printers for the scenario-file grammars: nested constructor
// syntax for systems, arc/residue/cylinder syntax for regions, flat atom
// lists for points.  Printers produce the canonical form the parsers accept.

#include "recur/systems.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace recur {

namespace {

struct Node {
  std::string head;         // empty for leaves
  std::string text;         // leaf payload (trimmed)
  std::vector<Node> args;
  bool is_leaf() const { return head.empty(); }
};

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

Node parse_node(const std::string& raw) {
  std::string s = trim(raw);
  if (s.empty()) throw std::invalid_argument("grammar: empty expression");
  size_t open = s.find('(');
  if (open == std::string::npos) return Node{"", s, {}};
  if (s.back() != ')')
    throw std::invalid_argument("grammar: missing closing parenthesis in '" + s + "'");
  Node n;
  n.head = trim(s.substr(0, open));
  if (n.head.empty())
    throw std::invalid_argument("grammar: missing constructor name in '" + s + "'");
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i <= inner.size(); ++i) {
    if (i == inner.size() || (inner[i] == ',' && depth == 0)) {
      std::string piece = trim(inner.substr(start, i - start));
      if (!piece.empty()) n.args.push_back(parse_node(piece));
      start = i + 1;
    } else if (inner[i] == '(') {
      ++depth;
    } else if (inner[i] == ')') {
      --depth;
      if (depth < 0) throw std::invalid_argument("grammar: unbalanced parentheses in '" + s + "'");
    }
  }
  if (depth != 0) throw std::invalid_argument("grammar: unbalanced parentheses in '" + s + "'");
  return n;
}

i64 leaf_int(const Node& n, const char* what) {
  if (!n.is_leaf()) throw std::invalid_argument(std::string("grammar: expected integer for ") + what);
  return std::stoll(n.text);
}

Scalar leaf_scalar(const Node& n, const char* what) {
  if (!n.is_leaf()) throw std::invalid_argument(std::string("grammar: expected scalar for ") + what);
  return Scalar::parse(n.text);
}

SystemPtr system_from_node(const Node& n) {
  if (n.is_leaf()) {
    if (n.text == "chacon") return SystemSpec::chacon();
    throw std::invalid_argument("system grammar: unknown constructor '" + n.text + "'");
  }
  const std::string& h = n.head;
  if (h == "cyclic") {
    if (n.args.size() != 1) throw std::invalid_argument("cyclic(k) takes one argument");
    return SystemSpec::cyclic(leaf_int(n.args[0], "cyclic modulus"));
  }
  if (h == "torus") {
    std::vector<Scalar> alphas;
    for (const auto& a : n.args) alphas.push_back(leaf_scalar(a, "torus coordinate"));
    return SystemSpec::torus_rot(std::move(alphas));
  }
  if (h == "skew2" || h == "skews") {
    if (n.args.size() != 1) throw std::invalid_argument(h + "(alpha) takes one argument");
    Scalar a = leaf_scalar(n.args[0], "skew rotation number");
    return h == "skew2" ? SystemSpec::skew2(a) : SystemSpec::skew_s(a);
  }
  if (h == "product") {
    if (n.args.size() < 2) throw std::invalid_argument("product needs at least two factors");
    SystemPtr acc = system_from_node(n.args[0]);
    for (size_t i = 1; i < n.args.size(); ++i)
      acc = SystemSpec::product(acc, system_from_node(n.args[i]));
    return acc;
  }
  if (h == "power") {
    if (n.args.size() != 2) throw std::invalid_argument("power(system, k) takes two arguments");
    return SystemSpec::power(system_from_node(n.args[0]), leaf_int(n.args[1], "power exponent"));
  }
  if (h == "diagonal") {
    if (n.args.size() != 2) throw std::invalid_argument("diagonal(system, d) takes two arguments");
    return SystemSpec::diagonal(system_from_node(n.args[0]), leaf_int(n.args[1], "diagonal d"));
  }
  throw std::invalid_argument("system grammar: unknown constructor '" + h + "'");
}

}  // namespace

SystemPtr parse_system(const std::string& text) { return system_from_node(parse_node(text)); }

std::string print_system(const SystemPtr& spec) {
  if (!spec) throw std::invalid_argument("print_system: null system");
  std::ostringstream out;
  switch (spec->kind) {
    case SystemSpec::Kind::Cyclic:
      out << "cyclic(" << spec->param << ")";
      break;
    case SystemSpec::Kind::TorusRot: {
      out << "torus(";
      for (size_t i = 0; i < spec->alphas.size(); ++i)
        out << (i ? ", " : "") << spec->alphas[i].str();
      out << ")";
      break;
    }
    case SystemSpec::Kind::Skew2:
      out << "skew2(" << spec->alphas[0].str() << ")";
      break;
    case SystemSpec::Kind::SkewS:
      out << "skews(" << spec->alphas[0].str() << ")";
      break;
    case SystemSpec::Kind::Chacon:
      out << "chacon";
      break;
    case SystemSpec::Kind::Product:
      out << "product(" << print_system(spec->left) << ", " << print_system(spec->right) << ")";
      break;
    case SystemSpec::Kind::Power:
      out << "power(" << print_system(spec->left) << ", " << spec->param << ")";
      break;
    case SystemSpec::Kind::Diagonal:
      out << "diagonal(" << print_system(spec->left) << ", " << spec->param << ")";
      break;
  }
  return out.str();
}

namespace {

// Region and point syntax addresses the system's factor sequence: one entry
// per elementary constructor, products/diagonals concatenate, powers are
// transparent.
struct FactorDesc {
  SystemSpec::Kind kind;   // Cyclic, TorusRot, Skew2, SkewS, Chacon
  i64 modulus = 0;
  size_t torus_arity = 0;
  size_t first_unit = 0;   // index into FlatSystem::units
  size_t unit_count = 0;
};

void collect_factors(const SystemSpec& s, std::vector<FactorDesc>& out, size_t& unit_cursor) {
  switch (s.kind) {
    case SystemSpec::Kind::Cyclic:
      out.push_back({s.kind, s.param, 0, unit_cursor, 1});
      unit_cursor += 1;
      break;
    case SystemSpec::Kind::TorusRot:
      out.push_back({s.kind, 0, s.alphas.size(), unit_cursor, s.alphas.size()});
      unit_cursor += s.alphas.size();
      break;
    case SystemSpec::Kind::Skew2:
    case SystemSpec::Kind::SkewS:
    case SystemSpec::Kind::Chacon:
      out.push_back({s.kind, 0, 0, unit_cursor, 1});
      unit_cursor += 1;
      break;
    case SystemSpec::Kind::Product:
      collect_factors(*s.left, out, unit_cursor);
      collect_factors(*s.right, out, unit_cursor);
      break;
    case SystemSpec::Kind::Power:
      collect_factors(*s.left, out, unit_cursor);
      break;
    case SystemSpec::Kind::Diagonal:
      for (i64 i = 0; i <= s.param; ++i) collect_factors(*s.left, out, unit_cursor);
      break;
  }
}

std::vector<FactorDesc> factor_sequence(const FlatSystem& fs) {
  std::vector<FactorDesc> out;
  size_t cursor = 0;
  collect_factors(*fs.spec, out, cursor);
  return out;
}

ArcSpec arc_from_node(const Node& n, Scalar::Mode mode) {
  if (n.is_leaf() && n.text == "full") return ArcSpec::full_circle();
  if (n.head != "arc" || n.args.size() != 2)
    throw std::invalid_argument("region grammar: expected arc(a, b) or full");
  Scalar a = leaf_scalar(n.args[0], "arc start");
  Scalar b = leaf_scalar(n.args[1], "arc end");
  if (mode == Scalar::Mode::Fixed) {
    a = a.to_fixed();
    b = b.to_fixed();
  }
  return ArcSpec::between(a, b);
}

void factor_region_from_node(const Node& n, const FactorDesc& f, const FlatSystem& fs,
                             Region& out) {
  switch (f.kind) {
    case SystemSpec::Kind::TorusRot: {
      std::vector<Node> arcs;
      if (f.torus_arity == 1 && (n.head == "arc" || (n.is_leaf() && n.text == "full"))) {
        arcs.push_back(n);
      } else {
        if (n.head != "box" || n.args.size() != f.torus_arity)
          throw std::invalid_argument("region grammar: torus factor needs box(...) with " +
                                      std::to_string(f.torus_arity) + " arcs");
        arcs = n.args;
      }
      for (size_t i = 0; i < f.torus_arity; ++i)
        out.units[f.first_unit + i].arcs = {arc_from_node(arcs[i], fs.mode)};
      break;
    }
    case SystemSpec::Kind::Skew2:
    case SystemSpec::Kind::SkewS: {
      if (n.head != "box" || n.args.size() != 2)
        throw std::invalid_argument("region grammar: skew factor needs box(arc, arc)");
      out.units[f.first_unit].arcs = {arc_from_node(n.args[0], fs.mode),
                                      arc_from_node(n.args[1], fs.mode)};
      break;
    }
    case SystemSpec::Kind::Cyclic: {
      if (n.head != "residues")
        throw std::invalid_argument("region grammar: cyclic factor needs residues(...)");
      std::vector<std::uint8_t> res((size_t)f.modulus, 0);
      for (const auto& a : n.args) {
        i64 r = leaf_int(a, "residue");
        if (r < 0 || r >= f.modulus)
          throw std::invalid_argument("region grammar: residue " + std::to_string(r) +
                                      " outside [0, " + std::to_string(f.modulus) + ")");
        res[(size_t)r] = 1;
      }
      out.units[f.first_unit].residues = std::move(res);
      break;
    }
    case SystemSpec::Kind::Chacon: {
      if (n.head != "cyl" || n.args.empty())
        throw std::invalid_argument("region grammar: subshift factor needs cyl(word, ...)");
      for (const auto& a : n.args) out.units[f.first_unit].cylinders.push_back(a.text);
      break;
    }
    default:
      throw std::invalid_argument("region grammar: unsupported factor");
  }
}

}  // namespace

Region parse_region(const std::string& text, const FlatSystem& fs) {
  Node n = parse_node(text);
  std::vector<FactorDesc> factors = factor_sequence(fs);
  Region out;
  out.units.resize(fs.units.size());
  if (factors.size() == 1) {
    factor_region_from_node(n, factors[0], fs, out);
  } else {
    if (n.head != "prod" || n.args.size() != factors.size())
      throw std::invalid_argument("region grammar: system has " + std::to_string(factors.size()) +
                                  " factors; expected prod(...) with that many components");
    for (size_t i = 0; i < factors.size(); ++i)
      factor_region_from_node(n.args[i], factors[i], fs, out);
  }
  validate_region(fs, out);
  return out;
}

namespace {

std::string print_arc(const ArcSpec& a) {
  if (a.full) return "full";
  Scalar end = a.start + a.length;
  return "arc(" + a.start.str() + ", " + end.str() + ")";
}

std::string print_factor_region(const Region& r, const FactorDesc& f) {
  std::ostringstream out;
  switch (f.kind) {
    case SystemSpec::Kind::TorusRot: {
      if (f.torus_arity == 1) return print_arc(r.units[f.first_unit].arcs[0]);
      out << "box(";
      for (size_t i = 0; i < f.torus_arity; ++i)
        out << (i ? ", " : "") << print_arc(r.units[f.first_unit + i].arcs[0]);
      out << ")";
      break;
    }
    case SystemSpec::Kind::Skew2:
    case SystemSpec::Kind::SkewS:
      out << "box(" << print_arc(r.units[f.first_unit].arcs[0]) << ", "
          << print_arc(r.units[f.first_unit].arcs[1]) << ")";
      break;
    case SystemSpec::Kind::Cyclic: {
      out << "residues(";
      bool first = true;
      for (size_t q = 0; q < r.units[f.first_unit].residues.size(); ++q)
        if (r.units[f.first_unit].residues[q]) {
          out << (first ? "" : ", ") << q;
          first = false;
        }
      out << ")";
      break;
    }
    case SystemSpec::Kind::Chacon: {
      out << "cyl(";
      const auto& cyls = r.units[f.first_unit].cylinders;
      for (size_t i = 0; i < cyls.size(); ++i) out << (i ? ", " : "") << cyls[i];
      out << ")";
      break;
    }
    default:
      break;
  }
  return out.str();
}

}  // namespace

std::string print_region(const Region& r, const FlatSystem& fs) {
  std::vector<FactorDesc> factors = factor_sequence(fs);
  if (factors.size() == 1) return print_factor_region(r, factors[0]);
  std::ostringstream out;
  out << "prod(";
  for (size_t i = 0; i < factors.size(); ++i)
    out << (i ? ", " : "") << print_factor_region(r, factors[i]);
  out << ")";
  return out.str();
}

Point parse_point(const std::string& text, const FlatSystem& fs) {
  Node n = parse_node(text);
  if (n.head != "pt")
    throw std::invalid_argument("point grammar: expected pt(...)");
  if (n.args.size() != fs.atom_count)
    throw std::invalid_argument("point grammar: expected " + std::to_string(fs.atom_count) +
                                " coordinates, got " + std::to_string(n.args.size()));
  Point p;
  p.atoms.resize(fs.atom_count);
  for (const auto& u : fs.units) {
    for (int j = 0; j < u.arity(); ++j) {
      const Node& a = n.args[u.atom_index + j];
      if (u.kind == Unit::Kind::CyclicRot) {
        p.atoms[u.atom_index] = leaf_int(a, "residue");
      } else if (u.kind == Unit::Kind::Chacon) {
        std::string t = a.text;
        if (t.rfind("idx:", 0) == 0) t = t.substr(4);
        p.atoms[u.atom_index] = std::stoll(t);
      } else {
        Scalar s = leaf_scalar(a, "coordinate");
        p.atoms[u.atom_index + j] = fs.mode == Scalar::Mode::Fixed ? s.to_fixed() : s;
      }
    }
  }
  validate_point(fs, p);
  return p;
}

std::string print_point(const Point& p, const FlatSystem& fs) {
  std::ostringstream out;
  out << "pt(";
  for (size_t i = 0; i < fs.atom_count; ++i) {
    if (i) out << ", ";
    const auto& u = [&]() -> const Unit& {
      for (const auto& un : fs.units)
        if (i >= un.atom_index && i < un.atom_index + (size_t)un.arity()) return un;
      throw std::logic_error("print_point: atom without unit");
    }();
    if (u.kind == Unit::Kind::CyclicRot) out << p.int_at(i);
    else if (u.kind == Unit::Kind::Chacon) out << "idx:" << p.int_at(i);
    else out << p.scalar_at(i).str();
  }
  out << ")";
  return out.str();
}

}  // namespace recur
