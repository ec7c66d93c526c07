#include "retrokit/chem/smiles.hpp"

#include <cctype>
#include <cstdlib>
#include <numeric>

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/emit.hpp"
#include "retrokit/chem/smiles_grammar.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::chem {
namespace {

int read_int(std::string_view s, std::size_t& i) {
  int v = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
    v = v * 10 + (s[i] - '0');
    ++i;
  }
  return v;
}

class MoleculeSink {
 public:
  explicit MoleculeSink(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(std::size_t pos, std::string reason) { throw SyntaxError(pos, std::move(reason)); }

  int atom(const detail::AtomToken& tok) {
    Atom a;
    if (tok.bracket) {
      a = parse_bracket(tok.text, tok.pos + 1);
    } else {
      const std::string_view sym = tok.text;
      if (sym == "*") {
        a.atomic_number = kWildcard;
      } else if (std::islower(static_cast<unsigned char>(sym[0]))) {
        std::string upper(sym);
        upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
        a.atomic_number = *element_from_symbol(upper);
        a.aromatic = true;
      } else {
        a.atomic_number = *element_from_symbol(sym);
      }
    }
    atoms_.push_back(a);
    return static_cast<int>(atoms_.size()) - 1;
  }

  void bond(int a, int b, char symbol, std::size_t pos) {
    for (const auto& bd : bonds_) {
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) fail(pos, "duplicate bond");
    }
    Bond bd;
    bd.a = a;
    bd.b = b;
    switch (symbol) {
      case 0:
        bd.order = (atoms_[static_cast<std::size_t>(a)].aromatic && atoms_[static_cast<std::size_t>(b)].aromatic)
                       ? BondOrder::Aromatic
                       : BondOrder::Single;
        break;
      case '-': bd.order = BondOrder::Single; break;
      case '=': bd.order = BondOrder::Double; break;
      case '#': bd.order = BondOrder::Triple; break;
      case ':': bd.order = BondOrder::Aromatic; break;
      case '/': bd.order = BondOrder::Single; bd.direction = BondDirection::Up; break;
      case '\\': bd.order = BondOrder::Single; bd.direction = BondDirection::Down; break;
      default: fail(pos, "unknown bond symbol");
    }
    bonds_.push_back(bd);
  }

  Molecule finish() { return Molecule(std::move(atoms_), std::move(bonds_), std::string(text_)); }

 private:
  Atom parse_bracket(std::string_view s, std::size_t base) {
    Atom a;
    std::size_t i = 0;
    if (s.empty()) fail(base, "empty bracket atom");
    if (std::isdigit(static_cast<unsigned char>(s[0]))) {
      const int iso = read_int(s, i);
      if (iso <= 0) fail(base, "isotope must be positive");
      a.isotope = iso;
    }
    if (i >= s.size()) fail(base + i, "missing element symbol");
    if (s[i] == '*') {
      a.atomic_number = kWildcard;
      ++i;
    } else if (std::islower(static_cast<unsigned char>(s[i]))) {
      const char c = s[i];
      if (std::string_view("bcnops").find(c) == std::string_view::npos) {
        fail(base + i, std::string("unsupported aromatic symbol '") + c + "'");
      }
      std::string upper(1, static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      a.atomic_number = *element_from_symbol(upper);
      a.aromatic = true;
      ++i;
    } else if (std::isupper(static_cast<unsigned char>(s[i]))) {
      std::optional<int> z;
      if (i + 1 < s.size() && std::islower(static_cast<unsigned char>(s[i + 1]))) {
        z = element_from_symbol(s.substr(i, 2));
        if (z) i += 2;
      }
      if (!z) {
        z = element_from_symbol(s.substr(i, 1));
        if (!z) fail(base + i, "unknown element symbol");
        ++i;
      }
      a.atomic_number = *z;
    } else {
      fail(base + i, "missing element symbol");
    }
    if (i < s.size() && s[i] == '@') {
      ++i;
      if (i < s.size() && s[i] == '@') {
        a.chirality = Chirality::Clockwise;
        ++i;
      } else {
        a.chirality = Chirality::CounterClockwise;
      }
    }
    a.explicit_h = 0;
    if (i < s.size() && s[i] == 'H') {
      ++i;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        a.explicit_h = read_int(s, i);
      } else {
        a.explicit_h = 1;
      }
    }
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      const char sign = s[i];
      const int unit = sign == '+' ? 1 : -1;
      ++i;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        a.formal_charge = unit * read_int(s, i);
      } else {
        int count = 1;
        while (i < s.size() && s[i] == sign) {
          ++count;
          ++i;
        }
        a.formal_charge = unit * count;
      }
    }
    if (i < s.size() && s[i] == ':') {
      ++i;
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail(base + i, "missing map number");
      const int map = read_int(s, i);
      if (map > 0) a.map_number = map;
    }
    if (i != s.size()) fail(base + i, "unexpected text in bracket atom");
    return a;
  }

  std::string_view text_;
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
};

std::string charge_text(int charge) {
  if (charge == 0) return {};
  std::string s = charge > 0 ? "+" : "-";
  if (std::abs(charge) > 1) s += std::to_string(std::abs(charge));
  return s;
}

std::string symbol_text(const Atom& a) {
  if (a.is_wildcard()) return "*";
  std::string sym(element_symbol(a.atomic_number));
  if (a.aromatic) {
    for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return sym;
}

}  // namespace

Molecule parse_smiles(std::string_view text) {
  MoleculeSink sink(text);
  detail::walk_line_notation(text, sink);
  return sink.finish();
}

std::string smiles_atom_text(const Molecule& mol, int i, bool write_map) {
  const Atom& a = mol.atom(i);
  const int h = mol.hydrogen_count(i);
  const bool map = write_map && a.map_number.has_value();
  bool bare = !a.isotope && a.formal_charge == 0 && a.chirality == Chirality::None && !map;
  if (bare) {
    if (a.is_wildcard()) {
      bare = h == 0;
    } else {
      bare = in_organic_subset(a.atomic_number) && (!a.aromatic || aromatic_capable(a.atomic_number)) &&
             mol.implicit_hydrogens(i) == h;
    }
  }
  const std::string sym = symbol_text(a);
  if (bare) return sym;
  std::string out = "[";
  if (a.isotope) out += std::to_string(*a.isotope);
  out += sym;
  if (a.chirality == Chirality::CounterClockwise) out += "@";
  if (a.chirality == Chirality::Clockwise) out += "@@";
  if (h > 0) {
    out += "H";
    if (h > 1) out += std::to_string(h);
  }
  out += charge_text(a.formal_charge);
  if (map) out += ":" + std::to_string(*a.map_number);
  out += "]";
  return out;
}

std::string smiles_bond_text(const Molecule& mol, int bond, int from, int to) {
  const Bond& b = mol.bond(bond);
  const bool both_aromatic = mol.atom(from).aromatic && mol.atom(to).aromatic;
  switch (b.order) {
    case BondOrder::Single: {
      BondDirection d = from == b.a ? b.direction : flipped(b.direction);
      if (d == BondDirection::Up) return "/";
      if (d == BondDirection::Down) return "\\";
      return both_aromatic ? "-" : "";
    }
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic: return both_aromatic ? "" : ":";
  }
  return {};
}

std::string write_smiles(const Molecule& mol, bool canonical) {
  if (canonical) return canonical_smiles(mol);
  if (mol.num_atoms() == 0) return {};
  std::vector<int> rank(static_cast<std::size_t>(mol.num_atoms()));
  std::iota(rank.begin(), rank.end(), 0);
  const EmitPlan plan = plan_emission(adjacency_of(mol), rank);
  return render_plan(
      plan, [&](int i) { return smiles_atom_text(mol, i, true); },
      [&](int b, int from, int to) { return smiles_bond_text(mol, b, from, to); });
}

}  // namespace retrokit::chem
