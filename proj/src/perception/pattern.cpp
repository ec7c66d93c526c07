#include "retrokit/perception/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "retrokit/chem/smiles_grammar.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::perception {
namespace {

using chem::BondOrder;

class PatternSink {
 public:
  [[noreturn]] void fail(std::size_t pos, std::string reason) { throw PatternSyntaxError(pos, std::move(reason)); }

  int atom(const chem::detail::AtomToken& tok) {
    PatternAtom a = tok.bracket ? parse_bracket(tok.text, tok.pos + 1) : parse_bare(tok.text, tok.pos);
    atoms.push_back(a);
    return static_cast<int>(atoms.size()) - 1;
  }

  void bond(int a, int b, char symbol, std::size_t pos) {
    for (const auto& bd : bonds) {
      if ((bd.a == a && bd.b == b) || (bd.a == b && bd.b == a)) fail(pos, "duplicate bond");
    }
    PatternBond bd{a, b, PatternBondKind::SingleOrAromatic};
    switch (symbol) {
      case 0: break;
      case '-': bd.kind = PatternBondKind::Single; break;
      case '=': bd.kind = PatternBondKind::Double; break;
      case '#': bd.kind = PatternBondKind::Triple; break;
      case ':': bd.kind = PatternBondKind::Aromatic; break;
      default: fail(pos, std::string("unsupported bond symbol '") + symbol + "'");
    }
    bonds.push_back(bd);
  }

  std::vector<PatternAtom> atoms;
  std::vector<PatternBond> bonds;

 private:
  PatternAtom symbol_atom(std::string_view sym, std::size_t pos) {
    PatternAtom a;
    if (sym == "*") {
      a.any = true;
      a.atomic_number = chem::kWildcard;
      a.charge.reset();
      return a;
    }
    std::string upper(sym);
    if (std::islower(static_cast<unsigned char>(upper[0]))) {
      a.aromatic = true;
      upper[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(upper[0])));
    }
    const auto z = chem::element_from_symbol(upper);
    if (!z) fail(pos, "unknown element symbol");
    a.atomic_number = *z;
    return a;
  }

  PatternAtom parse_bare(std::string_view sym, std::size_t pos) { return symbol_atom(sym, pos); }

  PatternAtom parse_bracket(std::string_view s, std::size_t base) {
    if (s.empty()) fail(base, "empty bracket atom");
    if (s[0] == '#') {
      std::size_t i = 1;
      int z = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) z = z * 10 + (s[i++] - '0');
      if (i == 1 || z < 1 || chem::element_symbol(z).empty()) fail(base, "bad atomic number");
      PatternAtom a;
      a.atomic_number = z;
      a.either_aromaticity = true;
      return parse_bracket_tail(a, s, i, base);
    }
    std::size_t len = 1;
    if (s[0] != '*' && std::isupper(static_cast<unsigned char>(s[0])) && s.size() > 1 &&
        std::islower(static_cast<unsigned char>(s[1])) && chem::element_from_symbol(s.substr(0, 2))) {
      len = 2;
    }
    if (s[0] != '*' && !std::isalpha(static_cast<unsigned char>(s[0]))) fail(base, "missing element symbol");
    if (std::islower(static_cast<unsigned char>(s[0])) &&
        std::string_view("bcnops").find(s[0]) == std::string_view::npos) {
      fail(base, "unsupported aromatic symbol");
    }
    return parse_bracket_tail(symbol_atom(s.substr(0, len), base), s, len, base);
  }

  PatternAtom parse_bracket_tail(PatternAtom a, std::string_view s, std::size_t i, std::size_t base) {
    if (i < s.size() && s[i] == 'H') {
      ++i;
      int h = 1;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        h = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) h = h * 10 + (s[i++] - '0');
      }
      a.total_h = h;
    }
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      const char sign = s[i];
      const int unit = sign == '+' ? 1 : -1;
      ++i;
      int magnitude = 1;
      if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        magnitude = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) magnitude = magnitude * 10 + (s[i++] - '0');
      } else {
        while (i < s.size() && s[i] == sign) {
          ++magnitude;
          ++i;
        }
      }
      a.charge = unit * magnitude;
    }
    if (i < s.size() && s[i] == ':') {
      ++i;
      int map = 0;
      if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail(base + i, "missing map number");
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) map = map * 10 + (s[i++] - '0');
      if (map > 0) a.map_number = map;
    }
    if (i != s.size()) fail(base + i, "unsupported text in bracket pattern atom");
    return a;
  }
};

struct Matcher {
  const chem::Molecule& mol;
  const Pattern& pat;
  std::vector<int> order;
  std::vector<int> anchor;  // mapped pattern neighbour used to generate candidates, or -1
  std::vector<std::vector<std::pair<int, PatternBondKind>>> padj;
  std::vector<int> assign;
  std::vector<char> used;
  bool dedupe = true;
  std::size_t limit = 0;
  std::set<std::vector<int>> seen;
  std::vector<std::pair<std::vector<int>, std::vector<int>>> found;

  Matcher(const chem::Molecule& m, const Pattern& p) : mol(m), pat(p) {
    const int n = p.num_atoms();
    padj.resize(static_cast<std::size_t>(n));
    for (const auto& b : p.bonds()) {
      padj[static_cast<std::size_t>(b.a)].emplace_back(b.b, b.kind);
      padj[static_cast<std::size_t>(b.b)].emplace_back(b.a, b.kind);
    }
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    for (int start = 0; start < n; ++start) {
      if (placed[static_cast<std::size_t>(start)]) continue;
      std::vector<int> queue{start};
      placed[static_cast<std::size_t>(start)] = 1;
      anchor.push_back(-1);
      order.push_back(start);
      for (std::size_t q = 0; q < queue.size(); ++q) {
        for (const auto& [v, kind] : padj[static_cast<std::size_t>(queue[q])]) {
          (void)kind;
          if (placed[static_cast<std::size_t>(v)]) continue;
          placed[static_cast<std::size_t>(v)] = 1;
          queue.push_back(v);
          order.push_back(v);
          anchor.push_back(queue[q]);
        }
      }
    }
    assign.assign(static_cast<std::size_t>(n), -1);
    used.assign(static_cast<std::size_t>(mol.num_atoms()), 0);
  }

  bool consistent(int p, int m) const {
    if (used[static_cast<std::size_t>(m)]) return false;
    if (!atom_matches(pat.atoms()[static_cast<std::size_t>(p)], mol, m)) return false;
    for (const auto& [q, kind] : padj[static_cast<std::size_t>(p)]) {
      const int mq = assign[static_cast<std::size_t>(q)];
      if (mq < 0) continue;
      const int b = mol.find_bond(m, mq);
      if (b < 0 || !bond_matches(kind, mol.bond(b).order)) return false;
    }
    return true;
  }

  void search(std::size_t depth) {
    if (limit > 0 && found.size() >= limit) return;
    if (depth == order.size()) {
      if (!dedupe) {
        found.emplace_back(std::vector<int>{}, assign);
        return;
      }
      std::vector<int> key = assign;
      std::sort(key.begin(), key.end());
      if (seen.insert(key).second) found.emplace_back(std::move(key), assign);
      return;
    }
    const int p = order[depth];
    auto try_atom = [&](int m) {
      if (!consistent(p, m)) return;
      assign[static_cast<std::size_t>(p)] = m;
      used[static_cast<std::size_t>(m)] = 1;
      search(depth + 1);
      used[static_cast<std::size_t>(m)] = 0;
      assign[static_cast<std::size_t>(p)] = -1;
    };
    const int a = anchor[depth];
    if (a >= 0) {
      for (const auto& nb : mol.neighbors(assign[static_cast<std::size_t>(a)])) try_atom(nb.atom);
    } else {
      for (int m = 0; m < mol.num_atoms(); ++m) try_atom(m);
    }
  }
};

}  // namespace

Pattern Pattern::parse(std::string_view text) {
  PatternSink sink;
  chem::detail::walk_line_notation(text, sink);
  Pattern p;
  p.atoms_ = std::move(sink.atoms);
  p.bonds_ = std::move(sink.bonds);
  p.text_ = std::string(text);
  return p;
}

Pattern Pattern::from_parts(std::vector<PatternAtom> atoms, std::vector<PatternBond> bonds) {
  Pattern p;
  p.atoms_ = std::move(atoms);
  p.bonds_ = std::move(bonds);
  return p;
}

bool atom_matches(const PatternAtom& p, const chem::Molecule& mol, int atom) {
  const chem::Atom& a = mol.atom(atom);
  if (!p.any) {
    if (a.atomic_number != p.atomic_number) return false;
    if (!p.either_aromaticity && a.aromatic != p.aromatic) return false;
  }
  if (p.charge && a.formal_charge != *p.charge) return false;
  if (p.total_h && mol.hydrogen_count(atom) != *p.total_h) return false;
  return true;
}

bool bond_matches(PatternBondKind kind, BondOrder order) {
  switch (kind) {
    case PatternBondKind::SingleOrAromatic: return order == BondOrder::Single || order == BondOrder::Aromatic;
    case PatternBondKind::Single: return order == BondOrder::Single;
    case PatternBondKind::Double: return order == BondOrder::Double;
    case PatternBondKind::Triple: return order == BondOrder::Triple;
    case PatternBondKind::Aromatic: return order == BondOrder::Aromatic;
  }
  return false;
}

std::vector<std::vector<int>> match_pattern(const chem::Molecule& mol, const Pattern& pattern) {
  if (pattern.num_atoms() == 0 || pattern.num_atoms() > mol.num_atoms()) return {};
  Matcher m(mol, pattern);
  m.search(0);
  std::sort(m.found.begin(), m.found.end());
  std::vector<std::vector<int>> out;
  out.reserve(m.found.size());
  for (auto& [key, mapping] : m.found) out.push_back(std::move(mapping));
  return out;
}

std::vector<std::vector<int>> enumerate_matches(const chem::Molecule& mol, const Pattern& pattern,
                                                std::size_t limit) {
  if (pattern.num_atoms() == 0 || pattern.num_atoms() > mol.num_atoms()) return {};
  Matcher m(mol, pattern);
  m.dedupe = false;
  m.limit = limit;
  m.search(0);
  std::vector<std::vector<int>> out;
  out.reserve(m.found.size());
  for (auto& [key, mapping] : m.found) out.push_back(std::move(mapping));
  return out;
}

std::vector<std::vector<int>> match_pattern(const chem::Molecule& mol, const PatternDef& def) {
  return match_pattern(mol, Pattern::parse(def.pattern));
}

std::vector<PatternDef> read_pattern_table(std::istream& in) {
  std::vector<PatternDef> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw PatternSyntaxError(0, "line " + std::to_string(lineno) + ": expected name<TAB>pattern");
    }
    PatternDef def{line.substr(0, tab), line.substr(tab + 1)};
    while (!def.pattern.empty() && (def.pattern.back() == ' ' || def.pattern.back() == '\t')) def.pattern.pop_back();
    try {
      (void)Pattern::parse(def.pattern);
    } catch (const PatternSyntaxError& e) {
      throw PatternSyntaxError(e.position(), "line " + std::to_string(lineno) + " (" + def.name + "): " + e.reason());
    }
    out.push_back(std::move(def));
  }
  return out;
}

std::vector<PatternDef> load_pattern_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pattern table " + path);
  return read_pattern_table(in);
}

}  // namespace retrokit::perception
