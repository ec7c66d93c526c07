#include "retrokit/chem/molecule.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#include "retrokit/errors.hpp"

namespace retrokit::chem {
namespace {

std::optional<int> smallest_at_least(std::span<const int> valences, int sum, int shift) {
  for (int v : valences) {
    if (v + shift >= sum) return v + shift;
  }
  return std::nullopt;
}

int charge_shift(int z, int charge) {
  if (charge == 0) return 0;
  switch (z) {
    case 7: case 8: case 15: case 16:
      return charge;
    default:
      return -std::abs(charge);
  }
}

// Hydrogens the valence table gives a bare atom; nullopt on overflow.
std::optional<int> table_hydrogens(const Atom& atom, const std::vector<Neighbor>& nbrs,
                                   const std::vector<Bond>& bonds) {
  if (atom.is_wildcard()) return 0;
  auto valences = default_valences(atom.atomic_number);
  if (valences.empty()) return 0;
  int n_aromatic = 0;
  int other = 0;
  for (const auto& nb : nbrs) {
    const BondOrder o = bonds[static_cast<std::size_t>(nb.bond)].order;
    if (o == BondOrder::Aromatic) {
      ++n_aromatic;
    } else {
      other += static_cast<int>(o);
    }
  }
  const int shift = charge_shift(atom.atomic_number, atom.formal_charge);
  if (atom.aromatic) {
    const int z = atom.atomic_number;
    const bool pi_donor = (z == 5 || z == 6 || z == 7 || z == 15) && n_aromatic > 0;
    int sum = n_aromatic + (pi_donor ? 1 : 0) + other;
    auto v = smallest_at_least(valences, sum, shift);
    if (!v && pi_donor) {
      --sum;
      v = smallest_at_least(valences, sum, shift);
    }
    if (!v) return std::nullopt;
    return std::max(0, *v - sum);
  }
  const int sum = other + n_aromatic;
  auto v = smallest_at_least(valences, sum, shift);
  if (!v) return std::nullopt;
  return std::max(0, *v - sum);
}

// Written hydrogens plus bond orders (aromatic bonds as 1) against the
// largest table valence. Neutral B, C, N, O, P and S only.
bool bracket_over_valence(const Atom& atom, const std::vector<Neighbor>& nbrs, const std::vector<Bond>& bonds) {
  if (atom.formal_charge != 0) return false;
  const int z = atom.atomic_number;
  if (z != 5 && z != 6 && z != 7 && z != 8 && z != 15 && z != 16) return false;
  int sum = atom.explicit_h.value_or(0);
  for (const auto& nb : nbrs) {
    const BondOrder o = bonds[static_cast<std::size_t>(nb.bond)].order;
    sum += o == BondOrder::Aromatic ? 1 : static_cast<int>(o);
  }
  return sum > default_valences(z).back();
}

}  // namespace

BondDirection flipped(BondDirection d) {
  switch (d) {
    case BondDirection::Up: return BondDirection::Down;
    case BondDirection::Down: return BondDirection::Up;
    default: return d;
  }
}

int doubled_valence(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 2;
    case BondOrder::Aromatic: return 3;
    case BondOrder::Double: return 4;
    case BondOrder::Triple: return 6;
  }
  return 2;
}

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_text)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)), source_text_(std::move(source_text)) {
  const int n = num_atoms();
  adjacency_.assign(atoms_.size(), {});
  for (int bi = 0; bi < num_bonds(); ++bi) {
    Bond& b = bonds_[static_cast<std::size_t>(bi)];
    if (b.a < 0 || b.b < 0 || b.a >= n || b.b >= n) {
      throw std::invalid_argument("bond endpoint out of range");
    }
    if (b.a == b.b) throw std::invalid_argument("self-loop bond");
    for (const auto& nb : adjacency_[static_cast<std::size_t>(b.a)]) {
      if (nb.atom == b.b) throw std::invalid_argument("duplicate bond");
    }
    adjacency_[static_cast<std::size_t>(b.a)].push_back({b.b, bi});
    adjacency_[static_cast<std::size_t>(b.b)].push_back({b.a, bi});
  }
  for (const auto& a : atoms_) {
    if (a.map_number && *a.map_number < 1) throw std::invalid_argument("map number must be >= 1");
    if (a.explicit_h && *a.explicit_h < 0) throw std::invalid_argument("negative hydrogen count");
  }
  hydrogens_.resize(atoms_.size());
  for (int i = 0; i < n; ++i) {
    const Atom& a = atoms_[static_cast<std::size_t>(i)];
    const auto& nbrs = adjacency_[static_cast<std::size_t>(i)];
    if (a.is_bracket()) {
      if (bracket_over_valence(a, nbrs, bonds_)) {
        throw ValenceError("atom " + std::to_string(i) + " ([" + std::string(element_symbol(a.atomic_number)) +
                           "]) exceeds its allowed valence");
      }
      hydrogens_[static_cast<std::size_t>(i)] = *a.explicit_h;
      continue;
    }
    auto h = table_hydrogens(a, nbrs, bonds_);
    if (!h) {
      throw ValenceError("atom " + std::to_string(i) + " (" +
                         std::string(element_symbol(a.atomic_number)) +
                         ") exceeds its allowed valence");
    }
    hydrogens_[static_cast<std::size_t>(i)] = *h;
  }
}

int Molecule::implicit_hydrogens(int i) const {
  Atom bare = atom(i);
  bare.explicit_h.reset();
  auto h = table_hydrogens(bare, adjacency_[static_cast<std::size_t>(i)], bonds_);
  return h ? *h : -1;
}

int Molecule::find_bond(int a, int b) const {
  for (const auto& nb : neighbors(a)) {
    if (nb.atom == b) return nb.bond;
  }
  return -1;
}

std::vector<int> Molecule::component_ids() const {
  std::vector<int> comp(atoms_.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int s = 0; s < num_atoms(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& nb : neighbors(u)) {
        if (comp[static_cast<std::size_t>(nb.atom)] < 0) {
          comp[static_cast<std::size_t>(nb.atom)] = next;
          stack.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  return comp;
}

int Molecule::num_components() const {
  const auto comp = component_ids();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

int Molecule::ring_count() const { return num_bonds() - num_atoms() + num_components(); }

bool Molecule::has_maps() const {
  return std::any_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.map_number.has_value(); });
}

Molecule strip_maps(const Molecule& mol) {
  std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
  for (auto& a : atoms) a.map_number.reset();
  return Molecule(std::move(atoms), {mol.bonds().begin(), mol.bonds().end()}, mol.source_text());
}

Molecule combine(std::span<const Molecule> parts) {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  std::string text;
  for (const auto& m : parts) {
    const int offset = static_cast<int>(atoms.size());
    atoms.insert(atoms.end(), m.atoms().begin(), m.atoms().end());
    for (Bond b : m.bonds()) {
      b.a += offset;
      b.b += offset;
      bonds.push_back(b);
    }
    if (!text.empty()) text += '.';
    text += m.source_text();
  }
  return Molecule(std::move(atoms), std::move(bonds), std::move(text));
}

Molecule induced_subgraph(const Molecule& mol, std::span<const int> keep, std::span<const int> freeze_h) {
  std::vector<int> remap(static_cast<std::size_t>(mol.num_atoms()), -1);
  std::vector<Atom> atoms;
  atoms.reserve(keep.size());
  for (int old : keep) {
    remap[static_cast<std::size_t>(old)] = static_cast<int>(atoms.size());
    Atom a = mol.atom(old);
    if (std::find(freeze_h.begin(), freeze_h.end(), old) != freeze_h.end()) {
      a.explicit_h = mol.hydrogen_count(old);
    }
    atoms.push_back(a);
  }
  std::vector<Bond> bonds;
  for (const auto& b : mol.bonds()) {
    const int na = remap[static_cast<std::size_t>(b.a)];
    const int nb = remap[static_cast<std::size_t>(b.b)];
    if (na >= 0 && nb >= 0) bonds.push_back({na, nb, b.order, b.direction});
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

}  // namespace retrokit::chem
