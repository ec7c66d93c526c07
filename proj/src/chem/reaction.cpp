#include "retrokit/chem/reaction.hpp"

#include <map>

#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"

namespace retrokit::chem {
namespace {

std::vector<std::string_view> split_pieces(std::string_view side) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= side.size()) {
    std::size_t end = side.find('.', start);
    if (end == std::string_view::npos) end = side.size();
    if (end > start) out.push_back(side.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

Molecule parse_side_piece(std::string_view piece, std::size_t offset) {
  try {
    return parse_smiles(piece);
  } catch (const SyntaxError& e) {
    throw SyntaxError(offset + e.position(), e.reason());
  }
}

}  // namespace

ReactionRecord parse_rxn(std::string_view text, std::string id) {
  const std::size_t first = text.find('>');
  if (first == std::string_view::npos) throw SyntaxError(text.size(), "missing '>>' separator");
  const std::size_t second = text.find('>', first + 1);
  if (second == std::string_view::npos) throw SyntaxError(first, "missing '>>' separator");
  if (text.find('>', second + 1) != std::string_view::npos) {
    throw SyntaxError(text.find('>', second + 1), "too many '>' separators");
  }

  ReactionRecord rec;
  rec.id = std::move(id);
  rec.raw = std::string(text);

  auto add_precursors = [&](std::size_t begin, std::size_t end) {
    const std::string_view side = text.substr(begin, end - begin);
    for (auto piece : split_pieces(side)) {
      const auto offset = begin + static_cast<std::size_t>(piece.data() - side.data());
      rec.precursors.push_back(parse_side_piece(piece, offset));
    }
  };
  add_precursors(0, first);
  add_precursors(first + 1, second);
  if (rec.precursors.empty()) throw SyntaxError(0, "no precursors");

  const std::string_view product_side = text.substr(second + 1);
  const auto pieces = split_pieces(product_side);
  if (pieces.empty()) throw SyntaxError(second + 1, "no product");
  std::string joined;
  for (auto piece : pieces) {
    if (!joined.empty()) joined += '.';
    joined += piece;
  }
  rec.product = parse_side_piece(joined, second + 1);
  return rec;
}

std::string rxn_text(const ReactionRecord& rec) {
  std::string out;
  for (const auto& p : rec.precursors) {
    if (!out.empty()) out += '.';
    out += p.source_text().empty() ? write_smiles(p, false) : p.source_text();
  }
  out += ">>";
  out += rec.product.source_text().empty() ? write_smiles(rec.product, false) : rec.product.source_text();
  return out;
}

MappedReaction bind_atom_maps(const ReactionRecord& rec) {
  const Molecule& product = rec.product;
  const int n = product.num_atoms();
  std::vector<int> product_atom(static_cast<std::size_t>(n) + 1, -1);
  for (int i = 0; i < n; ++i) {
    const auto& m = product.atom(i).map_number;
    if (!m) throw MappingError("product atom " + std::to_string(i) + " has no map number");
    if (*m > n) throw MappingError("map numbers are not contiguous: " + std::to_string(*m) + " > " + std::to_string(n));
    if (product_atom[static_cast<std::size_t>(*m)] >= 0) throw MappingError("duplicate map " + std::to_string(*m));
    product_atom[static_cast<std::size_t>(*m)] = i;
  }

  std::vector<AtomRef> precursor_atom(static_cast<std::size_t>(n) + 1);
  std::map<int, AtomRef> seen;
  MappedReaction out;
  out.base_.id = rec.id;
  out.base_.raw = rec.raw;
  out.base_.product = rec.product;
  for (int mi = 0; mi < static_cast<int>(rec.precursors.size()); ++mi) {
    const Molecule& mol = rec.precursors[static_cast<std::size_t>(mi)];
    std::vector<Atom> atoms(mol.atoms().begin(), mol.atoms().end());
    bool changed = false;
    for (int ai = 0; ai < mol.num_atoms(); ++ai) {
      auto& m = atoms[static_cast<std::size_t>(ai)].map_number;
      if (!m) continue;
      if (*m > n) {
        m.reset();
        changed = true;
        continue;
      }
      if (!seen.emplace(*m, AtomRef{mi, ai}).second) {
        throw MappingError("duplicate precursor map " + std::to_string(*m));
      }
      precursor_atom[static_cast<std::size_t>(*m)] = AtomRef{mi, ai};
    }
    if (changed) {
      out.base_.precursors.emplace_back(std::move(atoms), std::vector<Bond>(mol.bonds().begin(), mol.bonds().end()),
                                        mol.source_text());
    } else {
      out.base_.precursors.push_back(mol);
    }
  }
  for (int m = 1; m <= n; ++m) {
    if (precursor_atom[static_cast<std::size_t>(m)].molecule < 0) {
      throw MappingError("product map " + std::to_string(m) + " absent from precursors");
    }
  }
  out.product_atom_ = std::move(product_atom);
  out.precursor_atom_ = std::move(precursor_atom);
  return out;
}

}  // namespace retrokit::chem
