#include "retrokit/retro/consistency.hpp"

#include "retrokit/chem/canon.hpp"
#include "retrokit/chem/smiles.hpp"
#include "retrokit/errors.hpp"
#include "retrokit/retro/forward.hpp"
#include "retrokit/retro/template.hpp"

namespace retrokit::retro {

bool regenerates_product(const chem::MappedReaction& mapped, const std::string& canonical_template) {
  std::vector<chem::Molecule> bare;
  for (const auto& p : mapped.precursors()) bare.push_back(chem::parse_smiles(chem::canonical_smiles(p)));
  const std::string want = chem::canonical_smiles(mapped.product());
  for (const auto& m : apply_template_forward(std::string_view(canonical_template), bare)) {
    if (chem::canonical_smiles(m) == want) return true;
  }
  return false;
}

ConsistencyReport check_self_consistency(const std::vector<std::pair<std::string, std::string>>& reactions) {
  ConsistencyReport rep;
  for (const auto& [id, rxn] : reactions) {
    ++rep.reactions;
    try {
      const auto mapped = chem::bind_atom_maps(chem::parse_rxn(rxn, id));
      const auto t = extract_template(mapped);
      ++rep.extracted;
      if (regenerates_product(mapped, t.canonical_form)) {
        ++rep.regenerated;
      } else {
        rep.failures.push_back({id, "apply", t.canonical_form});
      }
    } catch (const Error& e) {
      rep.failures.push_back({id, "extract", e.what()});
    }
  }
  return rep;
}

}  // namespace retrokit::retro
