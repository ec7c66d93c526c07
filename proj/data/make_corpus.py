"""Builds the bundled desk corpus of atom-mapped reactions.

Forward reaction rules are applied to small building-block sets with RDKit.
Product atoms are numbered 1..n and the same numbers are written on the
reactant atoms they came from; atoms that leave stay unmapped. The first line
is the thioesterification example used throughout the tests.

Usage: python3 data/make_corpus.py [--seed 7] [--count 200]
Writes data/desk_corpus.rxn, tests/fixtures/hcounts.tsv and data/desk_samples.jsonl.
"""

import argparse
import itertools
import json
import random
from pathlib import Path

from rdkit import Chem, RDLogger
from rdkit.Chem import AllChem

RDLogger.DisableLog("rdApp.*")

ROOT = Path(__file__).resolve().parent.parent

WORKED_EXAMPLE = (
    "[O:13]=[C:12]([CH:14]1[CH2:15][CH2:16]1)[CH:11]([c:17]1[cH:18][cH:19][cH:20][cH:21][c:22]1[F:23])"
    "[N:10]1[CH2:9][CH2:8][CH:7]([SH:6])[CH2:25][CH2:24]1.[CH3:1][CH2:2][CH2:3][C:4](=[O:5])Cl>>"
    "[CH3:1][CH2:2][CH2:3][C:4](=[O:5])[S:6][CH:7]1[CH2:8][CH2:9][N:10]([CH:11]([C:12](=[O:13])"
    "[CH:14]2[CH2:15][CH2:16]2)[c:17]2[cH:18][cH:19][cH:20][cH:21][c:22]2[F:23])[CH2:24][CH2:25]1."
)

ACIDS = ["CC(=O)O", "OC(=O)c1ccccc1", "OC(=O)C1CC1", "OC(=O)c1ccc(F)cc1", "CCCC(=O)O", "OC(=O)c1ccncc1",
         "OC(=O)Cc1ccccc1", "CC(C)C(=O)O", "OC(=O)c1cccs1", "OC(=O)C1CCOCC1"]
ACYL_CHLORIDES = ["CCCC(=O)Cl", "CC(=O)Cl", "O=C(Cl)c1ccccc1", "O=C(Cl)C1CC1", "O=C(Cl)c1ccco1", "CC(C)(C)C(=O)Cl"]
AMINES = ["NCc1ccccc1", "CCN", "C1CCNCC1", "C1COCCN1", "Nc1ccccc1", "CC(C)N", "NC1CCCC1", "CNC",
          "Nc1ccc(Cl)cc1", "NCCO", "CN1CCNCC1", "NCc1ccco1"]
THIOLS = ["CCS", "Sc1ccccc1", "SCc1ccccc1", "SC1CCCCC1", "CC(C)S", "O=C(C1CC1)C(c1ccccc1F)N1CCC(S)CC1"]
ALCOHOLS = ["CO", "CCO", "CC(C)O", "OCc1ccccc1", "OC1CCCC1", "OCCOC"]
PHENOLS = ["Oc1ccccc1", "Oc1ccc(C)cc1", "Oc1ccc(Cl)cc1", "Oc1cccnc1"]
ARYL_HALIDES = ["Brc1ccccc1", "Brc1ccc(C)cc1", "Brc1cccnc1", "Ic1ccccc1", "Brc1ccc(C#N)cc1", "Brc1ccsc1",
                "COc1ccc(Br)cc1"]
BORONIC = ["OB(O)c1ccccc1", "OB(O)c1ccc(F)cc1", "OB(O)c1cccnc1", "Cc1ccc(B(O)O)cc1", "OB(O)c1ccoc1"]
ALKYL_HALIDES = ["CCBr", "BrCc1ccccc1", "CI", "CCCCBr", "BrCC1CC1", "ClCC(=O)OCC"]
ALDEHYDES = ["O=Cc1ccccc1", "CC=O", "O=CC1CCCCC1", "O=Cc1ccncc1", "CCC=O"]
SULFONYL = ["CS(=O)(=O)Cl", "Cc1ccc(S(=O)(=O)Cl)cc1", "O=S(=O)(Cl)c1ccccc1"]
ISOCYANATES = ["O=C=Nc1ccccc1", "CC(C)N=C=O", "O=C=NC1CCCCC1"]
SNAR = ["O=[N+]([O-])c1ccc(F)cc1", "Fc1ccc(C#N)cc1", "Clc1ccc([N+](=O)[O-])cc1", "Clc1ncccn1"]
ESTERS = ["CCOC(=O)c1ccccc1", "COC(=O)C1CC1", "CCOC(=O)CC", "COC(=O)c1ccc(F)cc1"]

RULES = [
    ("thioesterification", "[C:1](=[O:2])Cl.[S;H1:3]>>[C:1](=[O:2])[S:3]", [ACYL_CHLORIDES, THIOLS]),
    ("amide_coupling", "[C:1](=[O:2])[OH].[N;!H0;!$(NC=O):3]>>[C:1](=[O:2])[N:3]", [ACIDS, AMINES]),
    ("schotten_baumann", "[C:1](=[O:2])Cl.[N;!H0;!$(NC=O):3]>>[C:1](=[O:2])[N:3]", [ACYL_CHLORIDES, AMINES]),
    ("esterification", "[C:1](=[O:2])[OH].[O;H1;$(OC);!$(OC=O):3]>>[C:1](=[O:2])[O:3]", [ACIDS, ALCOHOLS]),
    ("suzuki", "[c:1][Br,I].[c:2]B(O)O>>[c:1]-[c:2]", [ARYL_HALIDES, BORONIC]),
    ("n_alkylation", "[CH2,CH3:1][Br,I].[N;!H0;!$(NC=O);!$(Nc):2]>>[C:1][N:2]", [ALKYL_HALIDES, AMINES]),
    ("reductive_amination", "[CH1:1]=O.[N;!H0;!$(NC=O):2]>>[C:1][N:2]", [ALDEHYDES, AMINES]),
    ("sulfonamide", "[S:1](=[O:2])(=[O:3])Cl.[N;!H0;!$(NC=O):4]>>[S:1](=[O:2])(=[O:3])[N:4]", [SULFONYL, AMINES]),
    ("williamson", "[CH2,CH3:1][Br,I].[OH:2][c:3]>>[C:1][O:2][c:3]", [ALKYL_HALIDES, PHENOLS]),
    ("buchwald", "[c:1][Br,I].[N;!H0;!$(NC=O);!$(Nc):2]>>[c:1][N:2]", [ARYL_HALIDES, AMINES]),
    ("urea", "[N:1]=[C:2]=[O:3].[N;!H0;!$(NC=O):4]>>[N:1][C:2](=[O:3])[N:4]", [ISOCYANATES, AMINES]),
    ("snar", "[c:1][F,Cl].[N;!H0;!$(NC=O);!$(Nc):2]>>[c:1][N:2]", [SNAR, AMINES]),
    ("ester_hydrolysis", "[C:1](=[O:2])O[CH2,CH3].[OH2:3]>>[C:1](=[O:2])[O:3]", [ESTERS, ["O"]]),
]


def mapped_reaction(rxn, reactant_smiles):
    reactants = [Chem.MolFromSmiles(s) for s in reactant_smiles]
    out = []
    for products in rxn.RunReactants(reactants):
        product = products[0]
        try:
            Chem.SanitizeMol(product)
        except Exception:
            continue
        rs = [Chem.Mol(r) for r in reactants]
        for atom in product.GetAtoms():
            atom.SetAtomMapNum(0)
        product = Chem.MolFromSmiles(Chem.MolToSmiles(product))
        if product is None:
            continue
        # Re-run on the clean product so atom indices and map numbers agree.
        for products2 in rxn.RunReactants(reactants):
            p2 = products2[0]
            try:
                Chem.SanitizeMol(p2)
            except Exception:
                continue
            if Chem.MolToSmiles(p2) != Chem.MolToSmiles(product):
                continue
            order = list(Chem.CanonicalRankAtoms(p2))
            by_rank = sorted(range(p2.GetNumAtoms()), key=lambda i: order[i])
            rs = [Chem.Mol(r) for r in reactants]
            for r in rs:
                for a in r.GetAtoms():
                    a.SetAtomMapNum(0)
            ok = True
            for k, idx in enumerate(by_rank, start=1):
                atom = p2.GetAtomWithIdx(idx)
                if not atom.HasProp("react_atom_idx") or not atom.HasProp("react_idx"):
                    ok = False
                    break
                atom.SetAtomMapNum(k)
                rs[atom.GetIntProp("react_idx")].GetAtomWithIdx(atom.GetIntProp("react_atom_idx")).SetAtomMapNum(k)
            if not ok:
                continue
            text = ".".join(Chem.MolToSmiles(r, canonical=False) for r in rs) + ">>" + Chem.MolToSmiles(p2)
            out.append((text, Chem.MolToSmiles(product), [Chem.MolToSmiles(Chem.MolFromSmiles(s)) for s in reactant_smiles]))
            break
        break
    return out


def build(seed, count):
    rng = random.Random(seed)
    pool = []
    for name, smarts, sets in RULES:
        rxn = AllChem.ReactionFromSmarts(smarts)
        combos = list(itertools.product(*sets))
        rng.shuffle(combos)
        for combo in combos:
            for text, product, reactants in mapped_reaction(rxn, list(combo)):
                pool.append((name, text, product, reactants))
    rng.shuffle(pool)
    seen = {Chem.MolToSmiles(Chem.MolFromSmiles("CCCC(=O)SC1CCN(C(C(=O)C2CC2)c2ccccc2F)CC1"))}
    chosen = [("thioesterification", WORKED_EXAMPLE, None, None)]
    per_type = {}
    quota = (count + len(RULES) - 1) // len(RULES)
    for item in pool:
        if len(chosen) >= count:
            break
        name, text, product, reactants = item
        if product in seen or per_type.get(name, 0) >= quota:
            continue
        seen.add(product)
        per_type[name] = per_type.get(name, 0) + 1
        chosen.append(item)
    for item in pool:
        if len(chosen) >= count:
            break
        if item[2] not in seen:
            seen.add(item[2])
            chosen.append(item)
    return chosen


def hydrogen_fixtures(smiles_list):
    rows = []
    for s in smiles_list:
        m = Chem.MolFromSmiles(s)
        if m is None:
            continue
        hs = ",".join(str(a.GetTotalNumHs()) for a in m.GetAtoms())
        rows.append(f"{s}\t{m.GetNumAtoms()}\t{hs}")
    return rows


def desk_samples(chosen, seed):
    rng = random.Random(seed + 1)
    products = []
    for c in chosen:
        m = Chem.MolFromSmiles(c[1].split(">>")[1].rstrip("."))
        for a in m.GetAtoms():
            a.SetAtomMapNum(0)
        products.append(Chem.MolToSmiles(m))
    labels = []
    for c in chosen:
        lhs = c[1].split(">>")[0]
        mols = [Chem.MolFromSmiles(p) for p in lhs.split(".") if p]
        for m in mols:
            for a in m.GetAtoms():
                a.SetAtomMapNum(0)
        labels.append(".".join(Chem.MolToSmiles(m) for m in mols))
    lines = []
    for i, (product, label) in enumerate(zip(products, labels)):
        samples = []
        for _ in range(8):
            roll = rng.random()
            if roll < 0.5:
                samples.append(label)
            elif roll < 0.65:
                parts = label.split(".")
                samples.append(".".join(reversed(parts)))
            elif roll < 0.85:
                samples.append(labels[rng.randrange(len(labels))])
            else:
                samples.append("C1CC(" if rng.random() < 0.5 else "not smiles")
        greedy = label if rng.random() < 0.7 else samples[rng.randrange(len(samples))]
        lines.append(json.dumps({"id": f"desk-{i:04d}", "product": product, "label_reactants": label,
                                 "greedy": greedy, "samples": samples}))
    return lines


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--count", type=int, default=200)
    args = ap.parse_args()
    chosen = build(args.seed, args.count)
    with open(ROOT / "data" / "desk_corpus.rxn", "w") as f:
        f.write("# mapped reaction SMILES<TAB>id<TAB>reaction type\n")
        for i, (name, text, _, _) in enumerate(chosen):
            f.write(f"{text}\tdesk-{i:04d}\t{name}\n")
    molecules = set()
    for name, text, product, reactants in chosen:
        if product is None:
            continue
        molecules.add(product)
        molecules.update(reactants)
    extra = ["C", "CC", "C=C", "C#C", "c1ccccc1", "C1CCCCC1", "c1ccncc1", "c1cc[nH]c1", "c1ccoc1", "c1ccsc1",
             "[NH4+]", "C[N+](C)(C)C", "CC(=O)[O-]", "O=[N+]([O-])c1ccccc1", "CS(C)=O", "CS(=O)(=O)C",
             "OP(O)(O)=O", "CP(C)C", "B(O)O", "OB(O)c1ccccc1", "c1ccc2[nH]ccc2c1", "c1ccc2ccccc2c1", "Cn1ccnc1",
             "[O-][n+]1ccccc1", "FC(F)(F)C", "ClC(Cl)Cl", "BrC=CBr", "IC", "N#Cc1ccccc1", "C[S-]", "[Na+].[Cl-]"]
    rows = hydrogen_fixtures(sorted(molecules) + extra)
    with open(ROOT / "tests" / "fixtures" / "hcounts.tsv", "w") as f:
        f.write("# smiles<TAB>heavy atoms<TAB>total H per atom (RDKit)\n")
        f.write("\n".join(rows) + "\n")
    with open(ROOT / "data" / "desk_samples.jsonl", "w") as f:
        f.write("\n".join(desk_samples(chosen, args.seed)) + "\n")
    print(f"{len(chosen)} reactions, {len(rows)} hydrogen fixtures")


if __name__ == "__main__":
    main()
