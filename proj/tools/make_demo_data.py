#!/usr/bin/env python3
"""Regenerates the demo dataset and toy candidate lists under data/demo."""

import json
import pathlib
import random

MOLECULES = [
    ("aspirin", "CC(=O)Oc1ccccc1C(=O)O", "an acetylated salicylic acid used as an analgesic"),
    ("caffeine", "Cn1cnc2c1c(=O)n(C)c(=O)n2C", "a trimethylated xanthine alkaloid and stimulant"),
    ("ethanol", "CCO", "a two-carbon primary alcohol"),
    ("benzoic_acid", "OC(=O)c1ccccc1", "the simplest aromatic carboxylic acid"),
    ("acetone", "CC(C)=O", "the simplest ketone, a common solvent"),
    ("phenol", "Oc1ccccc1", "a hydroxybenzene"),
    ("toluene", "Cc1ccccc1", "methylbenzene"),
    ("pyridine", "c1ccncc1", "a six-membered aromatic ring with one nitrogen"),
    ("glycine", "NCC(=O)O", "the simplest amino acid"),
    ("alanine", "CC(N)C(=O)O", "an amino acid with a methyl side chain"),
    ("acetic_acid", "CC(=O)O", "a two-carbon carboxylic acid found in vinegar"),
    ("ibuprofen", "CC(C)Cc1ccc(cc1)C(C)C(=O)O", "an isobutylphenyl propanoic acid analgesic"),
    ("paracetamol", "CC(=O)Nc1ccc(O)cc1", "a para-hydroxy acetanilide analgesic"),
    ("naphthalene", "c1ccc2ccccc2c1", "two fused benzene rings"),
    ("cyclohexane", "C1CCCCC1", "a saturated six-membered carbocycle"),
    ("urea", "NC(=O)N", "a carbonyl with two amino groups"),
    ("aniline", "Nc1ccccc1", "aminobenzene"),
    ("styrene", "C=Cc1ccccc1", "vinylbenzene, a polymer precursor"),
]
INVALID = ["C(C)(C)(C)(C)C", "c1cccc1", "CC(=O)(=O)C", "N(C)(C)(C)C"]


def reasoning(name, desc):
    return (f"The description mentions {desc}. I identify the scaffold, place each "
            f"functional group on it, and check every valence before writing the answer for {name}.")


def completion(name, desc, smiles):
    return f"<think>\n{reasoning(name, desc)}\n</think>\n\n{json.dumps({'molecule': smiles})}"


def main():
    rng = random.Random(7)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "demo"
    out.mkdir(parents=True, exist_ok=True)
    records, candidates = [], []
    for i, (name, smiles, desc) in enumerate(MOLECULES[:16]):
        k = 1 + i % 2
        success = (i // 2) % 2 == 0
        others = [m for m in MOLECULES if m[0] != name]
        examples = rng.sample(others, k)
        rec = {
            "id": f"demo-{i:02d}",
            "caption": f"The molecule is {desc}.",
            "ground_truth_smiles": smiles,
            "examples": [{"caption": f"The molecule is {e[2]}.", "smiles": e[1]} for e in examples],
        }
        if success:
            rec["cot"] = reasoning(name, desc)
        rec["success"] = success
        records.append(rec)
        wrong = rng.sample([m for m in others if m not in examples], 3)
        cands = [completion(name, desc, smiles)]
        cands += [completion(name, desc, m[1]) for m in wrong]
        cands += [completion(name, desc, s) for s in rng.sample(INVALID, 2)]
        candidates.append({"id": rec["id"], "candidates": cands})

    with open(out / "records.jsonl", "w") as f:
        for r in records:
            f.write(json.dumps(r) + "\n")
    with open(out / "candidates.jsonl", "w") as f:
        for c in candidates:
            f.write(json.dumps(c) + "\n")

    broken = [dict(records[0]), dict(records[1]), dict(records[2])]
    broken[1] = dict(broken[1], id=broken[0]["id"])
    broken[2] = dict(broken[2], id="demo-bad", ground_truth_smiles="C(C)(C)(C)(C)C")
    with open(out / "records_with_rejects.jsonl", "w") as f:
        for r in broken:
            f.write(json.dumps(r) + "\n")


if __name__ == "__main__":
    main()
