"""Synthetic benchmark datasets for every task kind.

Gold answers are constructed to be consistent with the toolkit's own
chemistry (formulas computed, canonical forms reachable), so an echo-gold
endpoint must score 100% on every accuracy-type metric.  Labels alternate
so both classes always survive sampling.
"""

from __future__ import annotations

import json
from pathlib import Path

from chembench.chemgraph import mol_from_smiles, molecular_formula
from chembench.harness.tasks import Instance, TaskKind

from corpus import fixture_smiles

_WORDS = (
    "stable", "volatile", "aromatic", "cyclic", "polar", "chiral",
    "soluble", "crystalline", "basic", "acidic", "inert", "reactive",
)


def _molecules(n: int) -> list[str]:
    pool = [s for s in fixture_smiles() if "." not in s]
    assert len(pool) >= n
    return list(pool[:n])


def _name(i: int) -> str:
    return f"synthetic compound number {i:03d}"


def _description(smiles: str, i: int) -> str:
    mol = mol_from_smiles(smiles)
    w1 = _WORDS[i % len(_WORDS)]
    w2 = _WORDS[(i * 5 + 3) % len(_WORDS)]
    return (f"A {w1} and {w2} molecule with formula "
            f"{molecular_formula(mol)} and {len(mol)} heavy atoms, "
            f"catalog entry {i:03d}.")


def build_instances(kind: TaskKind, n: int = 120,
                    variant: str = "") -> list[Instance]:
    smiles = _molecules(n + 8)
    out: list[Instance] = []
    for i in range(n):
        iid = f"{kind.value}-{i:04d}"
        smi = smiles[i]
        if kind is TaskKind.S2I:
            inst = Instance(iid, {"smiles": smi}, _name(i))
        elif kind is TaskKind.I2S:
            inst = Instance(iid, {"iupac": _name(i)}, smi)
        elif kind is TaskKind.S2MF:
            inst = Instance(
                iid, {"smiles": smi},
                molecular_formula(mol_from_smiles(smi)))
        elif kind is TaskKind.I2MF:
            inst = Instance(
                iid, {"iupac": _name(i)},
                molecular_formula(mol_from_smiles(smi)))
        elif kind is TaskKind.CAPTIONING:
            inst = Instance(iid, {"smiles": smi}, _description(smi, i))
        elif kind is TaskKind.MOLECULE_DESIGN:
            inst = Instance(iid, {"description": _description(smi, i)}, smi)
        elif kind is TaskKind.PROPERTY:
            task_name = "assay-A" if i % 2 == 0 else "assay-B"
            label = "Yes" if i % 3 != 0 else "No"
            inst = Instance(
                iid,
                {"smiles": smi, "question": f"active in {task_name}"},
                {"label": label, "task_name": task_name})
        elif kind is TaskKind.YIELD:
            reaction = f"{smi}.{smiles[i + 1]}>>{smiles[i + 2]}"
            inst = Instance(iid, {"reaction": reaction},
                            "Yes" if i % 2 == 0 else "No")
        elif kind is TaskKind.REACTION_PREDICTION:
            reaction = f"{smi}.{smiles[i + 1]}>>"
            inst = Instance(iid, {"reaction": reaction}, smiles[i + 2])
        elif kind is TaskKind.RETROSYNTHESIS:
            product = smi
            reactants = f"{smiles[i + 1]}.{smiles[i + 2]}"
            inst = Instance(iid, {"product": product}, reactants)
        elif kind is TaskKind.REAGENT_SELECTION:
            candidates = [smiles[i], smiles[i + 1],
                          smiles[i + 2], smiles[i + 3]]
            if variant == "ligand":
                ranked = [candidates[(i + k) % 4] for k in range(4)]
                inst = Instance(
                    iid,
                    {"question": "Pick the ligand giving the best yield.",
                     "candidates": candidates},
                    {"ranked_candidates": ranked})
            else:
                inst = Instance(
                    iid,
                    {"question": "Pick the best reactant.",
                     "candidates": candidates},
                    {"answer": candidates[i % 4]})
        else:  # pragma: no cover
            raise AssertionError(kind)
        out.append(inst)
    return out


def write_dataset(path: Path, instances: list[Instance]) -> Path:
    with open(path, "w", encoding="utf-8") as handle:
        for inst in instances:
            handle.write(json.dumps({
                "id": inst.id,
                "prompt_fields": inst.prompt_fields,
                "reference": inst.reference,
            }, ensure_ascii=False, sort_keys=True) + "\n")
    return path


def dataset_file(tmp_path: Path, kind: TaskKind, n: int = 120,
                 variant: str = "") -> Path:
    tmp_path.mkdir(parents=True, exist_ok=True)
    path = tmp_path / f"{kind.value}{('-' + variant) if variant else ''}.jsonl"
    return write_dataset(path, build_instances(kind, n, variant))
