"""Bemis-Murcko scaffolds and scaffold-grouped dataset splitting.

The scaffold of a molecule keeps its ring systems, the linker atoms on
paths between rings, and exocyclic atoms attached to a kept atom by a
double or triple bond; everything else is pruned.  Acyclic molecules
reduce to the empty scaffold and share one group under the empty key.

Splits assign whole scaffold groups to one side so no scaffold ever spans
train and test.  Groups go largest-first; the seed shuffles the order of
equal-size groups (on top of a deterministic key-sorted base order), which
is where split-to-split variation comes from.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Hashable, Sequence

from .chemgraph.canon import canonical_smiles
from .chemgraph.model import BondOrder, Molecule
from .rng import SplitMix64


class DegenerateSplit(ValueError):
    """A single scaffold group holds every record."""


@dataclass(frozen=True)
class ScaffoldKey:
    key: str  # canonical SMILES of the scaffold; "" for acyclic molecules


@dataclass(frozen=True)
class SplitAssignment:
    train: tuple[Hashable, ...]
    test: tuple[Hashable, ...]
    seed: int
    requested_train_fraction: float

    @property
    def achieved_train_fraction(self) -> float:
        total = len(self.train) + len(self.test)
        return len(self.train) / total if total else 0.0


def murcko_scaffold(mol: Molecule) -> Molecule:
    """Ring systems plus inter-ring linkers plus multiply-bonded exocyclics."""
    keep = _scaffold_atoms(mol)
    atoms = []
    old_to_new = {}
    for old in sorted(keep):
        atom = mol.atoms[old]
        old_to_new[old] = len(atoms)
        atoms.append(dataclasses.replace(atom, index=len(atoms)))
    bonds = [
        dataclasses.replace(b, a=old_to_new[b.a], b=old_to_new[b.b])
        for b in mol.bonds
        if b.a in keep and b.b in keep
    ]
    return Molecule(atoms=atoms, bonds=bonds)


def _scaffold_atoms(mol: Molecule) -> set[int]:
    if not any(mol.atom_in_ring):
        return set()
    # prune leaves that are not in rings until only rings and the paths
    # between them remain
    degree = [len(mol.neighbors[i]) for i in range(len(mol))]
    removed = [False] * len(mol)
    frontier = [
        i for i in range(len(mol))
        if degree[i] <= 1 and not mol.atom_in_ring[i]
    ]
    while frontier:
        nxt = []
        for i in frontier:
            if removed[i]:
                continue
            removed[i] = True
            for w in mol.neighbors[i]:
                if removed[w]:
                    continue
                degree[w] -= 1
                if degree[w] <= 1 and not mol.atom_in_ring[w]:
                    nxt.append(w)
        frontier = nxt
    core = {i for i in range(len(mol)) if not removed[i]}
    # re-attach atoms held by a double or triple bond, transitively
    changed = True
    while changed:
        changed = False
        for bond in mol.bonds:
            if bond.order not in (BondOrder.DOUBLE, BondOrder.TRIPLE):
                continue
            if (bond.a in core) != (bond.b in core):
                core.add(bond.a)
                core.add(bond.b)
                changed = True
    return core


def scaffold_key(mol: Molecule) -> ScaffoldKey:
    scaffold = murcko_scaffold(mol)
    if len(scaffold) == 0:
        return ScaffoldKey(key="")
    return ScaffoldKey(key=canonical_smiles(scaffold))


def scaffold_split(
    records: Sequence[tuple[Hashable, Molecule]],
    train_fraction: float,
    seed: int,
    keys: Sequence[ScaffoldKey] | None = None,
) -> SplitAssignment:
    """Group records by scaffold key and assign whole groups to sides.

    ``keys`` may carry precomputed scaffold keys aligned with ``records``
    to avoid recanonicalizing when splitting the same set repeatedly.
    """
    if not records:
        raise ValueError("records must be nonempty")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    if keys is None:
        keys = [scaffold_key(mol) for _, mol in records]
    elif len(keys) != len(records):
        raise ValueError("keys must align with records")

    groups: dict[str, list[Hashable]] = {}
    for (rid, _), key in zip(records, keys):
        groups.setdefault(key.key, []).append(rid)
    if len(groups) == 1:
        raise DegenerateSplit(
            "all records share one scaffold; both sides cannot be nonempty")

    # deterministic base order, then seeded shuffle within equal sizes
    ordered = sorted(groups.items(), key=lambda kv: (-len(kv[1]), kv[0]))
    rng = SplitMix64(seed)
    result: list[tuple[str, list[Hashable]]] = []
    i = 0
    while i < len(ordered):
        j = i
        while j < len(ordered) and len(ordered[j][1]) == len(ordered[i][1]):
            j += 1
        block = ordered[i:j]
        rng.shuffle(block)
        result.extend(block)
        i = j

    total = len(records)
    target = train_fraction * total
    train: list[Hashable] = []
    test: list[Hashable] = []
    for _, members in result:
        if len(train) + len(members) <= target:
            train.extend(members)
        else:
            test.extend(members)
    if not train:
        # every group overshoots the target; concede the smallest one
        train.extend(result[-1][1])
        test = [rid for _, members in result[:-1] for rid in members]
    return SplitAssignment(
        train=tuple(train),
        test=tuple(test),
        seed=seed,
        requested_train_fraction=train_fraction,
    )
