"""Immutable molecular graph: atoms, bonds, ring perception, hydrogens.

A :class:`Molecule` is frozen after construction.  Ring membership, smallest
rings, and connected components are derived lazily from the bond graph and
cached; everything observable is a pure function of the atom and bond lists,
so molecules are safe to share across threads.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from ..elements import (
    AROMATIC_ELIGIBLE,
    default_valence,
    is_element,
)


class BondOrder(enum.IntEnum):
    SINGLE = 1
    DOUBLE = 2
    TRIPLE = 3
    AROMATIC = 4

    @property
    def valence(self) -> float:
        """Contribution to an atom's bond-order sum (aromatic counts 1.5)."""
        return 1.5 if self is BondOrder.AROMATIC else float(self.value)


class DiagnosticKind(enum.Enum):
    EMPTY_INPUT = "EmptyInput"
    UNCLOSED_RING = "UnclosedRing"
    UNCLOSED_BRANCH = "UnclosedBranch"
    UNKNOWN_ELEMENT = "UnknownElement"
    VALENCE_VIOLATION = "ValenceViolation"
    BAD_BRACKET = "BadBracket"
    BAD_SYNTAX = "BadSyntax"
    AROMATICITY = "AromaticityViolation"


@dataclass(frozen=True)
class ParseDiagnostic:
    """Why a SMILES string was rejected, anchored to a byte offset."""

    position: int
    kind: DiagnosticKind
    message: str

    def __str__(self) -> str:
        return f"{self.kind.value} at {self.position}: {self.message}"


class MoleculeError(ValueError):
    """Invalid molecule construction (violated graph invariant)."""


@dataclass(frozen=True)
class Atom:
    element: str
    aromatic: bool = False
    formal_charge: int = 0
    isotope: int | None = None
    explicit_h: int | None = None
    index: int = 0
    # stereo annotation from the source string (@ / @@); not part of identity
    chirality: str | None = None


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: BondOrder = BondOrder.SINGLE
    # directional annotation from the source string (/ or \); not identity
    direction: str | None = None

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b) if self.a < self.b else (self.b, self.a)


@dataclass(frozen=True)
class Molecule:
    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]

    def __init__(self, atoms, bonds):
        object.__setattr__(self, "atoms", tuple(atoms))
        object.__setattr__(self, "bonds", tuple(bonds))
        self._validate()

    def _validate(self) -> None:
        n = len(self.atoms)
        for i, atom in enumerate(self.atoms):
            if atom.index != i:
                raise MoleculeError(f"atom {i} carries index {atom.index}")
            if not is_element(atom.element):
                raise MoleculeError(f"unknown element {atom.element!r}")
            if atom.aromatic and atom.element not in AROMATIC_ELIGIBLE:
                raise MoleculeError(
                    f"element {atom.element} cannot be aromatic")
            if atom.explicit_h is not None and atom.explicit_h < 0:
                raise MoleculeError("negative explicit hydrogen count")
            if atom.isotope is not None and atom.isotope <= 0:
                raise MoleculeError("isotope must be positive")
        seen: set[tuple[int, int]] = set()
        for bond in self.bonds:
            if not (0 <= bond.a < n and 0 <= bond.b < n):
                raise MoleculeError("bond endpoint out of range")
            if bond.a == bond.b:
                raise MoleculeError("self bond")
            if bond.key in seen:
                raise MoleculeError(f"duplicate bond {bond.key}")
            seen.add(bond.key)
            if bond.order is BondOrder.AROMATIC and not (
                self.atoms[bond.a].aromatic and self.atoms[bond.b].aromatic
            ):
                raise MoleculeError(
                    "aromatic bond between non-aromatic atoms")
        for i, atom in enumerate(self.atoms):
            if atom.aromatic and not self.atom_in_ring[i]:
                raise MoleculeError(
                    f"aromatic atom {i} ({atom.element}) is not in a ring")

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in self.atoms]
        for bond in self.bonds:
            adj[bond.a].append(bond.b)
            adj[bond.b].append(bond.a)
        return tuple(tuple(a) for a in adj)

    @cached_property
    def bond_lookup(self) -> dict[tuple[int, int], Bond]:
        return {bond.key: bond for bond in self.bonds}

    @cached_property
    def bond_index(self) -> dict[tuple[int, int], int]:
        return {bond.key: i for i, bond in enumerate(self.bonds)}

    def bond_between(self, a: int, b: int) -> Bond | None:
        return self.bond_lookup.get((a, b) if a < b else (b, a))

    @cached_property
    def _ring_flags(self) -> tuple[tuple[bool, ...], tuple[bool, ...]]:
        ring_bonds = _non_bridge_bonds(len(self.atoms), self.bonds)
        atom_flags = [False] * len(self.atoms)
        bond_flags = [False] * len(self.bonds)
        for bi in ring_bonds:
            bond_flags[bi] = True
            atom_flags[self.bonds[bi].a] = True
            atom_flags[self.bonds[bi].b] = True
        return tuple(atom_flags), tuple(bond_flags)

    @property
    def atom_in_ring(self) -> tuple[bool, ...]:
        return self._ring_flags[0]

    @property
    def bond_in_ring(self) -> tuple[bool, ...]:
        return self._ring_flags[1]

    @cached_property
    def rings(self) -> tuple[tuple[int, ...], ...]:
        """Smallest set of smallest rings, each as a tuple of atom indices."""
        return _smallest_rings(self)

    @cached_property
    def fragments(self) -> tuple[tuple[int, ...], ...]:
        """Connected components in first-seen atom order."""
        n = len(self.atoms)
        seen = [False] * n
        out: list[tuple[int, ...]] = []
        for start in range(n):
            if seen[start]:
                continue
            comp = []
            queue = deque([start])
            seen[start] = True
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in self.neighbors[v]:
                    if not seen[w]:
                        seen[w] = True
                        queue.append(w)
            out.append(tuple(sorted(comp)))
        return tuple(out)

    def bond_order_sum(self, atom_index: int) -> int:
        """Sum of incident bond orders, aromatic as 1.5, ceiling applied."""
        total = 0.0
        for nb in self.neighbors[atom_index]:
            bond = self.bond_between(atom_index, nb)
            assert bond is not None
            total += bond.order.valence
        return math.ceil(total)

    def implicit_hydrogens(self, atom_index: int) -> int:
        """Hydrogen count: bracket override, else default valence fill."""
        atom = self.atoms[atom_index]
        if atom.explicit_h is not None:
            return atom.explicit_h
        valence = default_valence(atom.element, atom.formal_charge)
        if valence is None:
            return 0
        return max(0, valence - self.bond_order_sum(atom_index))

    @cached_property
    def net_charge(self) -> int:
        return sum(a.formal_charge for a in self.atoms)

    @cached_property
    def heavy_atom_count(self) -> int:
        return sum(1 for a in self.atoms if a.element != "H")


def _non_bridge_bonds(n_atoms: int, bonds: tuple[Bond, ...]) -> set[int]:
    """Indices of bonds lying on a cycle (iterative Tarjan bridge search)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for bi, bond in enumerate(bonds):
        adj[bond.a].append((bond.b, bi))
        adj[bond.b].append((bond.a, bi))

    disc = [-1] * n_atoms
    low = [0] * n_atoms
    bridges: set[int] = set()
    timer = 0
    for root in range(n_atoms):
        if disc[root] != -1:
            continue
        stack: list[tuple[int, int, int]] = [(root, -1, 0)]
        while stack:
            v, parent_edge, ptr = stack.pop()
            if ptr == 0:
                disc[v] = low[v] = timer
                timer += 1
            if ptr < len(adj[v]):
                stack.append((v, parent_edge, ptr + 1))
                w, ei = adj[v][ptr]
                if disc[w] == -1:
                    stack.append((w, ei, 0))
                elif ei != parent_edge:
                    low[v] = min(low[v], disc[w])
            else:
                if parent_edge != -1:
                    bond = bonds[parent_edge]
                    u = bond.a if disc[bond.a] < disc[bond.b] else bond.b
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(parent_edge)
    return {bi for bi in range(len(bonds))} - bridges


def _smallest_rings(mol: Molecule) -> tuple[tuple[int, ...], ...]:
    """Greedy SSSR: smallest cycle through each ring bond, kept until the
    cyclomatic count of the ring subgraph is covered."""
    ring_bond_idx = [i for i, f in enumerate(mol.bond_in_ring) if f]
    if not ring_bond_idx:
        return ()
    ring_atoms = {i for i, f in enumerate(mol.atom_in_ring) if f}
    n_ring_components = _count_components(ring_atoms, mol, ring_bond_idx)
    target = len(ring_bond_idx) - len(ring_atoms) + n_ring_components

    candidates: dict[frozenset[tuple[int, int]], tuple[int, ...]] = {}
    for bi in ring_bond_idx:
        cycle = _smallest_cycle_through(mol, mol.bonds[bi])
        if cycle is None:
            continue
        edges = frozenset(
            tuple(sorted((cycle[k], cycle[(k + 1) % len(cycle)])))
            for k in range(len(cycle))
        )
        candidates.setdefault(edges, cycle)

    chosen: list[tuple[int, ...]] = []
    covered: set[tuple[int, int]] = set()
    for edges, cycle in sorted(
        candidates.items(), key=lambda kv: (len(kv[1]), sorted(kv[0]))
    ):
        if len(chosen) >= target:
            break
        if edges - covered:
            chosen.append(cycle)
            covered |= edges
    return tuple(chosen)


def _count_components(
    atoms: set[int], mol: Molecule, bond_indices: list[int]
) -> int:
    adj: dict[int, list[int]] = {a: [] for a in atoms}
    for bi in bond_indices:
        bond = mol.bonds[bi]
        adj[bond.a].append(bond.b)
        adj[bond.b].append(bond.a)
    seen: set[int] = set()
    count = 0
    for start in atoms:
        if start in seen:
            continue
        count += 1
        queue = deque([start])
        seen.add(start)
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return count


def _smallest_cycle_through(mol: Molecule, bond: Bond) -> tuple[int, ...] | None:
    """Shortest path a..b avoiding the bond itself, closed into a cycle."""
    src, dst = bond.a, bond.b
    prev: dict[int, int] = {src: -1}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for w in mol.neighbors[v]:
            if v == src and w == dst:
                continue
            if w not in prev:
                prev[w] = v
                queue.append(w)
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return tuple(reversed(path))
