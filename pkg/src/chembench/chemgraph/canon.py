"""Deterministic canonical SMILES independent of input atom order.

Ranking proceeds by iterative invariant refinement: the seed invariant is
(element, degree, charge, total hydrogens, in-ring, aromatic, isotope), and
each round replaces an atom's rank with (rank, sorted (bond, neighbor rank)
pairs) until the partition stops splitting.  Cells that remain tied after
refinement are resolved by individualizing each tied atom in turn,
re-refining, and keeping the lexicographically smallest serialization, so
the result depends only on the labeled graph.  Fragments are canonicalized
separately, sorted, and joined with '.'.

Stereochemistry annotations are deliberately excluded from identity.
"""

from __future__ import annotations

from .model import Molecule
from .writer import emit_fragment


def canonical_smiles(mol: Molecule) -> str:
    pieces = [_canonical_fragment(mol, frag) for frag in mol.fragments]
    return ".".join(sorted(pieces))


def canonical_key(mol: Molecule) -> str:
    """Alias for canonical_smiles, named for use as an identity key."""
    return canonical_smiles(mol)


class _FragmentCanon:
    """Refinement state for one connected component."""

    def __init__(self, mol: Molecule, fragment: tuple[int, ...]):
        self.mol = mol
        self.fragment = fragment
        local = {a: i for i, a in enumerate(fragment)}
        self.n = len(fragment)
        # local adjacency annotated with bond codes
        self.adj: list[list[tuple[int, int]]] = [[] for _ in fragment]
        for i, a in enumerate(fragment):
            for w in mol.neighbors[a]:
                bond = mol.bond_between(a, w)
                self.adj[i].append((bond.order.value, local[w]))

    def seed_ranks(self) -> list[int]:
        keys = []
        for a in self.fragment:
            atom = self.mol.atoms[a]
            keys.append((
                atom.element,
                len(self.mol.neighbors[a]),
                atom.formal_charge,
                self.mol.implicit_hydrogens(a),
                self.mol.atom_in_ring[a],
                atom.aromatic,
                atom.isotope or 0,
            ))
        return _dense(keys)

    def refine(self, ranks: list[int]) -> list[int]:
        n_cells = len(set(ranks))
        adj = self.adj
        while True:
            keys = [
                (ranks[i],
                 tuple(sorted((code, ranks[w]) for code, w in adj[i])))
                for i in range(self.n)
            ]
            ranks = _dense(keys)
            cells = len(set(ranks))
            if cells == n_cells:
                return ranks
            n_cells = cells

    def resolve(self, ranks: list[int]) -> str:
        ranks = self.refine(ranks)
        cell = self._first_tied_cell(ranks)
        if cell is None:
            priority = [0] * len(self.mol)
            for i, a in enumerate(self.fragment):
                priority[a] = ranks[i]
            return emit_fragment(self.mol, self.fragment, priority)
        best: str | None = None
        for chosen in cell:
            # individualize: give `chosen` a fresh rank just below its cell
            split = [2 * r for r in ranks]
            split[chosen] -= 1
            candidate = self.resolve(split)
            if best is None or candidate < best:
                best = candidate
        return best

    def _first_tied_cell(self, ranks: list[int]) -> list[int] | None:
        by_rank: dict[int, list[int]] = {}
        for i, r in enumerate(ranks):
            by_rank.setdefault(r, []).append(i)
        for r in sorted(by_rank):
            if len(by_rank[r]) > 1:
                return by_rank[r]
        return None


def _dense(keys: list) -> list[int]:
    rank_of = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [rank_of[k] for k in keys]


def _canonical_fragment(mol: Molecule, fragment: tuple[int, ...]) -> str:
    state = _FragmentCanon(mol, fragment)
    return state.resolve(state.seed_ranks())
