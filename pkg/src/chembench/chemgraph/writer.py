"""SMILES emission from a molecular graph.

:func:`write_smiles` serializes in input atom order; the canonical module
reuses :func:`emit_fragment` with its own atom priorities.  Stereo and bond
direction annotations are dropped on output (they are not part of graph
identity here).

A bond symbol is omitted whenever the reader's default resolution for that
position reproduces the actual order: aromatic for an in-ring bond between
two aromatic atoms, single otherwise.
"""

from __future__ import annotations

from ..elements import AROMATIC_ORGANIC, ORGANIC_SUBSET, default_valence
from .model import Bond, BondOrder, Molecule

_BOND_TOKEN = {
    BondOrder.SINGLE: "-",
    BondOrder.DOUBLE: "=",
    BondOrder.TRIPLE: "#",
    BondOrder.AROMATIC: ":",
}


def write_smiles(mol: Molecule) -> str:
    """Serialize in input atom order; fragments joined by '.'."""
    priority = list(range(len(mol)))
    return ".".join(
        emit_fragment(mol, frag, priority) for frag in mol.fragments
    )


def atom_token(mol: Molecule, idx: int) -> str:
    """Shortest token that re-parses to the same atom state."""
    atom = mol.atoms[idx]
    hydrogens = mol.implicit_hydrogens(idx)
    bare_symbol = atom.element.lower() if atom.aromatic else atom.element
    can_be_bare = (
        atom.element in ORGANIC_SUBSET
        and atom.formal_charge == 0
        and atom.isotope is None
        and (not atom.aromatic or bare_symbol in AROMATIC_ORGANIC)
    )
    if can_be_bare:
        if atom.explicit_h is None:
            return bare_symbol
        valence = default_valence(atom.element, 0)
        refill = max(0, (valence or 0) - mol.bond_order_sum(idx))
        if refill == hydrogens:
            return bare_symbol
    parts = ["["]
    if atom.isotope is not None:
        parts.append(str(atom.isotope))
    parts.append(bare_symbol if atom.aromatic else atom.element)
    if hydrogens == 1:
        parts.append("H")
    elif hydrogens > 1:
        parts.append(f"H{hydrogens}")
    q = atom.formal_charge
    if q == 1:
        parts.append("+")
    elif q == -1:
        parts.append("-")
    elif q > 1:
        parts.append(f"+{q}")
    elif q < -1:
        parts.append(f"-{-q}")
    parts.append("]")
    return "".join(parts)


def _bond_token(mol: Molecule, a: int, b: int) -> str:
    bond = mol.bond_between(a, b)
    assert bond is not None
    in_ring = mol.bond_in_ring[mol.bond_index[bond.key]]
    both_aromatic = mol.atoms[a].aromatic and mol.atoms[b].aromatic
    default = (
        BondOrder.AROMATIC if (both_aromatic and in_ring) else BondOrder.SINGLE
    )
    if bond.order is default:
        return ""
    return _BOND_TOKEN[bond.order]


def emit_fragment(
    mol: Molecule, fragment: tuple[int, ...], priority: list[int]
) -> str:
    """Emit one connected component, visiting atoms by ascending priority."""
    start = min(fragment, key=lambda a: (priority[a], a))

    # pass 1: DFS discovery order, tree children, ring (back) edges
    disc: dict[int, int] = {}
    children: dict[int, list[int]] = {a: [] for a in fragment}
    ring_partners: dict[int, list[int]] = {a: [] for a in fragment}
    parent: dict[int, int | None] = {start: None}
    seen_ring: set[tuple[int, int]] = set()
    stack: list[tuple[int, list[int], int]] = []
    disc[start] = 0
    clock = 1
    order = sorted(mol.neighbors[start], key=lambda w: (priority[w], w))
    stack.append((start, order, 0))
    while stack:
        v, nbrs, ptr = stack.pop()
        if ptr < len(nbrs):
            stack.append((v, nbrs, ptr + 1))
            w = nbrs[ptr]
            if w not in disc:
                disc[w] = clock
                clock += 1
                parent[w] = v
                children[v].append(w)
                worder = sorted(
                    mol.neighbors[w], key=lambda x: (priority[x], x))
                stack.append((w, worder, 0))
            elif w != parent[v]:
                key = (v, w) if v < w else (w, v)
                if key not in seen_ring:
                    seen_ring.add(key)
                    ring_partners[v].append(w)
                    ring_partners[w].append(v)

    # pass 2: token emission with ring-closure digit allocation
    tokens: list[str] = []
    digit_of: dict[tuple[int, int], int] = {}
    free: list[int] = []
    next_digit = 1

    def digit_token(n: int) -> str:
        return str(n) if n < 10 else f"%{n:02d}"

    emit_stack: list[tuple[str, int, int | None]] = [("atom", start, None)]
    while emit_stack:
        op, v, via = emit_stack.pop()
        if op == "(":
            tokens.append("(")
            continue
        if op == ")":
            tokens.append(")")
            continue
        if via is not None:
            tokens.append(_bond_token(mol, via, v))
        tokens.append(atom_token(mol, v))
        for w in sorted(ring_partners[v], key=lambda x: disc[x]):
            key = (v, w) if v < w else (w, v)
            if key in digit_of:
                n = digit_of.pop(key)
                tokens.append(digit_token(n))
                free.append(n)
            else:
                if free:
                    free.sort()
                    n = free.pop(0)
                else:
                    n = next_digit
                    next_digit += 1
                if n > 99:
                    raise ValueError("more than 99 simultaneous ring closures")
                digit_of[key] = n
                tokens.append(_bond_token(mol, v, w) + digit_token(n))
        kids = children[v]
        if kids:
            last = kids[-1]
            emit_stack.append(("atom", last, v))
            for c in reversed(kids[:-1]):
                emit_stack.append((")", -1, None))
                emit_stack.append(("atom", c, v))
                emit_stack.append(("(", -1, None))
    return "".join(tokens)
