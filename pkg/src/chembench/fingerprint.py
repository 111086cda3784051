"""Bit fingerprints for Tanimoto similarity: circular, path, and key based.

All hashing uses 64-bit FNV-1a over fully specified byte layouts, so bit
vectors are identical across platforms and processes.

Circular (Morgan-style) identifiers
    id0(atom) = fnv1a64 of the byte tuple (atomic number, heavy degree,
    total hydrogens, charge+128, in-ring, aromatic), one unsigned byte each.
    id_r(atom) = fnv1a64 of id_{r-1} as 8 big-endian bytes followed by the
    lexicographically sorted (bond code, neighbor id_{r-1} big-endian) pairs
    with bond codes 1/2/3/4 for single/double/triple/aromatic.  An atom with
    no heavy neighbors keeps its identifier across radii (its environment
    cannot grow).  The feature set deduplicates identifier values over all
    atoms and all radii 0..radius; each feature sets bit (id mod nbits).

Path fingerprints hash every simple path of 1..max_len bonds, written as
alternating atom symbols (lowercase when aromatic) and bond symbols
``- = # :``, reading the direction that is lexicographically smaller.

Key fingerprints evaluate the documented predicate table in ``KEY_TABLE``
(version ``keys-v1``), one bit per predicate in table order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

from .chemgraph.model import BondOrder, Molecule
from .elements import ATOMIC_NUMBER, HALOGENS

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_M64 = (1 << 64) - 1


def fnv1a64(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _M64
    return h


class FingerprintKind(enum.Enum):
    MORGAN = "morgan"
    PATH = "path"
    KEYS = "keys"


class KindMismatch(ValueError):
    """Tanimoto between fingerprints of different kind or width."""


@dataclass(frozen=True)
class BitFingerprint:
    kind: FingerprintKind
    width: int
    bits: int  # bit i set <=> (bits >> i) & 1

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bit vector exceeds declared width")

    @property
    def popcount(self) -> int:
        return self.bits.bit_count()

    def on_bits(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.width) if (self.bits >> i) & 1)

    def hex(self) -> str:
        return format(self.bits, f"0{self.width // 4}x")

    @classmethod
    def from_hex(cls, kind: FingerprintKind, width: int, text: str
                 ) -> "BitFingerprint":
        return cls(kind=kind, width=width, bits=int(text, 16))


def _check_pow2(nbits: int) -> None:
    if nbits <= 0 or nbits & (nbits - 1):
        raise ValueError("nbits must be a power of two")


def _heavy_neighbors(mol: Molecule, idx: int) -> list[int]:
    return [w for w in mol.neighbors[idx] if mol.atoms[w].element != "H"]


def morgan_identifiers(mol: Molecule, radius: int = 2) -> frozenset[int]:
    """Deduplicated circular identifiers over radii 0..radius (pre-fold)."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    ids = []
    for i, atom in enumerate(mol.atoms):
        ids.append(fnv1a64(bytes((
            ATOMIC_NUMBER[atom.element] & 0xFF,
            len(_heavy_neighbors(mol, i)) & 0xFF,
            mol.implicit_hydrogens(i) & 0xFF,
            (atom.formal_charge + 128) & 0xFF,
            1 if mol.atom_in_ring[i] else 0,
            1 if atom.aromatic else 0,
        ))))
    features = set(ids)
    for _ in range(radius):
        nxt = list(ids)
        for i in range(len(mol)):
            pairs = []
            for w in _heavy_neighbors(mol, i):
                bond = mol.bond_between(i, w)
                pairs.append(bytes((bond.order.value,))
                             + ids[w].to_bytes(8, "big"))
            if not pairs:
                continue  # isolated environment cannot grow
            pairs.sort()
            nxt[i] = fnv1a64(ids[i].to_bytes(8, "big") + b"".join(pairs))
        ids = nxt
        features.update(ids)
    return frozenset(features)


def morgan_fingerprint(
    mol: Molecule, radius: int = 2, nbits: int = 2048
) -> BitFingerprint:
    _check_pow2(nbits)
    bits = 0
    for ident in morgan_identifiers(mol, radius):
        bits |= 1 << (ident % nbits)
    return BitFingerprint(FingerprintKind.MORGAN, nbits, bits)


_PATH_BOND_SYMBOL = {
    BondOrder.SINGLE: "-",
    BondOrder.DOUBLE: "=",
    BondOrder.TRIPLE: "#",
    BondOrder.AROMATIC: ":",
}


def path_strings(mol: Molecule, max_len: int = 7) -> frozenset[str]:
    """Canonical encodings of all simple paths of 1..max_len bonds."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")

    def symbol(i: int) -> str:
        atom = mol.atoms[i]
        return atom.element.lower() if atom.aromatic else atom.element

    out: set[str] = set()
    n = len(mol)
    for start in range(n):
        # depth-first over simple paths rooted at start
        stack: list[tuple[list[int], list[str]]] = [([start], [])]
        while stack:
            atoms, bonds = stack.pop()
            if bonds:
                forward = "".join(
                    s for pair in zip(map(symbol, atoms), bonds + [""])
                    for s in pair
                )
                backward = "".join(
                    s for pair in zip(map(symbol, reversed(atoms)),
                                      list(reversed(bonds)) + [""])
                    for s in pair
                )
                out.add(min(forward, backward))
            if len(bonds) == max_len:
                continue
            last = atoms[-1]
            for w in mol.neighbors[last]:
                if w in atoms:
                    continue
                bond = mol.bond_between(last, w)
                stack.append(
                    (atoms + [w], bonds + [_PATH_BOND_SYMBOL[bond.order]]))
    return frozenset(out)


def path_fingerprint(
    mol: Molecule, max_len: int = 7, nbits: int = 2048
) -> BitFingerprint:
    _check_pow2(nbits)
    bits = 0
    for encoded in path_strings(mol, max_len):
        bits |= 1 << (fnv1a64(encoded.encode("utf-8")) % nbits)
    return BitFingerprint(FingerprintKind.PATH, nbits, bits)


# --- structural keys ---------------------------------------------------------

KEYS_VERSION = "keys-v1"


def _has_element(symbol: str) -> Callable[[Molecule], bool]:
    return lambda mol: any(a.element == symbol for a in mol.atoms)


def _ring_count_at_least(n: int) -> Callable[[Molecule], bool]:
    return lambda mol: len(mol.rings) >= n


def _ring_of_size(n: int) -> Callable[[Molecule], bool]:
    return lambda mol: any(len(r) == n for r in mol.rings)


def _heavy_at_least(n: int) -> Callable[[Molecule], bool]:
    return lambda mol: mol.heavy_atom_count >= n


def _bond_order_present(order: BondOrder) -> Callable[[Molecule], bool]:
    return lambda mol: any(b.order is order for b in mol.bonds)


def _carbonyl(mol: Molecule) -> bool:
    return _double_to_oxygen_carbons(mol) != set()


def _double_to_oxygen_carbons(mol: Molecule) -> set[int]:
    found = set()
    for b in mol.bonds:
        if b.order is not BondOrder.DOUBLE:
            continue
        pair = {mol.atoms[b.a].element: b.a, mol.atoms[b.b].element: b.b}
        if set(pair) == {"C", "O"}:
            found.add(pair["C"])
    return found


def _hydroxyl(mol: Molecule) -> bool:
    for i, atom in enumerate(mol.atoms):
        if atom.element != "O" or atom.aromatic:
            continue
        if mol.implicit_hydrogens(i) < 1:
            continue
        for w in mol.neighbors[i]:
            bond = mol.bond_between(i, w)
            if mol.atoms[w].element == "C" and bond.order is BondOrder.SINGLE:
                return True
    return False


def _carboxylic_acid(mol: Molecule) -> bool:
    for c in _double_to_oxygen_carbons(mol):
        for w in mol.neighbors[c]:
            bond = mol.bond_between(c, w)
            if (
                mol.atoms[w].element == "O"
                and bond.order is BondOrder.SINGLE
                and mol.implicit_hydrogens(w) >= 1
            ):
                return True
    return False


def _amine_with_heavy_degree(degree: int) -> Callable[[Molecule], bool]:
    def predicate(mol: Molecule) -> bool:
        for i, atom in enumerate(mol.atoms):
            if atom.element != "N" or atom.aromatic or atom.formal_charge:
                continue
            nbrs = _heavy_neighbors(mol, i)
            if len(nbrs) != degree:
                continue
            if not all(
                mol.atoms[w].element == "C"
                and mol.bond_between(i, w).order is BondOrder.SINGLE
                for w in nbrs
            ):
                continue
            if mol.implicit_hydrogens(i) == 3 - degree:
                return True
        return False
    return predicate


def _nitrile(mol: Molecule) -> bool:
    for b in mol.bonds:
        if b.order is BondOrder.TRIPLE:
            elements = {mol.atoms[b.a].element, mol.atoms[b.b].element}
            if elements == {"C", "N"}:
                return True
    return False


def _nitro(mol: Molecule) -> bool:
    for i, atom in enumerate(mol.atoms):
        if atom.element != "N":
            continue
        oxygens = [w for w in mol.neighbors[i]
                   if mol.atoms[w].element == "O"]
        if len(oxygens) < 2:
            continue
        if any(mol.bond_between(i, w).order is BondOrder.DOUBLE
               for w in oxygens):
            return True
    return False


def _ether(mol: Molecule) -> bool:
    for i, atom in enumerate(mol.atoms):
        if atom.element != "O" or atom.aromatic:
            continue
        if mol.implicit_hydrogens(i) != 0:
            continue
        nbrs = _heavy_neighbors(mol, i)
        if len(nbrs) == 2 and all(
            mol.atoms[w].element == "C"
            and mol.bond_between(i, w).order is BondOrder.SINGLE
            for w in nbrs
        ):
            return True
    return False


def _thiol(mol: Molecule) -> bool:
    for i, atom in enumerate(mol.atoms):
        if atom.element != "S" or atom.aromatic:
            continue
        if mol.implicit_hydrogens(i) < 1:
            continue
        for w in mol.neighbors[i]:
            if (mol.atoms[w].element == "C"
                    and mol.bond_between(i, w).order is BondOrder.SINGLE):
                return True
    return False


def _aromatic_atom(symbol: str) -> Callable[[Molecule], bool]:
    return lambda mol: any(
        a.element == symbol and a.aromatic for a in mol.atoms)


def _aromatic_ring(mol: Molecule) -> bool:
    for ring in mol.rings:
        if all(mol.atoms[i].aromatic for i in ring):
            return True
    return False


def _fused_rings(mol: Molecule) -> bool:
    edge_sets = []
    for ring in mol.rings:
        edges = set()
        for k in range(len(ring)):
            a, b = ring[k], ring[(k + 1) % len(ring)]
            edges.add((a, b) if a < b else (b, a))
        edge_sets.append(edges)
    for i in range(len(edge_sets)):
        for j in range(i + 1, len(edge_sets)):
            if edge_sets[i] & edge_sets[j]:
                return True
    return False


#: versioned predicate table; bit i of a keys fingerprint is KEY_TABLE[i][1]
KEY_TABLE: tuple[tuple[str, Callable[[Molecule], bool]], ...] = (
    ("nitrogen", _has_element("N")),
    ("oxygen", _has_element("O")),
    ("sulfur", _has_element("S")),
    ("phosphorus", _has_element("P")),
    ("halogen", lambda mol: any(a.element in HALOGENS for a in mol.atoms)),
    ("fluorine", _has_element("F")),
    ("chlorine", _has_element("Cl")),
    ("bromine", _has_element("Br")),
    ("iodine", _has_element("I")),
    ("boron", _has_element("B")),
    ("charged", lambda mol: any(a.formal_charge for a in mol.atoms)),
    ("positive_charge", lambda mol: any(
        a.formal_charge > 0 for a in mol.atoms)),
    ("negative_charge", lambda mol: any(
        a.formal_charge < 0 for a in mol.atoms)),
    ("isotope", lambda mol: any(a.isotope for a in mol.atoms)),
    ("ring1", _ring_count_at_least(1)),
    ("ring2", _ring_count_at_least(2)),
    ("ring3", _ring_count_at_least(3)),
    ("aromatic_ring", _aromatic_ring),
    ("ring_size3", _ring_of_size(3)),
    ("ring_size4", _ring_of_size(4)),
    ("ring_size5", _ring_of_size(5)),
    ("ring_size6", _ring_of_size(6)),
    ("ring_size7", _ring_of_size(7)),
    ("fused_rings", _fused_rings),
    ("double_bond", _bond_order_present(BondOrder.DOUBLE)),
    ("triple_bond", _bond_order_present(BondOrder.TRIPLE)),
    ("carbonyl", _carbonyl),
    ("hydroxyl", _hydroxyl),
    ("carboxylic_acid", _carboxylic_acid),
    ("primary_amine", _amine_with_heavy_degree(1)),
    ("secondary_amine", _amine_with_heavy_degree(2)),
    ("tertiary_amine", _amine_with_heavy_degree(3)),
    ("nitrile", _nitrile),
    ("nitro", _nitro),
    ("ether", _ether),
    ("thiol", _thiol),
    ("aromatic_nitrogen", _aromatic_atom("N")),
    ("aromatic_oxygen", _aromatic_atom("O")),
    ("aromatic_sulfur", _aromatic_atom("S")),
    ("heavy10", _heavy_at_least(10)),
    ("heavy20", _heavy_at_least(20)),
    ("heavy30", _heavy_at_least(30)),
)

KEY_NAMES = tuple(name for name, _ in KEY_TABLE)


def key_fingerprint(mol: Molecule) -> BitFingerprint:
    bits = 0
    for i, (_, predicate) in enumerate(KEY_TABLE):
        if predicate(mol):
            bits |= 1 << i
    return BitFingerprint(FingerprintKind.KEYS, len(KEY_TABLE), bits)


def compute_fingerprint(mol: Molecule, kind: FingerprintKind,
                        **kwargs) -> BitFingerprint:
    if kind is FingerprintKind.MORGAN:
        return morgan_fingerprint(mol, **kwargs)
    if kind is FingerprintKind.PATH:
        return path_fingerprint(mol, **kwargs)
    return key_fingerprint(mol)


def tanimoto(a: BitFingerprint, b: BitFingerprint) -> float:
    """|a AND b| / |a OR b|; 1.0 when both vectors are all-zero."""
    if a.kind is not b.kind or a.width != b.width:
        raise KindMismatch(
            f"cannot compare {a.kind.value}/{a.width} "
            f"with {b.kind.value}/{b.width}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 1.0
    return (a.bits & b.bits).bit_count() / union
