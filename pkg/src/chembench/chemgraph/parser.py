"""SMILES reader producing an immutable Molecule or a ParseDiagnostic.

Total over arbitrary input: every failure path returns a diagnostic with a
byte offset, never an exception.  Supported syntax: organic-subset and
bracket atoms (isotope, chirality, hydrogen count, charge, atom class),
bond symbols ``- = # :`` plus the directional ``/ \\`` pair, branches,
ring closures (``1``..``9`` and ``%nn``), and dot-separated fragments.
Chirality and bond direction are recorded as annotations only.

Aromaticity is taken from the input (lowercase atoms, ``:`` bonds) and
validated against ring membership; no perception or kekulization is done.
An unmarked bond is aromatic when both endpoints are aromatic and the bond
lies in a ring, single otherwise, so the biphenyl linker stays single.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..elements import (
    AROMATIC_ELIGIBLE,
    AROMATIC_ORGANIC,
    ORGANIC_SUBSET,
    is_element,
    max_valence,
)
from .model import (
    Atom,
    Bond,
    BondOrder,
    DiagnosticKind,
    Molecule,
    MoleculeError,
    ParseDiagnostic,
    _non_bridge_bonds,
)

_BOND_SYMBOLS = {
    "-": BondOrder.SINGLE,
    "=": BondOrder.DOUBLE,
    "#": BondOrder.TRIPLE,
    ":": BondOrder.AROMATIC,
    "/": BondOrder.SINGLE,
    "\\": BondOrder.SINGLE,
}

_MAX_RING_CLOSURES = 100

_ASCII_DIGITS = "0123456789"


class SmilesParseError(ValueError):
    """Raised by :func:`mol_from_smiles` when parsing fails."""

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass
class _PendingAtom:
    atom: Atom
    position: int


@dataclass
class _RawBond:
    a: int
    b: int
    order: BondOrder | None  # None: resolve from aromaticity and rings
    direction: str | None
    position: int


class _Fail(Exception):
    def __init__(self, diagnostic: ParseDiagnostic):
        self.diagnostic = diagnostic


def parse_smiles(text: str) -> Molecule | ParseDiagnostic:
    """Parse a SMILES string; never raises on bad input."""
    try:
        return _Parser(text).run()
    except _Fail as exc:
        return exc.diagnostic


def mol_from_smiles(text: str) -> Molecule:
    """Parse a SMILES string, raising :class:`SmilesParseError` on failure."""
    result = parse_smiles(text)
    if isinstance(result, ParseDiagnostic):
        raise SmilesParseError(result)
    return result


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.atoms: list[_PendingAtom] = []
        self.raw_bonds: list[_RawBond] = []
        self.bond_keys: set[tuple[int, int]] = set()
        # atom index waiting for the next atom/ring closure to bond to
        self.prev: int | None = None
        # pending explicit bond symbol (order, direction, position)
        self.pending_bond: tuple[BondOrder, str | None, int] | None = None
        # open branch stack: saved `prev` indices with '(' positions
        self.branch_stack: list[tuple[int | None, int]] = []
        # ring number -> (atom index, pending order or None, direction, pos)
        self.open_rings: dict[int, tuple[int, BondOrder | None, str | None, int]] = {}

    def fail(self, kind: DiagnosticKind, message: str, position: int | None = None):
        pos = self.pos if position is None else position
        raise _Fail(ParseDiagnostic(min(pos, len(self.text)), kind, message))

    def run(self) -> Molecule:
        if self.text == "":
            self.fail(DiagnosticKind.EMPTY_INPUT, "empty SMILES input", 0)
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "(":
                if self.prev is None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "branch before any atom")
                if self.pending_bond is not None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "bond symbol before '('")
                self.branch_stack.append((self.prev, self.pos))
                self.pos += 1
            elif ch == ")":
                if not self.branch_stack:
                    self.fail(DiagnosticKind.UNCLOSED_BRANCH,
                              "unmatched ')'")
                if self.pending_bond is not None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "dangling bond before ')'")
                restored, opened_at = self.branch_stack.pop()
                if self.prev == restored:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "empty branch", opened_at)
                self.prev = restored
                self.pos += 1
            elif ch == ".":
                if self.prev is None or self.pending_bond is not None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "misplaced fragment separator")
                if self.branch_stack:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "fragment separator inside branch")
                self.prev = None
                self.pos += 1
            elif ch in _BOND_SYMBOLS:
                if self.pending_bond is not None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "two consecutive bond symbols")
                if self.prev is None:
                    self.fail(DiagnosticKind.BAD_SYNTAX,
                              "bond symbol before any atom")
                direction = ch if ch in "/\\" else None
                self.pending_bond = (_BOND_SYMBOLS[ch], direction, self.pos)
                self.pos += 1
            elif ch in _ASCII_DIGITS or ch == "%":
                self.ring_closure()
            elif ch == "[":
                self.bracket_atom()
            else:
                self.organic_atom()
        if self.branch_stack:
            self.fail(DiagnosticKind.UNCLOSED_BRANCH,
                      "unclosed '('", self.branch_stack[-1][1])
        if self.pending_bond is not None:
            self.fail(DiagnosticKind.BAD_SYNTAX,
                      "dangling bond at end of input", self.pending_bond[2])
        if self.open_rings:
            number, (_, _, _, pos) = min(
                self.open_rings.items(), key=lambda kv: kv[1][3])
            self.fail(DiagnosticKind.UNCLOSED_RING,
                      f"ring closure {number} never closed", pos)
        if not self.atoms:
            self.fail(DiagnosticKind.EMPTY_INPUT, "no atoms in input", 0)
        if self.prev is None:
            self.fail(DiagnosticKind.BAD_SYNTAX,
                      "trailing fragment separator", len(self.text) - 1)
        return self.finish()

    # -- atom handling -------------------------------------------------------

    def add_atom(self, atom: Atom, position: int) -> None:
        index = len(self.atoms)
        atom = Atom(
            element=atom.element,
            aromatic=atom.aromatic,
            formal_charge=atom.formal_charge,
            isotope=atom.isotope,
            explicit_h=atom.explicit_h,
            index=index,
            chirality=atom.chirality,
        )
        self.atoms.append(_PendingAtom(atom, position))
        if self.prev is not None:
            order, direction, pos = self.take_pending_bond(position)
            self.make_bond(self.prev, index, order, direction, pos)
        self.prev = index

    def take_pending_bond(
        self, fallback_position: int
    ) -> tuple[BondOrder | None, str | None, int]:
        if self.pending_bond is None:
            return None, None, fallback_position
        order, direction, pos = self.pending_bond
        self.pending_bond = None
        return order, direction, pos

    def make_bond(
        self,
        a: int,
        b: int,
        order: BondOrder | None,
        direction: str | None,
        position: int,
    ) -> None:
        if a == b:
            self.fail(DiagnosticKind.BAD_SYNTAX,
                      "ring bond joins an atom to itself", position)
        key = (a, b) if a < b else (b, a)
        if key in self.bond_keys:
            self.fail(DiagnosticKind.BAD_SYNTAX,
                      "duplicate bond between atoms", position)
        if order is BondOrder.AROMATIC and not (
            self.atoms[a].atom.aromatic and self.atoms[b].atom.aromatic
        ):
            self.fail(DiagnosticKind.AROMATICITY,
                      "aromatic bond on non-aromatic atom", position)
        self.bond_keys.add(key)
        self.raw_bonds.append(_RawBond(a, b, order, direction, position))

    # -- token readers -------------------------------------------------------

    def organic_atom(self) -> None:
        start = self.pos
        two = self.text[self.pos:self.pos + 2]
        if two in ("Cl", "Br"):
            symbol = two
        else:
            symbol = self.text[self.pos]
        if symbol in ORGANIC_SUBSET:
            aromatic = False
        elif symbol in AROMATIC_ORGANIC:
            symbol = symbol.upper()
            aromatic = True
        else:
            kind = (
                DiagnosticKind.UNKNOWN_ELEMENT
                if symbol.isalpha()
                else DiagnosticKind.BAD_SYNTAX
            )
            self.fail(kind, f"unexpected character {symbol!r}", start)
        self.pos = start + len(symbol)
        self.add_atom(Atom(element=symbol, aromatic=aromatic), start)

    def bracket_atom(self) -> None:
        start = self.pos
        end = self.text.find("]", start + 1)
        if end == -1:
            self.fail(DiagnosticKind.BAD_BRACKET, "unterminated bracket", start)
        body = self.text[start + 1:end]
        if not body:
            self.fail(DiagnosticKind.BAD_BRACKET, "empty bracket", start)
        i = 0

        isotope: int | None = None
        digits = ""
        while i < len(body) and body[i] in _ASCII_DIGITS:
            digits += body[i]
            i += 1
        if digits:
            isotope = int(digits)
            if isotope == 0:
                self.fail(DiagnosticKind.BAD_BRACKET,
                          "isotope must be positive", start + 1)
            if isotope > 999:
                self.fail(DiagnosticKind.BAD_BRACKET,
                          "implausible isotope", start + 1)

        if i >= len(body) or not body[i].isalpha():
            self.fail(DiagnosticKind.BAD_BRACKET,
                      "bracket missing element symbol", start + 1 + i)
        aromatic = False
        if body[i:i + 2] in ("se", "as"):
            symbol = body[i:i + 2].capitalize()
            aromatic = True
            i += 2
        elif body[i].islower():
            symbol = body[i].upper()
            if symbol not in AROMATIC_ELIGIBLE:
                self.fail(DiagnosticKind.UNKNOWN_ELEMENT,
                          f"{body[i]!r} cannot be aromatic", start + 1 + i)
            aromatic = True
            i += 1
        else:
            if i + 1 < len(body) and body[i + 1].islower() and is_element(
                body[i:i + 2]
            ):
                symbol = body[i:i + 2]
                i += 2
            else:
                symbol = body[i]
                i += 1
        if not is_element(symbol):
            self.fail(DiagnosticKind.UNKNOWN_ELEMENT,
                      f"unknown element {symbol!r}",
                      start + 1 + i - len(symbol))

        chirality: str | None = None
        if i < len(body) and body[i] == "@":
            if body[i:i + 2] == "@@":
                chirality = "@@"
                i += 2
            else:
                chirality = "@"
                i += 1

        explicit_h = 0
        if i < len(body) and body[i] == "H":
            i += 1
            digits = ""
            while i < len(body) and body[i] in _ASCII_DIGITS:
                digits += body[i]
                i += 1
            explicit_h = int(digits) if digits else 1

        charge = 0
        if i < len(body) and body[i] in "+-":
            sign = 1 if body[i] == "+" else -1
            symbol_char = body[i]
            i += 1
            digits = ""
            while i < len(body) and body[i] in _ASCII_DIGITS:
                digits += body[i]
                i += 1
            if digits:
                charge = sign * int(digits)
            else:
                count = 1
                while i < len(body) and body[i] == symbol_char:
                    count += 1
                    i += 1
                charge = sign * count
            if abs(charge) > 15:
                self.fail(DiagnosticKind.BAD_BRACKET,
                          "implausible formal charge", start + 1 + i)

        if i < len(body) and body[i] == ":":
            i += 1
            digits = ""
            while i < len(body) and body[i] in _ASCII_DIGITS:
                digits += body[i]
                i += 1
            if not digits:
                self.fail(DiagnosticKind.BAD_BRACKET,
                          "atom class needs digits", start + 1 + i)

        if i != len(body):
            self.fail(DiagnosticKind.BAD_BRACKET,
                      f"unexpected {body[i]!r} in bracket", start + 1 + i)
        if symbol == "H" and explicit_h:
            self.fail(DiagnosticKind.BAD_BRACKET,
                      "hydrogen atom cannot carry hydrogens", start)

        self.pos = end + 1
        self.add_atom(
            Atom(
                element=symbol,
                aromatic=aromatic,
                formal_charge=charge,
                isotope=isotope,
                explicit_h=explicit_h,
                chirality=chirality,
            ),
            start,
        )

    def ring_closure(self) -> None:
        start = self.pos
        if self.text[self.pos] == "%":
            digits = self.text[self.pos + 1:self.pos + 3]
            if len(digits) != 2 or not all(c in _ASCII_DIGITS for c in digits):
                self.fail(DiagnosticKind.BAD_SYNTAX,
                          "'%' needs two digits", start)
            number = int(digits)
            self.pos += 3
        else:
            number = int(self.text[self.pos])
            self.pos += 1
        if self.prev is None:
            self.fail(DiagnosticKind.BAD_SYNTAX,
                      "ring closure before any atom", start)
        order, direction, pos = self.take_pending_bond(start)
        if number in self.open_rings:
            other, open_order, open_dir, _ = self.open_rings.pop(number)
            if order is not None and open_order is not None and order != open_order:
                self.fail(DiagnosticKind.BAD_SYNTAX,
                          "conflicting ring-bond orders", start)
            final = order if order is not None else open_order
            self.make_bond(other, self.prev, final, direction or open_dir, pos)
        else:
            if len(self.open_rings) >= _MAX_RING_CLOSURES:
                self.fail(DiagnosticKind.BAD_SYNTAX,
                          "too many open ring closures", start)
            self.open_rings[number] = (self.prev, order, direction, start)

    # -- resolution, validation, assembly -------------------------------------

    def finish(self) -> Molecule:
        bonds = self.resolve_bond_orders()
        self.check_aromatic_rings(bonds)
        self.check_valences(bonds)
        try:
            return Molecule(atoms=[p.atom for p in self.atoms], bonds=bonds)
        except MoleculeError as exc:  # defensive: validated above
            self.fail(DiagnosticKind.BAD_SYNTAX, str(exc), 0)
            raise AssertionError from exc

    def resolve_bond_orders(self) -> list[Bond]:
        skeleton = tuple(
            Bond(rb.a, rb.b, BondOrder.SINGLE, rb.direction)
            for rb in self.raw_bonds
        )
        in_ring = _non_bridge_bonds(len(self.atoms), skeleton)
        bonds = []
        for bi, rb in enumerate(self.raw_bonds):
            order = rb.order
            if order is None:
                both_aromatic = (
                    self.atoms[rb.a].atom.aromatic
                    and self.atoms[rb.b].atom.aromatic
                )
                order = (
                    BondOrder.AROMATIC
                    if both_aromatic and bi in in_ring
                    else BondOrder.SINGLE
                )
            bonds.append(Bond(rb.a, rb.b, order, rb.direction))
        return bonds

    def check_aromatic_rings(self, bonds: list[Bond]) -> None:
        in_ring = _non_bridge_bonds(len(self.atoms), tuple(bonds))
        flagged = set()
        for bi in in_ring:
            flagged.add(bonds[bi].a)
            flagged.add(bonds[bi].b)
        for pending in self.atoms:
            if pending.atom.aromatic and pending.atom.index not in flagged:
                self.fail(DiagnosticKind.AROMATICITY,
                          "aromatic atom outside any ring", pending.position)

    def check_valences(self, bonds: list[Bond]) -> None:
        # aromatic bonds count as sigma bonds (1.0) for the cap; the
        # 1.5-with-ceiling convention applies only to hydrogen filling,
        # else ring-fusion carbons and aromatic oxygen would be rejected
        order_sum = [0.0] * len(self.atoms)
        for bond in bonds:
            value = 1.0 if bond.order is BondOrder.AROMATIC else bond.order.valence
            order_sum[bond.a] += value
            order_sum[bond.b] += value
        for pending in self.atoms:
            atom = pending.atom
            cap = max_valence(atom.element, atom.formal_charge)
            if cap is None:
                continue
            total = math.ceil(order_sum[atom.index]) + (atom.explicit_h or 0)
            if total > cap:
                self.fail(
                    DiagnosticKind.VALENCE_VIOLATION,
                    f"{atom.element} with bond order sum {total} "
                    f"exceeds maximum valence {cap}",
                    pending.position,
                )
