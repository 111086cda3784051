"""Hill-system molecular formulas.

Carbon first, hydrogen second, all other elements alphabetical; with no
carbon present every element (hydrogen included) sorts alphabetically.
Counts of one omit the digit.  A nonzero net charge is appended as ``+``,
``-``, ``+n`` or ``-n``.  Isotopes fold into their element; explicit
hydrogen atoms in the graph count toward H.
"""

from __future__ import annotations

from collections import Counter

from .model import Molecule


def molecular_formula(mol: Molecule) -> str:
    counts: Counter[str] = Counter()
    for i, atom in enumerate(mol.atoms):
        counts[atom.element] += 1
        counts["H"] += mol.implicit_hydrogens(i)
    if counts["H"] == 0:
        del counts["H"]

    symbols = sorted(counts)
    if "C" in counts:
        head = ["C"] + (["H"] if "H" in counts else [])
        symbols = head + [s for s in symbols if s not in ("C", "H")]

    parts = []
    for symbol in symbols:
        n = counts[symbol]
        parts.append(symbol if n == 1 else f"{symbol}{n}")

    q = mol.net_charge
    if q == 1:
        parts.append("+")
    elif q == -1:
        parts.append("-")
    elif q > 1:
        parts.append(f"+{q}")
    elif q < -1:
        parts.append(f"-{-q}")
    return "".join(parts)
