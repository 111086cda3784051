"""Periodic-table data used by the molecular graph layer.

The tables here define the valence model for the whole toolkit:

* ``DEFAULT_VALENCE`` drives implicit-hydrogen counting for organic-subset
  atoms.  Charge adjustment follows the usual electron-counting convention:
  carbon loses capacity with charge of either sign (``CH3+`` and ``CH3-``
  both carry three hydrogens), boron gains capacity with negative charge
  (borates), and N/O/P/S/halogens shift capacity by the signed charge
  (``N+`` binds four, ``O-`` binds one).
* ``MAX_VALENCE`` is the permissive cap enforced at parse time.  It admits
  hypervalent phosphorus and sulfur (phosphates, sulfones) and pentavalent
  neutral nitrogen (the uncharged nitro form) while rejecting e.g. a carbon
  with five explicit bonds.  Elements without an entry are unconstrained.
"""

from __future__ import annotations

_SYMBOLS = (
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne",
    "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K", "Ca",
    "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr",
    "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In", "Sn",
    "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb",
    "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg",
    "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm",
    "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds",
    "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
)

#: symbol -> atomic number, Z 1..118
ATOMIC_NUMBER: dict[str, int] = {s: z for z, s in enumerate(_SYMBOLS, start=1)}

#: elements that may be written bare (outside brackets)
ORGANIC_SUBSET = frozenset({"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"})

#: elements allowed to carry the aromatic flag (lowercase-eligible)
AROMATIC_ELIGIBLE = frozenset({"B", "C", "N", "O", "P", "S", "Se", "As"})

#: aromatic symbols writable bare, i.e. lowercase organic subset
AROMATIC_ORGANIC = frozenset({"b", "c", "n", "o", "p", "s"})

HALOGENS = frozenset({"F", "Cl", "Br", "I", "At"})

#: neutral-atom valence used for implicit hydrogen counting
DEFAULT_VALENCE: dict[str, int] = {
    "B": 3, "C": 4, "N": 3, "O": 2, "P": 3, "S": 2,
    "F": 1, "Cl": 1, "Br": 1, "I": 1,
}

#: largest neutral bond-order sum (plus bracket hydrogens) accepted at parse
#: time; hypervalent P/S and Cl/Br/I are admitted, fluorine is not
MAX_VALENCE: dict[str, int] = {
    "H": 1, "B": 3, "C": 4, "N": 5, "O": 2, "P": 5, "S": 6,
    "F": 1, "Cl": 7, "Br": 7, "I": 7,
}

#: capacity shared by the charged forms of N/P (ammonium- and
#: phosphonium-like), where the hypervalent neutral allowance does not apply
_CHARGED_PNICTOGEN_BASE = 3


def is_element(symbol: str) -> bool:
    return symbol in ATOMIC_NUMBER


def default_valence(element: str, charge: int = 0) -> int | None:
    """Charge-adjusted valence for implicit-H counting, or None if unknown.

    Unknown here means the element has no organic-subset default (metals,
    noble gases, ...); such atoms never receive implicit hydrogens.
    """
    base = DEFAULT_VALENCE.get(element)
    if base is None:
        return None
    if element == "C":
        return max(0, base - abs(charge))
    if element == "B":
        return max(0, base - charge)
    return max(0, base + charge)


def max_valence(element: str, charge: int = 0) -> int | None:
    """Charge-adjusted parse-time valence cap, or None if unconstrained."""
    base = MAX_VALENCE.get(element)
    if base is None:
        return None
    if charge == 0:
        return base
    if element == "C":
        return max(0, base - abs(charge))
    if element == "B":
        return max(0, base - charge)
    if element in ("N", "P"):
        return max(0, _CHARGED_PNICTOGEN_BASE + charge)
    return max(0, base + charge)
