"""Molecular graphs from SMILES: parsing, hydrogens, formulas, canonical form."""

from __future__ import annotations

from typing import Iterable, Iterator

from .canon import canonical_key, canonical_smiles
from .formula import molecular_formula
from .model import (
    Atom,
    Bond,
    BondOrder,
    DiagnosticKind,
    Molecule,
    MoleculeError,
    ParseDiagnostic,
)
from .parser import SmilesParseError, mol_from_smiles, parse_smiles
from .writer import write_smiles

__all__ = [
    "Atom",
    "Bond",
    "BondOrder",
    "DiagnosticKind",
    "Molecule",
    "MoleculeError",
    "ParseDiagnostic",
    "SmilesParseError",
    "canonical_key",
    "canonical_smiles",
    "implicit_hydrogens",
    "mol_from_smiles",
    "molecular_formula",
    "parse_smiles",
    "canonicalize_stream",
    "write_smiles",
]


def implicit_hydrogens(mol: Molecule, atom_index: int) -> int:
    """Hydrogen count of one atom: bracket override or valence fill."""
    if not 0 <= atom_index < len(mol):
        raise IndexError(f"atom index {atom_index} out of range")
    return mol.implicit_hydrogens(atom_index)


def canonicalize_stream(lines: Iterable[str]) -> Iterator[str]:
    """Batch mode: one SMILES per input line, one canonical SMILES or
    diagnostic line (``ERROR:<kind>:<position>:<message>``) per output line."""
    for line in lines:
        text = line.strip()
        result = parse_smiles(text)
        if isinstance(result, ParseDiagnostic):
            yield f"ERROR:{result.kind.value}:{result.position}:{result.message}"
        else:
            yield canonical_smiles(result)
