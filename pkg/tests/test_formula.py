"""Hill-system formulas against hand-derived expectations.

Every pair below was derived by hand: count implicit hydrogens from the
default-valence table (aromatic bonds 1.5, ceiling after summation),
apply bracket hydrogen overrides, order carbon / hydrogen / alphabetical
(all-alphabetical without carbon), append the net-charge suffix.
"""

from chembench.chemgraph import mol_from_smiles, molecular_formula, parse_smiles
from chembench.rng import SplitMix64

from corpus import fixture_molecules, permuted

HAND_DERIVED = [
    ("C", "CH4"),
    ("CC", "C2H6"),
    ("CCC", "C3H8"),
    ("CCCC", "C4H10"),
    ("CC(C)C", "C4H10"),
    ("CC(C)(C)C", "C5H12"),
    ("CCO", "C2H6O"),
    ("CO", "CH4O"),
    ("OCO", "CH4O2"),
    ("C=C", "C2H4"),
    ("C#C", "C2H2"),
    ("C=O", "CH2O"),
    ("C#N", "CHN"),
    ("CC#N", "C2H3N"),
    ("CC=O", "C2H4O"),
    ("CC(=O)O", "C2H4O2"),
    ("CC(=O)OC", "C3H6O2"),
    ("CC(=O)N", "C2H5NO"),
    ("O", "H2O"),
    ("N", "H3N"),
    ("O=C=O", "CO2"),
    ("OO", "H2O2"),
    ("[NH4+]", "H4N+"),
    ("[OH-]", "HO-"),
    ("[Na+].[Cl-]", "ClNa"),
    ("c1ccccc1", "C6H6"),
    ("C1=CC=CC=C1", "C6H6"),
    ("c1ccncc1", "C5H5N"),
    ("c1cc[nH]c1", "C4H5N"),
    ("c1ccoc1", "C4H4O"),
    ("c1ccc2ccccc2c1", "C10H8"),
    ("Cc1ccccc1", "C7H8"),
    ("Oc1ccccc1", "C6H6O"),
    ("Nc1ccccc1", "C6H7N"),
    ("C1CCCCC1", "C6H12"),
    ("C1CC1", "C3H6"),
    ("[13CH4]", "CH4"),
    ("[2H]O[2H]", "H2O"),
    ("FC(F)(F)F", "CF4"),
    ("ClCCl", "CH2Cl2"),
    ("FC(F)F", "CHF3"),
    ("CS", "CH4S"),
    ("CSC", "C2H6S"),
    ("CP", "CH5P"),
    ("OS(=O)(=O)O", "H2O4S"),
    ("N#N", "N2"),
    ("[O-]C(=O)C", "C2H3O2-"),
    ("OCC(O)CO", "C3H8O3"),
    ("NCCO", "C2H7NO"),
    ("CCOCC", "C4H10O"),
    ("O=C(O)c1ccccc1", "C7H6O2"),
    ("[Cu+2]", "Cu+2"),
    ("B", "BH3"),
    ("Cl[Si](Cl)(Cl)Cl", "Cl4Si"),
    ("CN(C)C", "C3H9N"),
    ("C[N+](C)(C)C", "C4H12N+"),
    ("O=[N+]([O-])c1ccccc1", "C6H5NO2"),
    ("N#Cc1ccccc1", "C7H5N"),
]


def test_hand_derived_pairs():
    assert len(HAND_DERIVED) >= 50
    for smiles, expected in HAND_DERIVED:
        assert molecular_formula(mol_from_smiles(smiles)) == expected, smiles


def test_spec_examples():
    assert molecular_formula(mol_from_smiles("CCO")) == "C2H6O"
    assert molecular_formula(mol_from_smiles("c1ccccc1")) == "C6H6"
    assert molecular_formula(mol_from_smiles("[NH4+]")) == "H4N+"


def test_permutation_invariance():
    rng = SplitMix64(99)
    for smiles, molecule in fixture_molecules()[::17]:
        expected = molecular_formula(molecule)
        for _ in range(5):
            assert molecular_formula(permuted(molecule, rng)) == expected


def test_invariant_under_canonical_reparse():
    from chembench.chemgraph import canonical_smiles

    for smiles, molecule in fixture_molecules()[::23]:
        reparsed = parse_smiles(canonical_smiles(molecule))
        assert molecular_formula(reparsed) == molecular_formula(molecule)
