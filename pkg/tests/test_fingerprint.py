"""Fingerprints: identifier scheme, path enumeration, keys, Tanimoto."""

import pytest

from chembench.chemgraph import mol_from_smiles
from chembench.fingerprint import (
    KEY_NAMES,
    KEY_TABLE,
    BitFingerprint,
    FingerprintKind,
    KindMismatch,
    fnv1a64,
    key_fingerprint,
    morgan_fingerprint,
    morgan_identifiers,
    path_fingerprint,
    path_strings,
    tanimoto,
)
from chembench.rng import SplitMix64

from corpus import fixture_molecules, permuted


def keys_on(smiles: str) -> set[str]:
    fp = key_fingerprint(mol_from_smiles(smiles))
    return {KEY_NAMES[i] for i in fp.on_bits()}


class TestFnv:
    def test_reference_vectors(self):
        # classic FNV-1a/64 test vectors
        assert fnv1a64(b"") == 0xCBF29CE484222325
        assert fnv1a64(b"a") == 0xAF63DC4C8601EC8C
        assert fnv1a64(b"foobar") == 0x85944171F73967E8


class TestMorgan:
    def test_methane_single_identifier(self):
        m = mol_from_smiles("C")
        assert len(morgan_identifiers(m, 2)) == 1
        assert morgan_fingerprint(m).popcount == 1

    def test_self_similarity(self):
        for smiles in ["C", "CCO", "c1ccccc1", "CC(=O)Nc1ccc(O)cc1"]:
            fp = morgan_fingerprint(mol_from_smiles(smiles))
            assert tanimoto(fp, fp) == 1.0

    def test_permutation_invariance(self):
        rng = SplitMix64(5)
        for smiles, molecule in fixture_molecules()[::19]:
            reference = morgan_fingerprint(molecule)
            for _ in range(5):
                assert morgan_fingerprint(
                    permuted(molecule, rng)).bits == reference.bits

    def test_radius_grows_feature_set(self):
        m = mol_from_smiles("CCCCO")
        assert len(morgan_identifiers(m, 0)) < len(morgan_identifiers(m, 2))

    def test_determinism_across_calls(self):
        m = mol_from_smiles("CC(C)Cc1ccc(cc1)C(C)C(=O)O")
        assert morgan_fingerprint(m).hex() == morgan_fingerprint(m).hex()

    def test_adding_an_atom_changes_identifiers(self):
        pairs = [("CC", "CCC"), ("c1ccccc1", "Cc1ccccc1"), ("CCO", "CCCO")]
        for small, bigger in pairs:
            a = morgan_identifiers(mol_from_smiles(small), 2)
            b = morgan_identifiers(mol_from_smiles(bigger), 2)
            assert a != b

    def test_nbits_power_of_two_required(self):
        with pytest.raises(ValueError):
            morgan_fingerprint(mol_from_smiles("C"), nbits=1000)


class TestPath:
    def test_cco_paths(self):
        strings = path_strings(mol_from_smiles("CCO"), 7)
        assert strings == frozenset({"C-C", "C-O", "C-C-O"})
        assert path_fingerprint(mol_from_smiles("CCO")).popcount <= 3

    def test_single_atom_no_paths(self):
        assert path_fingerprint(mol_from_smiles("C")).popcount == 0
        assert path_fingerprint(mol_from_smiles("[Na+]")).popcount == 0

    def test_direction_folding(self):
        # asymmetric path reads the lexicographically smaller direction
        strings = path_strings(mol_from_smiles("NCO"), 7)
        assert "C-N" in strings and "N-C" not in strings

    def test_aromatic_lowercase_and_bond_symbol(self):
        strings = path_strings(mol_from_smiles("c1ccccc1"), 2)
        assert "c:c" in strings
        assert "c:c:c" in strings

    def test_max_len_limits(self):
        m = mol_from_smiles("CCCCCC")
        assert max(
            s.count("-") for s in path_strings(m, 3)) == 3

    def test_permutation_invariance(self):
        rng = SplitMix64(6)
        for smiles, molecule in fixture_molecules()[::31]:
            reference = path_fingerprint(molecule).bits
            assert path_fingerprint(
                permuted(molecule, rng)).bits == reference


class TestKeys:
    def test_table_size_and_width(self):
        assert len(KEY_TABLE) >= 32
        fp = key_fingerprint(mol_from_smiles("C"))
        assert fp.width == len(KEY_TABLE)

    def test_ethanol(self):
        on = keys_on("CCO")
        assert "oxygen" in on
        assert "hydroxyl" in on
        assert not any(name.startswith("ring") for name in on)

    def test_benzene(self):
        on = keys_on("c1ccccc1")
        assert {"ring1", "ring_size6", "aromatic_ring"} <= on
        assert "ring2" not in on

    def test_bare_alkane_sets_no_feature_bits(self):
        assert keys_on("CC") == set()

    def test_functional_groups(self):
        assert "carbonyl" in keys_on("CC(=O)C")
        assert "carboxylic_acid" in keys_on("CC(=O)O")
        assert "primary_amine" in keys_on("CCN")
        assert "secondary_amine" in keys_on("CNC")
        assert "tertiary_amine" in keys_on("CN(C)C")
        assert "nitrile" in keys_on("CC#N")
        assert "nitro" in keys_on("C[N+](=O)[O-]")
        assert "ether" in keys_on("COC")
        assert "thiol" in keys_on("CCS")
        assert "aromatic_nitrogen" in keys_on("c1ccncc1")
        assert "fused_rings" in keys_on("c1ccc2ccccc2c1")
        assert "fused_rings" not in keys_on("C1CC2(CC1)CCCC2")  # spiro
        assert "halogen" in keys_on("CCl")
        assert "isotope" in keys_on("[13CH4]")
        assert "charged" in keys_on("[NH4+]")

    def test_heavy_atom_thresholds(self):
        assert "heavy10" in keys_on("CCCCCCCCCC")
        assert "heavy10" not in keys_on("CCCCCCCCC")


class TestTanimoto:
    def test_identical(self):
        fp = BitFingerprint(FingerprintKind.MORGAN, 2048, 0b1011)
        assert tanimoto(fp, fp) == 1.0

    def test_disjoint(self):
        a = BitFingerprint(FingerprintKind.PATH, 2048, 0b0011)
        b = BitFingerprint(FingerprintKind.PATH, 2048, 0b1100)
        assert tanimoto(a, b) == 0.0

    def test_half_overlap(self):
        a = BitFingerprint(FingerprintKind.MORGAN, 2048, 0b0111 << 1)
        b = BitFingerprint(FingerprintKind.MORGAN, 2048, 0b1110 << 1)
        assert tanimoto(a, b) == 0.5

    def test_all_zero(self):
        zero = BitFingerprint(FingerprintKind.MORGAN, 2048, 0)
        assert tanimoto(zero, zero) == 1.0

    def test_kind_mismatch(self):
        a = BitFingerprint(FingerprintKind.MORGAN, 2048, 1)
        b = BitFingerprint(FingerprintKind.PATH, 2048, 1)
        with pytest.raises(KindMismatch):
            tanimoto(a, b)
        c = BitFingerprint(FingerprintKind.MORGAN, 1024, 1)
        with pytest.raises(KindMismatch):
            tanimoto(a, c)

    def test_symmetry_and_bounds(self):
        rng = SplitMix64(7)
        mols = [m for _, m in fixture_molecules()[::11]]
        fps = [morgan_fingerprint(m) for m in mols]
        for _ in range(50):
            a = fps[rng.randrange(len(fps))]
            b = fps[rng.randrange(len(fps))]
            s = tanimoto(a, b)
            assert 0.0 <= s <= 1.0
            assert s == tanimoto(b, a)

    def test_hex_roundtrip(self):
        fp = morgan_fingerprint(mol_from_smiles("CCO"))
        again = BitFingerprint.from_hex(fp.kind, fp.width, fp.hex())
        assert again == fp
