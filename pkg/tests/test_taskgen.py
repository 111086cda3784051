"""Instruction-data builders: goldens, duplication, masking, mixing."""

from pathlib import Path

import pytest

from chembench.chemgraph import canonical_smiles, mol_from_smiles
from chembench.taskgen import (
    InsufficientGeneralData,
    MissingIupac,
    ReactionRecord,
    RecordRejected,
    TaskInstance,
    TemplatePool,
    UnparsableSmiles,
    build_md,
    build_mna,
    build_mpp,
    build_rc,
    build_tbmd,
    mix_datasets,
    read_jsonl,
    sentence_count,
    write_jsonl,
)

DATA = Path(__file__).parent / "data"


def pool(task: str, filename: str) -> TemplatePool:
    path = DATA / "templates" / filename
    return TemplatePool.from_lines(task, path.read_text().splitlines())


MD_RECORDS = [
    ("CCO", "A simple alcohol."),
    ("c1ccccc1", "An aromatic ring. It is a benchmark solvent. "
                 "It is also toxic."),
    ("CC(=O)O", "A weak acid found in vinegar."),
    ("CC(C)Cc1ccc(cc1)C(C)C(=O)O",
     "A widely used analgesic. It inhibits an enzyme. Sold everywhere."),
    ("C1CCCCC1", "A saturated six-membered ring."),
    ("O=C(O)c1ccccc1O", "A phenolic acid. Precursor of a famous drug."),
    ("CC#N", "A small nitrile solvent."),
    ("c1ccncc1", "A basic heteroaromatic liquid."),
    ("OCC(O)CO", "A sweet triol. Common humectant. Used in cosmetics."),
    ("CSC", "A smelly sulfide."),
    ("NCCO", "An amino alcohol."),
    ("FC(F)(F)c1ccccc1", "A fluorinated aromatic building block."),
    ("CC(=O)Nc1ccc(O)cc1", "An analgesic. Hepatotoxic in overdose. "
                           "Ubiquitous over the counter."),
    ("CCOCC", "A volatile ether once used in anesthesia."),
    ("C1CCNCC1", "A cyclic secondary amine."),
    ("O=C1CCCCC1", "A cyclic ketone."),
    ("N#Cc1ccccc1", "An aromatic nitrile."),
    ("Clc1ccccc1", "A chlorinated aromatic."),
    ("CN(C)C", "A small tertiary amine gas."),
    ("OC(=O)CO", "A small alpha hydroxy acid."),
]

MNA_RECORDS = [(smiles, f"name-{i:02d}") for i, (smiles, _) in
               enumerate(MD_RECORDS)]

REACTIONS = [
    "CCBr.[Na+].[OH-]>>CCO",
    "CCO.CC(=O)O>OS(=O)(=O)O>CC(=O)OCC",
    "c1ccccc1.CC(=O)Cl>>CC(=O)c1ccccc1",
    "CCN.CC(=O)O>>CC(=O)NCC",
    "C=C.BrBr>>BrCCBr",
    "c1ccncc1.CI>>C[n+]1ccccc1.[I-]",
    "CC(=O)C.[NH4+]>>CC(N)C.O",
    "OCC(O)CO.CC(=O)O>>CC(=O)OCC(O)CO",
    "Clc1ccccc1.N>>Nc1ccccc1.Cl",
    "CC#N.O>>CC(=O)N",
    "CCCl.[Na+].[I-]>>CCI.[Na+].[Cl-]",
    "c1ccoc1.C=O>>OCc1ccco1",
    "CCO>>CC=O",
    "CC=O.O=CC>>CC(O)C(=O)C",
    "c1ccccc1O.CC(=O)OC(C)=O>>CC(=O)Oc1ccccc1.CC(=O)O",
    "NCC(=O)O.CO>>COC(=O)CN.O",
    "CC(C)=O.[BH4-].[Na+]>>CC(C)O",
    "BrCCBr.N#C[K]>>N#CCCC#N.[K+].[Br-]",
    "C1CCCCC1=O.NO>>C1CCCCC1=NO.O",
    "CCBr.c1cc[nH]c1>>CCn1cccc1",
]

MPP_TABLE = [
    ("CCO", {"toxic": 0, "soluble": 1}),
    ("c1ccccc1", {"toxic": 1, "soluble": None}),
    ("CC(=O)O", {"toxic": 0, "soluble": 1}),
    ("CCN", {"toxic": None, "soluble": 1}),
]


class TestSentenceCount:
    def test_counts(self):
        assert sentence_count("One sentence.") == 1
        assert sentence_count("Two parts. Second one here.") == 2
        assert sentence_count("A. B. C.") == 3
        assert sentence_count("No terminal punctuation") == 1
        assert sentence_count("Ends abruptly! Then what? More") == 3
        assert sentence_count("") == 0


class TestBuildMd:
    def test_duplication_rule(self):
        instances = build_md(MD_RECORDS, pool("md", "md.txt"), seed=1)
        long_records = sum(
            1 for _, d in MD_RECORDS if sentence_count(d) >= 3)
        assert long_records >= 2
        assert len(instances) == len(MD_RECORDS) + long_records

    def test_duplicates_share_content(self):
        instances = build_md(MD_RECORDS, pool("md", "md.txt"), seed=1)
        by_id = {i.id: i for i in instances}
        assert "md-000001" in by_id and "md-000001-b" in by_id
        a, b = by_id["md-000001"], by_id["md-000001-b"]
        assert a.prompt == b.prompt and a.returns == b.returns
        assert a.id != b.id

    def test_determinism(self):
        a = write_jsonl(build_md(MD_RECORDS, pool("md", "md.txt"), seed=5))
        b = write_jsonl(build_md(MD_RECORDS, pool("md", "md.txt"), seed=5))
        assert a == b

    def test_seed_changes_templates(self):
        a = build_md(MD_RECORDS, pool("md", "md.txt"), seed=1)
        b = build_md(MD_RECORDS, pool("md", "md.txt"), seed=2)
        assert [i.template_id for i in a] != [i.template_id for i in b]

    def test_unparsable_rejected(self):
        with pytest.raises(UnparsableSmiles):
            build_md([("xx(", "desc.")], pool("md", "md.txt"), seed=1)

    def test_empty_description_rejected(self):
        with pytest.raises(RecordRejected):
            build_md([("CCO", "  ")], pool("md", "md.txt"), seed=1)


class TestBuildTbmd:
    def test_returns_are_canonical(self):
        instances = build_tbmd(MD_RECORDS, pool("tbmd", "tbmd.txt"), seed=3)
        by_source = {i.meta["source_index"]: i for i in instances
                     if not i.id.endswith("-b")}
        for idx, (smiles, _) in enumerate(MD_RECORDS):
            expected = canonical_smiles(mol_from_smiles(smiles))
            assert by_source[str(idx)].returns == expected

    def test_duplication_mirrors_md(self):
        md = build_md(MD_RECORDS, pool("md", "md.txt"), seed=3)
        tbmd = build_tbmd(MD_RECORDS, pool("tbmd", "tbmd.txt"), seed=3)
        assert len(md) == len(tbmd)


class TestBuildMpp:
    def test_non_missing_cells(self):
        instances = build_mpp(MPP_TABLE, pool("mpp", "mpp.txt"), seed=0,
                              dataset="demo")
        assert len(instances) == 6  # eight cells, two missing
        labels = {i.id: i.returns for i in instances}
        assert labels["mpp-000000-toxic"] == "No"
        assert labels["mpp-000000-soluble"] == "Yes"
        assert all(i.meta["dataset"] == "demo" for i in instances)

    def test_stable_ids(self):
        a = build_mpp(MPP_TABLE, pool("mpp", "mpp.txt"), seed=0)
        b = build_mpp(MPP_TABLE, pool("mpp", "mpp.txt"), seed=0)
        assert [i.id for i in a] == [i.id for i in b]


class TestBuildRc:
    def test_mask_and_reconstruction(self):
        reactions = [ReactionRecord.from_string(r) for r in REACTIONS]
        instances = build_rc(reactions, pool("rc", "rc.txt"), seed=9)
        assert len(instances) == len(reactions)
        for inst, record in zip(instances, reactions):
            positions = [int(p) for p in
                         inst.meta["masked_positions"].split(",")]
            rendered = record.render({p: "[MASK]" for p in positions})
            assert rendered in inst.prompt
            assert rendered.count("[MASK]") == len(positions)
            # substituting returns back must restore the molecule multiset
            slots = list(record.reactants) + list(record.products)
            restored = list(slots)
            for pos, smiles in zip(positions, inst.returns.split(".")):
                restored[pos] = smiles
            original = sorted(
                canonical_smiles(mol_from_smiles(s)) for s in slots)
            rebuilt = sorted(
                canonical_smiles(mol_from_smiles(s)) for s in restored)
            assert original == rebuilt

    def test_reagents_never_masked(self):
        reactions = [ReactionRecord.from_string(r) for r in REACTIONS]
        instances = build_rc(reactions, pool("rc", "rc.txt"), seed=4)
        for inst, record in zip(instances, reactions):
            if record.reagents:
                reagent_part = inst.prompt.split(">")[1]
                assert "[MASK]" not in reagent_part

    def test_two_slot_reactions_mask_one(self):
        reactions = [ReactionRecord.from_string("CCO>>CC=O")]
        plain = TemplatePool("rc", ("{reaction}",))
        for seed in range(10):
            out = build_rc(reactions, plain, seed=seed)
            assert out[0].prompt.count("[MASK]") == 1

    def test_seeded_determinism(self):
        reactions = [ReactionRecord.from_string(r) for r in REACTIONS]
        a = write_jsonl(build_rc(reactions, pool("rc", "rc.txt"), seed=2))
        b = write_jsonl(build_rc(reactions, pool("rc", "rc.txt"), seed=2))
        assert a == b


class TestBuildMna:
    def test_s2mf_formula(self):
        instances = build_mna(
            [("CCO", "ethanol")], pool("mna", "mna_from_smiles.txt"),
            seed=0, direction="s2mf")
        assert instances[0].returns == "C2H6O"

    def test_i2s_canonical(self):
        instances = build_mna(
            [("OCC", "ethanol")], pool("mna", "mna_from_iupac.txt"),
            seed=0, direction="i2s")
        assert instances[0].returns == canonical_smiles(
            mol_from_smiles("CCO"))
        assert "ethanol" in instances[0].prompt

    def test_s2i_passthrough(self):
        instances = build_mna(
            MNA_RECORDS, pool("mna", "mna_from_smiles.txt"),
            seed=0, direction="s2i")
        assert instances[3].returns == "name-03"

    def test_i2mf_uses_paired_smiles(self):
        instances = build_mna(
            [("c1ccccc1", "benzene")], pool("mna", "mna_from_iupac.txt"),
            seed=0, direction="i2mf")
        assert instances[0].returns == "C6H6"
        assert "benzene" in instances[0].prompt

    def test_missing_iupac(self):
        with pytest.raises(MissingIupac):
            build_mna([("CCO", "")], pool("mna", "mna_from_smiles.txt"),
                      seed=0, direction="s2i")

    def test_s2mf_tolerates_missing_iupac(self):
        instances = build_mna(
            [("CCO", "")], pool("mna", "mna_from_smiles.txt"),
            seed=0, direction="s2mf")
        assert len(instances) == 1


class TestMix:
    def _instances(self, prefix: str, n: int) -> list[TaskInstance]:
        return [
            TaskInstance(id=f"{prefix}-{i}", task="MD", prompt="p",
                         returns="r", template_id="t")
            for i in range(n)
        ]

    def test_exact_ratio_keeps_all(self):
        mixed = mix_datasets(self._instances("c", 100),
                             self._instances("g", 200), (1, 2), seed=0)
        assert len(mixed) == 300
        assert sum(1 for i in mixed if i.id.startswith("c-")) == 100

    def test_downsamples_general(self):
        mixed = mix_datasets(self._instances("c", 100),
                             self._instances("g", 500), (1, 2), seed=0)
        assert len(mixed) == 300
        assert sum(1 for i in mixed if i.id.startswith("g-")) == 200

    def test_insufficient_general(self):
        with pytest.raises(InsufficientGeneralData):
            mix_datasets(self._instances("c", 100),
                         self._instances("g", 50), (1, 2), seed=0)

    def test_upsample_flag(self):
        mixed = mix_datasets(self._instances("c", 100),
                             self._instances("g", 50), (1, 2), seed=0,
                             allow_upsample=True)
        assert sum(1 for i in mixed if i.id.startswith("g-")) == 200

    def test_seeded_permutation(self):
        a = mix_datasets(self._instances("c", 10), self._instances("g", 20),
                         (1, 2), seed=1)
        b = mix_datasets(self._instances("c", 10), self._instances("g", 20),
                         (1, 2), seed=1)
        c = mix_datasets(self._instances("c", 10), self._instances("g", 20),
                         (1, 2), seed=2)
        assert [i.id for i in a] == [i.id for i in b]
        assert [i.id for i in a] != [i.id for i in c]


GOLDEN_FAMILIES = ("md", "tbmd", "mpp", "rc", "mna_s2i")


def build_golden(name: str) -> str:
    """The exact builder invocation each frozen golden was produced with."""
    if name == "md":
        return write_jsonl(build_md(MD_RECORDS, pool("md", "md.txt"),
                                    seed=11))
    if name == "tbmd":
        return write_jsonl(build_tbmd(MD_RECORDS,
                                      pool("tbmd", "tbmd.txt"), seed=11))
    if name == "mpp":
        return write_jsonl(build_mpp(MPP_TABLE, pool("mpp", "mpp.txt"),
                                     seed=11, dataset="demo"))
    if name == "rc":
        reactions = [ReactionRecord.from_string(r) for r in REACTIONS]
        return write_jsonl(build_rc(reactions, pool("rc", "rc.txt"),
                                    seed=11))
    if name == "mna_s2i":
        return write_jsonl(build_mna(
            MNA_RECORDS, pool("mna", "mna_from_smiles.txt"),
            seed=11, direction="s2i"))
    raise AssertionError(name)


class TestGoldens:
    """Frozen JSONL bytes; regeneration must be byte-identical."""

    @pytest.mark.parametrize("name", GOLDEN_FAMILIES)
    def test_matches_frozen_golden(self, name):
        golden = (DATA / "golden" / f"{name}.jsonl").read_bytes()
        assert build_golden(name).encode("utf-8") == golden

    def test_jsonl_roundtrip(self):
        text = build_golden("md")
        instances = read_jsonl(text)
        assert write_jsonl(instances) == text
