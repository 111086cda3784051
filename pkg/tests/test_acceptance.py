"""Acceptance suite: one test per release criterion, each printing a
PASS line with its measured numbers (run with -s or -v to see them)."""

import json
import math
import time
from pathlib import Path

import numpy as np
import pytest

from chembench.chemgraph import (
    Molecule,
    ParseDiagnostic,
    canonical_smiles,
    mol_from_smiles,
    parse_smiles,
    write_smiles,
)
from chembench.harness import (
    BenchmarkTask,
    BenchReport,
    MockEndpoint,
    ModelEndpointConfig,
    TaskKind,
    gold_answer_map,
    load_dataset,
    render_report,
    run_benchmark,
)
from chembench.harness.score import EvalRecord, TaskReport, score_task
from chembench.metrics import (
    RankedLabels,
    ScorePair,
    auc_roc,
    bleu,
    levenshtein,
    masked_nll,
    rouge,
)
from chembench.rng import SplitMix64
from chembench.scaffold import scaffold_key, scaffold_split
from chembench.taskgen import build_md, sentence_count

import benchdata
from corpus import bulk_smiles, fixture_molecules, permuted, small_molecules
from oracles import brute_auc_vectorized, oracle_min_serialization
from test_formula import HAND_DERIVED
from test_taskgen import GOLDEN_FAMILIES, MD_RECORDS, build_golden, pool

DATA = Path(__file__).parent / "data"


def report_pass(name: str, detail: str = "") -> None:
    print(f"PASS {name}" + (f" ({detail})" if detail else ""))


def test_canonical_invariance_500x20_under_10s():
    molecules = [m for _, m in fixture_molecules()[:500]]
    assert len(molecules) == 500
    rng = SplitMix64(20240601)
    started = time.perf_counter()
    for molecule in molecules:
        reference = canonical_smiles(molecule)
        for _ in range(20):
            assert canonical_smiles(permuted(molecule, rng)) == reference
    elapsed = time.perf_counter() - started
    assert elapsed < 10.0, f"canonical invariance too slow: {elapsed:.2f}s"
    report_pass("canonical-invariance",
                f"500 molecules x 20 permutations in {elapsed:.2f}s")


def test_canonical_soundness_vs_bruteforce_oracle():
    entries = small_molecules()
    ours = [canonical_smiles(m) for _, m in entries]
    oracle = [oracle_min_serialization(m) for _, m in entries]
    mismatches = 0
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if (ours[i] == ours[j]) != (oracle[i] == oracle[j]):
                mismatches += 1
    assert mismatches == 0
    report_pass("canonical-soundness",
                f"{len(entries)} molecules <= 8 heavy atoms, "
                f"{len(entries) * (len(entries) - 1) // 2} pairs")


def test_parser_totality_und_roundtrip():
    rng = SplitMix64(77)
    crashes = 0
    for i in range(100_000):
        length = rng.randrange(41)
        if i % 2 == 0:
            text = bytes(rng.randrange(256) for _ in range(length)).decode(
                "latin-1")
        else:
            alphabet = "CcNnOoSsPpBrl123456789()[]=#+-.%/\\@H "
            text = "".join(alphabet[rng.randrange(len(alphabet))]
                           for _ in range(length))
        result = parse_smiles(text)
        if not isinstance(result, (Molecule, ParseDiagnostic)):
            crashes += 1
    assert crashes == 0

    for smiles, molecule in fixture_molecules():
        reparsed = parse_smiles(write_smiles(molecule))
        assert isinstance(reparsed, Molecule), smiles
        assert canonical_smiles(reparsed) == canonical_smiles(molecule)
    report_pass("parser-totality",
                "100000 fuzz inputs, 0 crashes; "
                f"round trip on {len(fixture_molecules())} molecules")


def test_formula_correctness_50_hand_pairs():
    assert len(HAND_DERIVED) >= 50
    spec_pins = {"CCO": "C2H6O", "c1ccccc1": "C6H6", "[NH4+]": "H4N+"}
    table = dict(HAND_DERIVED)
    for smiles, formula in spec_pins.items():
        assert table[smiles] == formula
    from chembench.chemgraph import molecular_formula
    for smiles, expected in HAND_DERIVED:
        assert molecular_formula(mol_from_smiles(smiles)) == expected, smiles
    report_pass("formula-correctness", f"{len(HAND_DERIVED)} exact pairs")


def test_auc_oracle_equivalence_1000_instances():
    rng = np.random.default_rng(20240602)
    transforms = (lambda x: 3.0 * x + 1.0, lambda x: x ** 3 + x,
                  np.exp, np.arctan)
    checked = 0
    while checked < 1000:
        n = int(rng.integers(2, 201))
        scores = rng.integers(0, 8, size=n).astype(float)  # heavy ties
        labels = rng.integers(0, 2, size=n).astype(bool)
        if labels.all() or not labels.any():
            continue
        ours = auc_roc(RankedLabels(tuple(scores), tuple(labels)))
        assert abs(ours - brute_auc_vectorized(scores, labels)) <= 1e-12
        f = transforms[checked % len(transforms)]
        mapped = tuple(float(v) for v in f(scores))
        assert abs(
            auc_roc(RankedLabels(mapped, tuple(labels))) - ours) <= 1e-12
        checked += 1
    report_pass("auc-oracle", "1000 instances with ties, |delta| <= 1e-12, "
                "monotone-transform invariant")


def test_metric_spot_values():
    char_bleu = bleu([ScorePair("CCO", "CCON")], max_n=2, tokenizer="char")
    assert abs(char_bleu - 0.7165) <= 1e-4
    assert levenshtein("kitten", "sitting") == 3
    rouge1 = rouge([ScorePair("the cat sat", "the cat ate")], "rouge1")
    assert abs(rouge1 - 2 / 3) <= 1e-12
    report_pass("metric-spot-values",
                f"bleu={char_bleu:.6f}, dis=3, rouge1={rouge1:.6f}")


def test_scaffold_split_10000_molecules_20_seeds():
    smiles = bulk_smiles(10_000)
    records = [(f"m{i:05d}", mol_from_smiles(s))
               for i, s in enumerate(smiles)]
    keys = [scaffold_key(m) for _, m in records]
    key_of = {rid: key.key for (rid, _), key in zip(records, keys)}
    group_sizes: dict[str, int] = {}
    for key in keys:
        group_sizes[key.key] = group_sizes.get(key.key, 0) + 1
    bound = max(group_sizes.values()) / len(records)

    for seed in range(20):
        first = scaffold_split(records, 0.8, seed, keys=keys)
        second = scaffold_split(records, 0.8, seed, keys=keys)
        assert first == second, f"seed {seed} not reproducible"
        train_keys = {key_of[rid] for rid in first.train}
        test_keys = {key_of[rid] for rid in first.test}
        assert not train_keys & test_keys, f"leakage at seed {seed}"
        assert abs(first.achieved_train_fraction - 0.8) <= bound
    report_pass("scaffold-split",
                f"10000 records, 20 seeds, leakage=0, bound={bound:.4f}")


def test_taskgen_goldens_and_rules():
    for name in GOLDEN_FAMILIES:
        first = build_golden(name).encode("utf-8")
        second = build_golden(name).encode("utf-8")
        frozen = (DATA / "golden" / f"{name}.jsonl").read_bytes()
        assert first == second == frozen, name

    instances = build_md(MD_RECORDS, pool("md", "md.txt"), seed=11)
    long_count = sum(1 for _, d in MD_RECORDS if sentence_count(d) >= 3)
    assert len(instances) == len(MD_RECORDS) + long_count
    report_pass("taskgen-goldens",
                f"5 families byte-identical; md duplication +{long_count}")


def test_masked_nll_values_and_additivity():
    value = masked_nll([math.log(0.5)] * 3, [True] * 3)
    assert abs(value - 2.0794) <= 1e-4
    rng = np.random.default_rng(5)
    for _ in range(200):
        n = int(rng.integers(0, 50))
        lps = (-rng.random(n)).tolist()
        mask_a = rng.integers(0, 2, size=n).astype(bool)
        mask_b = (~mask_a) & rng.integers(0, 2, size=n).astype(bool)
        union = mask_a | mask_b
        total = masked_nll(lps, union.tolist())
        parts = masked_nll(lps, mask_a.tolist()) + masked_nll(
            lps, mask_b.tolist())
        assert abs(total - parts) <= 1e-9
    report_pass("masked-nll", f"3*ln2={value:.6f}; additive on 200 vectors")


ALL_KINDS = [
    (TaskKind.S2I, ""),
    (TaskKind.I2S, ""),
    (TaskKind.S2MF, ""),
    (TaskKind.I2MF, ""),
    (TaskKind.CAPTIONING, ""),
    (TaskKind.MOLECULE_DESIGN, ""),
    (TaskKind.PROPERTY, ""),
    (TaskKind.YIELD, ""),
    (TaskKind.REACTION_PREDICTION, ""),
    (TaskKind.RETROSYNTHESIS, ""),
    (TaskKind.REAGENT_SELECTION, "reactant"),
    (TaskKind.REAGENT_SELECTION, "ligand"),
]

#: metrics that must read 100% under an echo-gold endpoint
FULL_MARK_METRICS = frozenset({
    "accuracy", "validity", "exact", "auc_roc",
    "fts_keys", "fts_path", "fts_morgan", "bleu", "bleu2", "bleu4",
    "rouge1", "rouge2", "rougeL",
})


def _all_tasks(tmp_path: Path) -> list[BenchmarkTask]:
    tasks = []
    for kind, variant in ALL_KINDS:
        dataset = benchdata.dataset_file(tmp_path, kind, n=120,
                                         variant=variant)
        tasks.append(BenchmarkTask(
            kind=kind, dataset_path=str(dataset), sample_size=100,
            seed=17, variant=variant, dataset_name="demo"))
    return tasks


def test_end_to_end_harness_gold_and_garbage(tmp_path):
    tasks = _all_tasks(tmp_path)
    answers: dict[str, str] = {}
    for task in tasks:
        answers.update(gold_answer_map(task, load_dataset(task.dataset_path)))

    started = time.perf_counter()
    reports = []
    for run_dir in ("gold1", "gold2"):
        with MockEndpoint(answers=answers) as mock:
            cfg = ModelEndpointConfig(
                base_url=mock.base_url, model_name="gold-echo",
                parallelism=4, backoff_base=0.0)
            reports.append(
                run_benchmark(tasks, cfg, str(tmp_path / run_dir)))
    elapsed = time.perf_counter() - started
    assert elapsed < 60.0, f"harness too slow: {elapsed:.1f}s"

    for task_report in reports[0].tasks:
        assert task_report.n_records == 100
        for metric, value in task_report.metrics.items():
            if metric in FULL_MARK_METRICS:
                assert value == 1.0, (task_report.name, metric, value)
            if metric == "levenshtein":
                assert value == 0.0

    first = (tmp_path / "gold1" / "report.json").read_bytes()
    second = (tmp_path / "gold2" / "report.json").read_bytes()
    assert first == second

    design = next(t for t in tasks if t.kind is TaskKind.MOLECULE_DESIGN)
    with MockEndpoint(mode="garbage") as mock:
        cfg = ModelEndpointConfig(
            base_url=mock.base_url, model_name="garbage",
            parallelism=4, backoff_base=0.0)
        garbage = run_benchmark([design], cfg, str(tmp_path / "garbage"))
    assert garbage.tasks[0].metrics["validity"] == 0.0
    assert garbage.tasks[0].n_records == 100
    lines = (tmp_path / "garbage" / "records.jsonl").read_text().splitlines()
    assert len(lines) == 100

    report_pass("end-to-end-harness",
                f"12 task runs x 100 instances in {elapsed:.1f}s, "
                "gold=100%, reports byte-identical, garbage validity=0")


def test_report_regression_canned_records():
    records = []
    for line in (DATA / "golden" / "records.jsonl").read_text().splitlines():
        obj = json.loads(line)
        records.append(EvalRecord.from_json_obj(obj))
    task = BenchmarkTask(
        kind=TaskKind.MOLECULE_DESIGN, dataset_path="", name="design-fixture")
    report = BenchReport(
        manifest={"model": "canned-fixture"},
        tasks=[score_task(task, records)],
    )
    stored = (DATA / "golden" / "report.json").read_bytes()
    assert report.to_json().encode("utf-8") == stored

    fixture_row = BenchReport(
        manifest={"model": "baseline"},
        tasks=[
            TaskReport(name=k, kind=k, variant="", dataset_name="",
                       n_records=100, metrics={"accuracy": v})
            for k, v in (("s2i", 0.0), ("i2s", 0.012),
                         ("s2mf", 0.086), ("i2mf", 0.084))
        ],
    )
    markdown = render_report([fixture_row], "markdown")
    lines = markdown.splitlines()
    header_at = next(i for i, line in enumerate(lines)
                     if line == "| Model | S2I | I2S | S2MF | I2MF |")
    assert lines[header_at + 2] == "| baseline | 0.0 | 1.2 | 8.6 | 8.4 |"
    report_pass("report-regression",
                "canned records reproduce stored report.json; "
                "fixture row 0/1.2/8.6/8.4 under S2I/I2S/S2MF/I2MF")
