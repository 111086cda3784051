"""Per-record scoring and per-task aggregation.

Every aggregate a task reports is recomputable from its stored records:
mean-type metrics average the per-record scores, and AUC is recomputed
from the per-record proxy scores and labels.  Records never disappear;
extraction and transport failures score zero (and skip similarity metrics
that need a parseable molecule) but stay in the record list.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from ..chemgraph import ParseDiagnostic, parse_smiles
from ..fingerprint import FingerprintKind
from ..metrics import (
    AllTasksSingleClass,
    MatchResult,
    RankedLabels,
    ScorePair,
    SingleClass,
    auc_roc,
    bleu,
    exact_match_canonical,
    formula_exact,
    fts_aggregate,
    levenshtein,
    rouge,
)
from .tasks import BenchmarkTask, TaskKind


class MetricUnavailable(ValueError):
    pass


@dataclass
class EvalRecord:
    instance_id: str
    prompt: str
    reference: Any
    raw_output: str = ""
    extracted: str = ""
    scores: dict[str, float] = field(default_factory=dict)
    error: str = ""

    def to_json_obj(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "prompt": self.prompt,
            "reference": self.reference,
            "raw_output": self.raw_output,
            "extracted": self.extracted,
            "scores": self.scores,
            "error": self.error,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "EvalRecord":
        return cls(
            instance_id=str(obj["instance_id"]),
            prompt=obj.get("prompt", ""),
            reference=obj.get("reference"),
            raw_output=obj.get("raw_output", ""),
            extracted=obj.get("extracted", ""),
            scores=dict(obj.get("scores", {})),
            error=obj.get("error", ""),
        )


def normalize_name(text: str) -> str:
    """IUPAC-style normalization: lowercase, collapse internal whitespace,
    strip one trailing period."""
    text = re.sub(r"\s+", " ", text.strip().lower())
    return text[:-1].strip() if text.endswith(".") else text


def _canonical_accuracy(extracted: str, reference: str) -> tuple[float, float]:
    """(accuracy, validity) for a SMILES answer scored by canonical match."""
    result = exact_match_canonical(extracted, reference)
    if result is MatchResult.INVALID_PRED:
        return 0.0, 0.0
    return (1.0 if result is MatchResult.MATCH else 0.0), 1.0


def score_record(task: BenchmarkTask, record: EvalRecord) -> dict[str, float]:
    """Per-record scores; records that failed extraction score zero."""
    kind = task.kind
    extracted = record.extracted
    failed = bool(record.error) and not extracted
    scores: dict[str, float] = {}

    if kind is TaskKind.S2I:
        gold = str(record.reference)
        scores["accuracy"] = (
            0.0 if failed
            else float(normalize_name(extracted) == normalize_name(gold)))
    elif kind in (TaskKind.S2MF, TaskKind.I2MF):
        scores["accuracy"] = (
            0.0 if failed else float(formula_exact(extracted,
                                                   str(record.reference))))
    elif kind is TaskKind.I2S:
        if failed:
            scores["accuracy"] = 0.0
            scores["validity"] = 0.0
        else:
            acc, valid = _canonical_accuracy(extracted, str(record.reference))
            scores["accuracy"] = acc
            scores["validity"] = valid
    elif kind is TaskKind.CAPTIONING:
        gold = str(record.reference)
        pair = [ScorePair(extracted if not failed else "", gold)]
        scores["bleu2"] = bleu(pair, max_n=2, tokenizer="word")
        scores["bleu4"] = bleu(pair, max_n=4, tokenizer="word")
        for variant in ("rouge1", "rouge2", "rougeL"):
            scores[variant] = rouge(pair, variant)
    elif kind is TaskKind.MOLECULE_DESIGN:
        gold = str(record.reference)
        pred = "" if failed else extracted
        pair = [ScorePair(pred, gold)]
        scores["bleu"] = bleu(pair, max_n=2, tokenizer="char")
        scores["levenshtein"] = float(levenshtein(pred, gold))
        pred_mol = parse_smiles(pred.strip()) if pred.strip() else None
        valid = pred_mol is not None and not isinstance(
            pred_mol, ParseDiagnostic)
        scores["validity"] = float(valid)
        if valid:
            agg_by_kind = {
                "fts_keys": FingerprintKind.KEYS,
                "fts_path": FingerprintKind.PATH,
                "fts_morgan": FingerprintKind.MORGAN,
            }
            scores["exact"] = float(
                exact_match_canonical(pred, gold) is MatchResult.MATCH)
            for name, fp_kind in agg_by_kind.items():
                scores[name] = fts_aggregate(pair, fp_kind).mean_fts
        else:
            scores["exact"] = 0.0
    elif kind is TaskKind.PROPERTY:
        answer = "" if failed else extracted.strip().lower()
        scores["proxy_score"] = 1.0 if answer == "yes" else 0.0
        gold = str(record.reference["label"]).strip().lower()
        scores["accuracy"] = float(answer == gold)
    elif kind is TaskKind.YIELD:
        answer = "" if failed else extracted.strip().lower()
        gold = str(record.reference).strip().lower()
        scores["accuracy"] = float(answer == gold)
    elif kind in (TaskKind.REACTION_PREDICTION, TaskKind.RETROSYNTHESIS):
        if failed:
            scores["accuracy"] = 0.0
            scores["validity"] = 0.0
        else:
            acc, valid = _canonical_accuracy(extracted, str(record.reference))
            scores["accuracy"] = acc
            scores["validity"] = valid
    elif kind is TaskKind.REAGENT_SELECTION:
        ref = record.reference
        if task.variant == "ligand" and "ranked_candidates" in ref:
            ranked = list(ref["ranked_candidates"])
            half = ranked[: (len(ranked) + 1) // 2]
            scores["accuracy"] = float(not failed and extracted in half)
        else:
            gold = str(ref["answer"] if isinstance(ref, dict) else ref)
            scores["accuracy"] = float(not failed and extracted == gold)
    else:  # pragma: no cover
        raise MetricUnavailable(f"no scorer for kind {kind}")
    return scores


@dataclass
class TaskReport:
    name: str
    kind: str
    variant: str
    dataset_name: str
    n_records: int
    metrics: dict[str, float]
    skipped: dict[str, int] = field(default_factory=dict)
    footnotes: list[str] = field(default_factory=list)

    def to_json_obj(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "variant": self.variant,
            "dataset_name": self.dataset_name,
            "n_records": self.n_records,
            "metrics": self.metrics,
            "skipped": self.skipped,
            "footnotes": self.footnotes,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "TaskReport":
        return cls(
            name=obj["name"],
            kind=obj["kind"],
            variant=obj.get("variant", ""),
            dataset_name=obj.get("dataset_name", ""),
            n_records=obj.get("n_records", 0),
            metrics=dict(obj.get("metrics", {})),
            skipped=dict(obj.get("skipped", {})),
            footnotes=list(obj.get("footnotes", [])),
        )


#: metrics averaged over the records that define them (validity-restricted)
_VALID_ONLY = ("fts_keys", "fts_path", "fts_morgan")


def score_task(task: BenchmarkTask, records: list[EvalRecord]) -> TaskReport:
    """Aggregate per-record scores into the task's metric table."""
    if not records:
        raise MetricUnavailable("no records to score")
    records = sorted(records, key=lambda r: r.instance_id)
    footnotes: list[str] = []
    skipped: dict[str, int] = {}
    metrics: dict[str, float] = {}

    names: list[str] = []
    for record in records:
        for name in record.scores:
            if name not in names:
                names.append(name)
    for name in names:
        if name == "proxy_score":
            continue
        values = [r.scores[name] for r in records if name in r.scores]
        if name in _VALID_ONLY:
            # undefined for unparsable predictions; mean over valid only
            if not values:
                metrics[name] = 0.0
                footnotes.append(
                    f"{name}: no valid predictions; reported as 0.0")
                continue
        metrics[name] = sum(values) / len(values)

    if task.kind is TaskKind.PROPERTY:
        metrics.update(_property_auc(records, skipped, footnotes))
    return TaskReport(
        name=task.name,
        kind=task.kind.value,
        variant=task.variant,
        dataset_name=task.dataset_name,
        n_records=len(records),
        metrics=metrics,
        skipped=skipped,
        footnotes=footnotes,
    )


def _property_auc(records: list[EvalRecord], skipped: dict[str, int],
                  footnotes: list[str]) -> dict[str, float]:
    """AUC from hard yes/no proxy scores, averaged over sub-tasks."""
    by_task: dict[str, list[tuple[float, bool]]] = {}
    for record in records:
        name = str(record.reference.get("task_name", "default"))
        label = str(record.reference["label"]).strip().lower() == "yes"
        by_task.setdefault(name, []).append(
            (record.scores.get("proxy_score", 0.0), label))
    values = []
    for name in sorted(by_task):
        pairs = by_task[name]
        data = RankedLabels(
            scores=tuple(score for score, _ in pairs),
            labels=tuple(label for _, label in pairs),
        )
        try:
            values.append(auc_roc(data))
        except SingleClass:
            skipped[name] = len(pairs)
            footnotes.append(
                f"sub-task {name}: single class in sample; AUC skipped")
    if not values:
        raise AllTasksSingleClass("every sub-task was single-class")
    out = {"auc_roc": sum(values) / len(values)}
    if len(by_task) > 1:
        out["auc_task_count"] = float(len(values))
    return out
