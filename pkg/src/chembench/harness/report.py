"""Benchmark report assembly and rendering.

JSON is the canonical machine format; markdown mirrors the familiar
benchmark table layout, one section per task group:

* name prediction: columns S2I | I2S | S2MF | I2MF (accuracy, percent)
* captioning: BLEU-2 | BLEU-4 | ROUGE-1 | ROUGE-2 | ROUGE-L
* molecule design: Exact | BLEU | Dis | Validity | FTS(keys) | FTS(path)
  | FTS(morgan)
* property prediction: one column per dataset plus Avg (AUC-ROC, percent)
* reactions: YP | RP | Retro | RS (accuracy, percent)

Accuracy-type values render as percent with one decimal; similarity-type
values with three decimals; edit distances with one decimal.  Values in
report.json are raw fractions; rendering applies the display scaling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .score import TaskReport

#: metrics displayed as percentages with one decimal
_PERCENT = frozenset({
    "accuracy", "exact", "validity", "auc_roc", "top50",
})
_DISTANCE = frozenset({"levenshtein"})

_NAME_PREDICTION = (
    ("s2i", "S2I"), ("i2s", "I2S"), ("s2mf", "S2MF"), ("i2mf", "I2MF"))

_CAPTION_COLUMNS = (
    ("bleu2", "BLEU-2"), ("bleu4", "BLEU-4"),
    ("rouge1", "ROUGE-1"), ("rouge2", "ROUGE-2"), ("rougeL", "ROUGE-L"),
)

_DESIGN_COLUMNS = (
    ("exact", "Exact"), ("bleu", "BLEU"), ("levenshtein", "Dis"),
    ("validity", "Validity"), ("fts_keys", "FTS(keys)"),
    ("fts_path", "FTS(path)"), ("fts_morgan", "FTS(morgan)"),
)

_REACTION_COLUMNS = (
    ("yield", "YP"), ("reaction_prediction", "RP"),
    ("retrosynthesis", "Retro"), ("reagent_selection", "RS"),
)


@dataclass
class BenchReport:
    """All task reports from one run plus its reproducibility manifest."""

    manifest: dict
    tasks: list[TaskReport] = field(default_factory=list)
    footnotes: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        payload = {
            "manifest": self.manifest,
            "tasks": [t.to_json_obj() for t in self.tasks],
            "footnotes": self.footnotes,
        }
        return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                          indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BenchReport":
        obj = json.loads(text)
        return cls(
            manifest=obj.get("manifest", {}),
            tasks=[TaskReport.from_json_obj(t) for t in obj.get("tasks", [])],
            footnotes=list(obj.get("footnotes", [])),
        )

    def label(self) -> str:
        return str(self.manifest.get("model", "model"))


def format_value(metric: str, value: float) -> str:
    if metric in _PERCENT:
        return f"{100 * value:.1f}"
    if metric in _DISTANCE:
        return f"{value:.1f}"
    return f"{value:.3f}"


def _find(report: BenchReport, kind: str) -> TaskReport | None:
    for task in report.tasks:
        if task.kind == kind:
            return task
    return None


def _mean_over_kind(report: BenchReport, kind: str,
                    metric: str) -> float | None:
    values = [
        t.metrics[metric] for t in report.tasks
        if t.kind == kind and metric in t.metrics
    ]
    if not values:
        return None
    return sum(values) / len(values)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    lines = [
        "| " + " | ".join(headers) + " |",
        "|" + "|".join("---" for _ in headers) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def _group_section(reports: list[BenchReport], title: str,
                   columns: tuple[tuple[str, str], ...],
                   value_of) -> str | None:
    rows = []
    for report in reports:
        row = [report.label()]
        has_value = False
        for key, _ in columns:
            metric, value = value_of(report, key)
            if value is None:
                row.append("-")
            else:
                row.append(format_value(metric, value))
                has_value = True
        if has_value:
            rows.append(row)
    if not rows:
        return None
    headers = ["Model"] + [label for _, label in columns]
    return f"## {title}\n\n" + _table(headers, rows)


def render_report(reports: list[BenchReport], format: str = "markdown") -> str:
    """Render one document covering all reports (one table row each)."""
    if format == "json":
        payload = [json.loads(r.to_json()) for r in reports]
        return json.dumps(payload, ensure_ascii=False, sort_keys=True,
                          indent=2) + "\n"
    if format != "markdown":
        raise ValueError(f"unknown format {format!r}")

    sections: list[str] = ["# Benchmark report\n"]
    for report in reports:
        manifest = dict(report.manifest)
        manifest.pop("sample_ids", None)
        sections.append(
            f"## Run: {report.label()}\n\n"
            + "\n".join(f"- {k}: {v}" for k, v in sorted(manifest.items()))
            + "\n"
        )

    def kind_accuracy(report: BenchReport, kind: str):
        task = _find(report, kind)
        if task is None:
            return "accuracy", None
        return "accuracy", task.metrics.get("accuracy")

    def task_metric(kind: str):
        def get(report: BenchReport, metric: str):
            task = _find(report, kind)
            if task is None:
                return metric, None
            return metric, task.metrics.get(metric)
        return get

    def reaction_mean(report: BenchReport, kind: str):
        return "accuracy", _mean_over_kind(report, kind, "accuracy")

    for section in (
        _group_section(reports, "Name prediction (accuracy, %)",
                       _NAME_PREDICTION, kind_accuracy),
        _group_section(reports, "Molecule captioning",
                       _CAPTION_COLUMNS, task_metric("captioning")),
        _group_section(reports, "Text-based molecule design",
                       _DESIGN_COLUMNS, task_metric("molecule_design")),
        _property_section(reports),
        _group_section(reports, "Reaction tasks (accuracy, %)",
                       _REACTION_COLUMNS, reaction_mean),
        _detail_section(reports),
        _footnote_section(reports),
    ):
        if section:
            sections.append(section)
    return "\n".join(sections)


def _property_section(reports: list[BenchReport]) -> str | None:
    datasets: list[str] = []
    for report in reports:
        for task in report.tasks:
            if task.kind == "property":
                name = task.dataset_name or task.name
                if name not in datasets:
                    datasets.append(name)
    if not datasets:
        return None
    rows = []
    for report in reports:
        row = [report.label()]
        values = []
        for dataset in datasets:
            task = next(
                (t for t in report.tasks
                 if t.kind == "property"
                 and (t.dataset_name or t.name) == dataset),
                None,
            )
            if task and "auc_roc" in task.metrics:
                value = task.metrics["auc_roc"]
                values.append(value)
                row.append(format_value("auc_roc", value))
            else:
                row.append("-")
        row.append(format_value("auc_roc", sum(values) / len(values))
                   if values else "-")
        rows.append(row)
    return ("## Molecular property prediction (AUC-ROC, %)\n\n"
            + _table(["Model"] + datasets + ["Avg"], rows))


def _detail_section(reports: list[BenchReport]) -> str | None:
    rows = []
    for report in reports:
        for task in report.tasks:
            for metric in sorted(task.metrics):
                rows.append([
                    report.label(), task.name, metric,
                    format_value(metric, task.metrics[metric]),
                ])
    if not rows:
        return None
    return ("## All task metrics\n\n"
            + _table(["Model", "Task", "Metric", "Value"], rows))


def _footnote_section(reports: list[BenchReport]) -> str:
    notes = []
    for report in reports:
        notes.extend(report.footnotes)
        for task in report.tasks:
            notes.extend(f"{task.name}: {n}" for n in task.footnotes)
    notes.append(
        "METEOR is not reported; it needs external lexical resources.")
    notes.append(
        "FTS columns use this toolkit's documented fingerprints and are "
        "not numerically comparable to other toolkits' values.")
    return "## Footnotes\n\n" + "\n".join(f"- {n}" for n in notes) + "\n"
