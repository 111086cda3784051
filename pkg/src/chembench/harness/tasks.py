"""Benchmark task battery: kinds, dataset schemas, prompt rendering.

Datasets are JSONL, one instance per line:

    {"id": "...", "prompt_fields": {...}, "reference": ...}

``prompt_fields`` feeds the task's prompt template; ``reference`` holds the
gold answer, whose shape depends on the kind:

===================  ==========================  ===========================
kind                 prompt_fields               reference
===================  ==========================  ===========================
s2i                  smiles                      IUPAC name (string)
i2s                  iupac                       SMILES (string)
s2mf                 smiles                      formula (string)
i2mf                 iupac                       formula (string)
captioning           smiles                      description (string)
molecule_design      description                 SMILES (string)
property             smiles, question            {"label": "Yes"/"No",
                                                  "task_name": "..."}
yield                reaction                    "Yes"/"No" (high yield)
reaction_prediction  reaction (reactants>...>)   product SMILES (string)
retrosynthesis       product                     reactant SMILES (string)
reagent_selection    question, candidates        {"answer": "..."} or, for
                                                 the ligand variant,
                                                 {"ranked_candidates": [...]}
===================  ==========================  ===========================
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..rng import SplitMix64


class TaskKind(enum.Enum):
    S2I = "s2i"
    I2S = "i2s"
    S2MF = "s2mf"
    I2MF = "i2mf"
    CAPTIONING = "captioning"
    MOLECULE_DESIGN = "molecule_design"
    PROPERTY = "property"
    YIELD = "yield"
    REACTION_PREDICTION = "reaction_prediction"
    RETROSYNTHESIS = "retrosynthesis"
    REAGENT_SELECTION = "reagent_selection"


#: kinds whose extracted answer should parse as SMILES
SMILES_KINDS = frozenset({
    TaskKind.I2S,
    TaskKind.MOLECULE_DESIGN,
    TaskKind.REACTION_PREDICTION,
    TaskKind.RETROSYNTHESIS,
})

FORMULA_KINDS = frozenset({TaskKind.S2MF, TaskKind.I2MF})

YESNO_KINDS = frozenset({TaskKind.PROPERTY, TaskKind.YIELD})

TEXT_KINDS = frozenset({TaskKind.S2I, TaskKind.CAPTIONING})

DEFAULT_TEMPLATES: dict[TaskKind, str] = {
    TaskKind.S2I: (
        "Translate the following SMILES notation into its IUPAC name.\n"
        "SMILES: {smiles}\nAnswer with the name only."),
    TaskKind.I2S: (
        "Translate the following IUPAC name into SMILES notation.\n"
        "Name: {iupac}\nAnswer with the SMILES only."),
    TaskKind.S2MF: (
        "Give the molecular formula of the molecule with this SMILES.\n"
        "SMILES: {smiles}\nAnswer with the formula only."),
    TaskKind.I2MF: (
        "Give the molecular formula of the molecule with this IUPAC name.\n"
        "Name: {iupac}\nAnswer with the formula only."),
    TaskKind.CAPTIONING: (
        "Describe the molecule with the following SMILES in one or two "
        "sentences.\nSMILES: {smiles}"),
    TaskKind.MOLECULE_DESIGN: (
        "Write the SMILES of a molecule that fits this description.\n"
        "Description: {description}\nAnswer with the SMILES only."),
    TaskKind.PROPERTY: (
        "Answer the following question about the molecule with Yes or No.\n"
        "Question: {question}\nSMILES: {smiles}"),
    TaskKind.YIELD: (
        "Is the following reaction a high-yield reaction? "
        "Answer Yes or No.\nReaction: {reaction}"),
    TaskKind.REACTION_PREDICTION: (
        "Predict the product of the following reaction.\n"
        "Reaction: {reaction}\nAnswer with the product SMILES only."),
    TaskKind.RETROSYNTHESIS: (
        "Propose reactants for the following product.\n"
        "Product: {product}\nAnswer with the reactant SMILES only."),
    TaskKind.REAGENT_SELECTION: (
        "{question}\nCandidates:\n{candidates}\n"
        "Answer with one candidate exactly as written."),
}

DEFAULT_METRICS: dict[TaskKind, tuple[str, ...]] = {
    TaskKind.S2I: ("accuracy",),
    TaskKind.I2S: ("accuracy", "validity"),
    TaskKind.S2MF: ("accuracy",),
    TaskKind.I2MF: ("accuracy",),
    TaskKind.CAPTIONING: (
        "bleu2", "bleu4", "rouge1", "rouge2", "rougeL"),
    TaskKind.MOLECULE_DESIGN: (
        "exact", "bleu", "levenshtein", "validity",
        "fts_keys", "fts_path", "fts_morgan"),
    TaskKind.PROPERTY: ("auc_roc",),
    TaskKind.YIELD: ("accuracy",),
    TaskKind.REACTION_PREDICTION: ("accuracy", "validity"),
    TaskKind.RETROSYNTHESIS: ("accuracy", "validity"),
    TaskKind.REAGENT_SELECTION: ("accuracy",),
}


class SampleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    id: str
    prompt_fields: dict[str, Any]
    reference: Any

    @classmethod
    def from_json(cls, line: str) -> "Instance":
        obj = json.loads(line)
        return cls(
            id=str(obj["id"]),
            prompt_fields=obj.get("prompt_fields", {}),
            reference=obj["reference"],
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "prompt_fields": self.prompt_fields,
                "reference": self.reference,
            },
            ensure_ascii=False,
            sort_keys=True,
        )


@dataclass(frozen=True)
class BenchmarkTask:
    kind: TaskKind
    dataset_path: str
    name: str = ""
    sample_size: int = 100
    seed: int = 0
    prompt_template: str = ""
    metric_set: tuple[str, ...] = ()
    variant: str = ""  # reagent_selection: reactant/solvent/ligand
    dataset_name: str = ""  # property: BACE, BBBP, ...
    train_path: str = ""  # exemplar source for few-shot prompts

    def __post_init__(self):
        if not self.prompt_template:
            object.__setattr__(
                self, "prompt_template", DEFAULT_TEMPLATES[self.kind])
        if not self.metric_set:
            object.__setattr__(
                self, "metric_set", DEFAULT_METRICS[self.kind])
        if not self.name:
            label = self.variant or self.dataset_name
            object.__setattr__(
                self, "name",
                f"{self.kind.value}:{label}" if label else self.kind.value)

    def render_prompt(self, instance: Instance) -> str:
        fields = dict(instance.prompt_fields)
        if "candidates" in fields and isinstance(fields["candidates"], list):
            fields["candidates"] = "\n".join(fields["candidates"])
        return self.prompt_template.format(**fields)


def load_dataset(path: str | Path) -> list[Instance]:
    out = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                out.append(Instance.from_json(line))
    return out


def sample_instances(dataset: list, n: int, seed: int) -> list:
    """First n elements of a seeded partial Fisher-Yates shuffle."""
    if n > len(dataset):
        raise SampleTooLarge(
            f"requested {n} from a dataset of {len(dataset)}")
    return SplitMix64(seed).sample(list(dataset), n)


def reference_answer(kind: TaskKind, reference: Any) -> str:
    """The gold string a perfect model would output for this instance."""
    if kind is TaskKind.PROPERTY:
        return str(reference["label"])
    if kind is TaskKind.REAGENT_SELECTION:
        if "answer" in reference:
            return str(reference["answer"])
        return str(reference["ranked_candidates"][0])
    return str(reference)
