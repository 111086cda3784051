"""Builders for the five instruction-data families.

Families: molecule description (md), text-based molecule design (tbmd),
molecular property prediction (mpp), reaction completion (rc), and
molecular notation alignment (mna, four directions).  Every builder is a
pure function of (inputs, seed): instruction templates are drawn with a
seeded splitmix64 stream and instance ids are positional, so reruns emit
byte-identical JSONL.

Conventions fixed here because the upstream descriptions leave them open:

* A sentence ends at ``. ! ?`` followed by whitespace; descriptions with
  three or more sentences are emitted twice with distinct ids.
* Reaction completion masks one or two slots (two only when the reaction
  has at least three reactant+product slots) with the literal token
  ``[MASK]``; reagents are never masked.
* Any SMILES placed in ``returns`` is canonicalized first.
* Templates use named placeholders: {smiles}, {description}, {iupac},
  {reaction}, {question}.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .chemgraph import (
    ParseDiagnostic,
    canonical_smiles,
    mol_from_smiles,
    parse_smiles,
)
from .rng import SplitMix64


class UnparsableSmiles(ValueError):
    def __init__(self, record_id: str, smiles: str, detail: str):
        super().__init__(f"record {record_id}: {smiles!r} ({detail})")
        self.record_id = record_id


class RecordRejected(ValueError):
    pass


class MissingIupac(ValueError):
    pass


class NothingToMask(ValueError):
    pass


class InsufficientGeneralData(ValueError):
    pass


MNA_DIRECTIONS = ("s2i", "i2s", "s2mf", "i2mf")

TASK_NAMES = (
    "MD", "TBMD", "MPP", "RC",
    "MNA_s2i", "MNA_i2s", "MNA_s2mf", "MNA_i2mf",
)


@dataclass(frozen=True)
class TaskInstance:
    id: str
    task: str
    prompt: str
    returns: str
    template_id: str
    meta: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.prompt or not self.returns:
            raise RecordRejected(
                f"instance {self.id}: prompt and returns must be nonempty")

    def to_json(self) -> str:
        # field names and order fixed for byte-stable goldens
        payload = {
            "id": self.id,
            "task": self.task,
            "prompt": self.prompt,
            "returns": self.returns,
            "template_id": self.template_id,
            "meta": dict(sorted(self.meta.items())),
        }
        return json.dumps(payload, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "TaskInstance":
        obj = json.loads(line)
        return cls(
            id=obj["id"],
            task=obj["task"],
            prompt=obj["prompt"],
            returns=obj["returns"],
            template_id=obj["template_id"],
            meta=obj.get("meta", {}),
        )


@dataclass(frozen=True)
class TemplatePool:
    task: str
    templates: tuple[str, ...]

    def __post_init__(self):
        if not self.templates:
            raise ValueError("template pool must hold at least one template")

    @classmethod
    def from_lines(cls, task: str, lines: Iterable[str]) -> "TemplatePool":
        templates = [
            line.strip() for line in lines
            if line.strip() and not line.lstrip().startswith("#")
        ]
        return cls(task=task, templates=tuple(templates))

    def draw(self, rng: SplitMix64) -> tuple[str, str]:
        i = rng.randrange(len(self.templates))
        return self.templates[i], f"{self.task.lower()}-t{i:03d}"


@dataclass(frozen=True)
class ReactionRecord:
    reactants: tuple[str, ...]
    reagents: tuple[str, ...]
    products: tuple[str, ...]

    def __post_init__(self):
        if not self.reactants or not self.products:
            raise RecordRejected("reactants and products must be nonempty")
        for smi in (*self.reactants, *self.reagents, *self.products):
            result = parse_smiles(smi)
            if isinstance(result, ParseDiagnostic):
                raise UnparsableSmiles("reaction", smi, str(result))

    @classmethod
    def from_string(cls, text: str) -> "ReactionRecord":
        parts = text.strip().split(">")
        if len(parts) != 3:
            raise RecordRejected(
                f"reaction must be reactants>reagents>products: {text!r}")
        split = lambda s: tuple(x for x in s.split(".") if x)  # noqa: E731
        return cls(
            reactants=split(parts[0]),
            reagents=split(parts[1]),
            products=split(parts[2]),
        )

    def render(self, masked: Mapping[int, str] | None = None) -> str:
        masked = masked or {}
        slots = list(self.reactants) + list(self.products)
        for pos, token in masked.items():
            slots[pos] = token
        n_react = len(self.reactants)
        return "{}>{}>{}".format(
            ".".join(slots[:n_react]),
            ".".join(self.reagents),
            ".".join(slots[n_react:]),
        )


_SENTENCE_BREAK = re.compile(r"[.!?]+\s+")


def sentence_count(text: str) -> int:
    if not text.strip():
        return 0
    return 1 + len(_SENTENCE_BREAK.findall(text.strip()))


def _require_parse(record_id: str, smiles: str):
    result = parse_smiles(smiles)
    if isinstance(result, ParseDiagnostic):
        raise UnparsableSmiles(record_id, smiles, str(result))
    return result


def build_md(
    records: Sequence[tuple[str, str]],
    pool: TemplatePool,
    seed: int,
) -> list[TaskInstance]:
    """Molecule -> description; long descriptions are emitted twice."""
    rng = SplitMix64(seed)
    out: list[TaskInstance] = []
    for i, (smiles, description) in enumerate(records):
        rid = f"md-{i:06d}"
        _require_parse(rid, smiles)
        if not description.strip():
            raise RecordRejected(f"record {rid}: empty description")
        template, template_id = pool.draw(rng)
        prompt = template.format(smiles=smiles)
        copies = 2 if sentence_count(description) >= 3 else 1
        for copy in range(copies):
            out.append(TaskInstance(
                id=rid if copy == 0 else f"{rid}-b",
                task="MD",
                prompt=prompt,
                returns=description,
                template_id=template_id,
                meta={"source_index": str(i)},
            ))
    return out


def build_tbmd(
    records: Sequence[tuple[str, str]],
    pool: TemplatePool,
    seed: int,
) -> list[TaskInstance]:
    """Description -> molecule; returns carry canonical SMILES."""
    rng = SplitMix64(seed)
    out: list[TaskInstance] = []
    for i, (smiles, description) in enumerate(records):
        rid = f"tbmd-{i:06d}"
        mol = _require_parse(rid, smiles)
        if not description.strip():
            raise RecordRejected(f"record {rid}: empty description")
        template, template_id = pool.draw(rng)
        prompt = template.format(description=description)
        returns = canonical_smiles(mol)
        copies = 2 if sentence_count(description) >= 3 else 1
        for copy in range(copies):
            out.append(TaskInstance(
                id=rid if copy == 0 else f"{rid}-b",
                task="TBMD",
                prompt=prompt,
                returns=returns,
                template_id=template_id,
                meta={"source_index": str(i)},
            ))
    return out


def build_mpp(
    table: Sequence[tuple[str, Mapping[str, int | None]]],
    pool: TemplatePool,
    seed: int,
    dataset: str = "moleculenet",
) -> list[TaskInstance]:
    """One instance per (molecule, labeled task) cell with a 0/1 label."""
    rng = SplitMix64(seed)
    out: list[TaskInstance] = []
    for i, (smiles, labels) in enumerate(table):
        rid = f"mpp-{i:06d}"
        _require_parse(rid, smiles)
        for task_name in labels:
            label = labels[task_name]
            if label is None:
                continue
            if label not in (0, 1):
                raise RecordRejected(
                    f"record {rid}: label for {task_name} must be 0/1/missing")
            template, template_id = pool.draw(rng)
            prompt = template.format(smiles=smiles, question=task_name)
            out.append(TaskInstance(
                id=f"{rid}-{task_name}",
                task="MPP",
                prompt=prompt,
                returns="Yes" if label else "No",
                template_id=template_id,
                meta={
                    "dataset": dataset,
                    "task_name": task_name,
                    "source_index": str(i),
                },
            ))
    return out


MASK_TOKEN = "[MASK]"


def build_rc(
    reactions: Sequence[ReactionRecord],
    pool: TemplatePool,
    seed: int,
    max_masked: int = 2,
) -> list[TaskInstance]:
    """Mask 1..max_masked reactant/product slots; returns the masked SMILES
    joined by '.' in slot order."""
    rng = SplitMix64(seed)
    out: list[TaskInstance] = []
    for i, reaction in enumerate(reactions):
        rid = f"rc-{i:06d}"
        slots = list(reaction.reactants) + list(reaction.products)
        if len(slots) < 2:
            raise NothingToMask(f"record {rid}: nothing can be masked")
        k_max = min(max_masked, 2 if len(slots) >= 3 else 1)
        k = 1 + rng.randrange(k_max)
        positions = sorted(rng.sample(list(range(len(slots))), k))
        template, template_id = pool.draw(rng)
        rendered = reaction.render({p: MASK_TOKEN for p in positions})
        returns = ".".join(
            canonical_smiles(mol_from_smiles(slots[p])) for p in positions)
        out.append(TaskInstance(
            id=rid,
            task="RC",
            prompt=template.format(reaction=rendered),
            returns=returns,
            template_id=template_id,
            meta={
                "masked_positions": ",".join(map(str, positions)),
                "n_reactants": str(len(reaction.reactants)),
                "n_products": str(len(reaction.products)),
                "source_index": str(i),
            },
        ))
    return out


def build_mna(
    records: Sequence[tuple[str, str]],
    pool: TemplatePool,
    seed: int,
    direction: str,
) -> list[TaskInstance]:
    """Notation translation: s2i, i2s, s2mf, or i2mf over (smiles, iupac)."""
    from .chemgraph import molecular_formula

    if direction not in MNA_DIRECTIONS:
        raise ValueError(f"direction must be one of {MNA_DIRECTIONS}")
    rng = SplitMix64(seed)
    out: list[TaskInstance] = []
    for i, (smiles, iupac) in enumerate(records):
        rid = f"mna-{direction}-{i:06d}"
        mol = _require_parse(rid, smiles)
        if direction != "s2mf" and not iupac.strip():
            raise MissingIupac(f"record {rid}: IUPAC name required")
        template, template_id = pool.draw(rng)
        if direction == "s2i":
            prompt = template.format(smiles=smiles)
            returns = iupac
        elif direction == "i2s":
            prompt = template.format(iupac=iupac)
            returns = canonical_smiles(mol)
        elif direction == "s2mf":
            prompt = template.format(smiles=smiles)
            returns = molecular_formula(mol)
        else:  # i2mf: formula derived from the paired SMILES
            prompt = template.format(iupac=iupac)
            returns = molecular_formula(mol)
        out.append(TaskInstance(
            id=rid,
            task=f"MNA_{direction}",
            prompt=prompt,
            returns=returns,
            template_id=template_id,
            meta={"source_index": str(i)},
        ))
    return out


def mix_datasets(
    chem: Sequence[TaskInstance],
    general: Sequence[TaskInstance],
    ratio_chem_to_general: tuple[int, int] = (1, 2),
    seed: int = 0,
    allow_upsample: bool = False,
) -> list[TaskInstance]:
    """Interleave chemistry and general instances at the requested ratio.

    Chemistry instances are always kept whole; the general side is
    down-sampled when over-represented.  When the general pool is too small
    the call fails unless ``allow_upsample`` permits sampling with
    replacement.  Output order is one seeded permutation.
    """
    a, b = ratio_chem_to_general
    if a <= 0 or b <= 0:
        raise ValueError("ratio parts must be positive")
    if not chem or not general:
        raise ValueError("both datasets must be nonempty")
    rng = SplitMix64(seed)
    target_general = round(len(chem) * b / a)
    if len(general) >= target_general:
        kept_general = rng.sample(list(general), target_general)
    elif allow_upsample:
        kept_general = list(general)
        while len(kept_general) < target_general:
            kept_general.append(general[rng.randrange(len(general))])
    else:
        raise InsufficientGeneralData(
            f"need {target_general} general instances, have {len(general)}; "
            "pass allow_upsample to sample with replacement")
    merged = list(chem) + kept_general
    rng.shuffle(merged)
    return merged


def write_jsonl(instances: Iterable[TaskInstance]) -> str:
    return "".join(inst.to_json() + "\n" for inst in instances)


def read_jsonl(text: str) -> list[TaskInstance]:
    return [
        TaskInstance.from_json(line)
        for line in text.splitlines()
        if line.strip()
    ]
