"""Scalar scoring functions for benchmark evaluation.

Text metrics: Levenshtein distance over Unicode scalars, macro-averaged
sentence BLEU with add-one smoothing and brevity penalty, and ROUGE-1/2/L
F-measures (beta = 1).  BLEU and ROUGE share the word tokenizer (lowercase,
whitespace split, punctuation as separate tokens); a character tokenizer
serves SMILES strings, which carry no whitespace.

Chemistry metrics: canonical-form exact match, trimmed byte equality for
formulas, and fingerprint Tanimoto aggregation over molecule-design pairs
(similarity averaged over the predictions that parse; validity reported
separately so nothing is lost).

Classification: AUC-ROC by the rank-statistic (Mann-Whitney) formulation
with average ranks on ties, and its unweighted multi-task mean where
single-class tasks are skipped, not zero-scored.

Training-loss bookkeeping: the returns-only negative log-likelihood of one
sample, summing -log P over the masked positions; averaging over a dataset
is the caller's business.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .chemgraph import ParseDiagnostic, canonical_smiles, parse_smiles
from .fingerprint import FingerprintKind, compute_fingerprint, tanimoto


class InvalidReference(ValueError):
    """A reference string that must parse as SMILES does not."""


class LengthMismatch(ValueError):
    """Parallel sequences of different lengths."""


class SingleClass(ValueError):
    """AUC is undefined with only one label class present."""


class AllTasksSingleClass(ValueError):
    """Every task in a multi-task AUC aggregation was single-class."""


@dataclass(frozen=True)
class ScorePair:
    prediction: str
    reference: str


class MatchResult(enum.Enum):
    MATCH = "match"
    NO_MATCH = "no_match"
    INVALID_PRED = "invalid_pred"


def exact_match_canonical(pred: str, ref: str) -> MatchResult:
    ref_mol = parse_smiles(ref.strip())
    if isinstance(ref_mol, ParseDiagnostic):
        raise InvalidReference(f"reference does not parse: {ref_mol}")
    pred_mol = parse_smiles(pred.strip())
    if isinstance(pred_mol, ParseDiagnostic):
        return MatchResult.INVALID_PRED
    if canonical_smiles(pred_mol) == canonical_smiles(ref_mol):
        return MatchResult.MATCH
    return MatchResult.NO_MATCH


def formula_exact(pred: str, ref: str) -> bool:
    return pred.strip() == ref.strip()


def levenshtein(a: str, b: str) -> int:
    """Minimal insert/delete/substitute count over Unicode scalar values."""
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,          # delete from a
                current[j - 1] + 1,       # insert into a
                previous[j - 1] + (ca != cb),
            ))
        previous = current
    return previous[-1]


_WORD_RE = re.compile(r"\w+|[^\w\s]", re.UNICODE)


def tokenize_words(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def tokenize_chars(text: str) -> list[str]:
    return list(text)


def _tokenizer(name: str):
    if name == "word":
        return tokenize_words
    if name == "char":
        return tokenize_chars
    raise ValueError(f"unknown tokenizer {name!r}")


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(
        tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _sentence_bleu(cand: list[str], ref: list[str], max_n: int) -> float:
    import math

    if not cand:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        cand_counts = _ngrams(cand, n)
        ref_counts = _ngrams(ref, n)
        total = sum(cand_counts.values())
        matched = sum(
            min(count, ref_counts[gram])
            for gram, count in cand_counts.items()
        )
        if matched == 0:
            precision = (matched + 1) / (total + 1)  # add-one smoothing
        else:
            precision = matched / total
        log_sum += math.log(precision)
    bleu_core = math.exp(log_sum / max_n)
    c, r = len(cand), len(ref)
    brevity = 1.0 if c >= r else math.exp(1 - r / c)
    return brevity * bleu_core


def bleu(pairs: Sequence[ScorePair], max_n: int = 4,
         tokenizer: str = "word") -> float:
    """Macro-averaged sentence BLEU with uniform 1/max_n weights."""
    if not pairs:
        raise ValueError("pairs must be nonempty")
    tok = _tokenizer(tokenizer)
    scores = [
        _sentence_bleu(tok(p.prediction), tok(p.reference), max_n)
        for p in pairs
    ]
    return sum(scores) / len(scores)


def _overlap_f1(cand: Counter, ref: Counter,
                cand_tokens: list[str], ref_tokens: list[str]) -> float:
    if not cand and not ref:
        return 1.0 if cand_tokens == ref_tokens else 0.0
    if not cand or not ref:
        return 0.0
    matched = sum(min(count, ref[gram]) for gram, count in cand.items())
    if matched == 0:
        return 0.0
    precision = matched / sum(cand.values())
    recall = matched / sum(ref.values())
    return 2 * precision * recall / (precision + recall)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return 0
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[-1]


def rouge(pairs: Sequence[ScorePair], variant: str = "rouge1") -> float:
    """Macro-averaged ROUGE F1 (beta = 1); variants rouge1/rouge2/rougeL."""
    if not pairs:
        raise ValueError("pairs must be nonempty")
    if variant not in ("rouge1", "rouge2", "rougeL"):
        raise ValueError(f"unknown rouge variant {variant!r}")
    scores = []
    for pair in pairs:
        cand = tokenize_words(pair.prediction)
        ref = tokenize_words(pair.reference)
        if variant == "rougeL":
            if not cand and not ref:
                scores.append(1.0)
                continue
            if not cand or not ref:
                scores.append(0.0)
                continue
            lcs = _lcs_length(cand, ref)
            if lcs == 0:
                scores.append(0.0)
                continue
            precision = lcs / len(cand)
            recall = lcs / len(ref)
            scores.append(2 * precision * recall / (precision + recall))
        else:
            n = 1 if variant == "rouge1" else 2
            scores.append(_overlap_f1(
                _ngrams(cand, n), _ngrams(ref, n), cand, ref))
    return sum(scores) / len(scores)


@dataclass(frozen=True)
class RankedLabels:
    scores: tuple[float, ...]
    labels: tuple[bool, ...]

    def __post_init__(self):
        if len(self.scores) != len(self.labels):
            raise LengthMismatch("scores and labels differ in length")


def auc_roc(data: RankedLabels) -> float:
    """Mann-Whitney rank statistic with average ranks on tied scores."""
    n_pos = sum(data.labels)
    n_neg = len(data.labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUC needs both classes present")
    order = sorted(range(len(data.scores)), key=lambda i: data.scores[i])
    ranks = [0.0] * len(order)
    i = 0
    while i < len(order):
        j = i
        while (j + 1 < len(order)
               and data.scores[order[j + 1]] == data.scores[order[i]]):
            j += 1
        average = (i + j) / 2 + 1  # ranks are 1-based
        for k in range(i, j + 1):
            ranks[order[k]] = average
        i = j + 1
    rank_sum = sum(r for r, is_pos in zip(ranks, data.labels) if is_pos)
    return (rank_sum - n_pos * (n_pos + 1) / 2) / (n_pos * n_neg)


@dataclass(frozen=True)
class MultiTaskAuc:
    mean: float
    task_count: int
    skipped: int


def multi_task_auc(per_task: Sequence[RankedLabels]) -> MultiTaskAuc:
    """Unweighted mean AUC over tasks where both classes are present."""
    if not per_task:
        raise ValueError("per_task must be nonempty")
    values = []
    skipped = 0
    for task in per_task:
        try:
            values.append(auc_roc(task))
        except SingleClass:
            skipped += 1
    if not values:
        raise AllTasksSingleClass("no task had both classes")
    return MultiTaskAuc(
        mean=sum(values) / len(values),
        task_count=len(values),
        skipped=skipped,
    )


@dataclass(frozen=True)
class FtsAggregate:
    mean_fts: float
    validity: float
    exact: float
    no_valid_predictions: bool = False


def fts_aggregate(pairs: Sequence[ScorePair],
                  kind: FingerprintKind) -> FtsAggregate:
    """Validity, canonical exact-match rate, and mean Tanimoto over the
    predictions that parse."""
    if not pairs:
        raise ValueError("pairs must be nonempty")
    similarities = []
    exact = 0
    for pair in pairs:
        ref_mol = parse_smiles(pair.reference.strip())
        if isinstance(ref_mol, ParseDiagnostic):
            raise InvalidReference(
                f"reference does not parse: {pair.reference!r}")
        pred_mol = parse_smiles(pair.prediction.strip())
        if isinstance(pred_mol, ParseDiagnostic):
            continue
        if canonical_smiles(pred_mol) == canonical_smiles(ref_mol):
            exact += 1
        similarities.append(tanimoto(
            compute_fingerprint(pred_mol, kind),
            compute_fingerprint(ref_mol, kind),
        ))
    n = len(pairs)
    if not similarities:
        return FtsAggregate(
            mean_fts=0.0, validity=0.0, exact=0.0, no_valid_predictions=True)
    return FtsAggregate(
        mean_fts=sum(similarities) / len(similarities),
        validity=len(similarities) / n,
        exact=exact / n,
    )


def masked_nll(token_logprobs: Sequence[float],
               returns_mask: Sequence[bool]) -> float:
    """Sum of -log P over masked positions for one sample."""
    if len(token_logprobs) != len(returns_mask):
        raise LengthMismatch("logprobs and mask differ in length")
    if any(lp > 0 for lp in token_logprobs):
        raise ValueError("log probabilities must be <= 0")
    return -sum(lp for lp, m in zip(token_logprobs, returns_mask) if m)
