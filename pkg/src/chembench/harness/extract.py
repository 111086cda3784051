"""Answer extraction from raw model output, one fixed rule per task kind.

The rule ladder:

1. If one or more ``<ANSWER>...</ANSWER>`` regions exist, the last one wins
   (trimmed), regardless of kind.
2. SMILES-expecting kinds take the last maximal token of the SMILES
   character class (length >= 2) that parses, falling back to the longest
   parsing token of any length.  Tokens are right-trimmed of characters
   that cannot end a SMILES (separators, bond symbols, open brackets)
   before the parse check, so a sentence-final full stop does not spoil
   the token.
3. Formula kinds take the last token shaped like an element-count formula
   with real element symbols.
4. Yes/no kinds take the first standalone "yes" or "no", lowercased.
5. Multiple choice takes the candidate with minimal edit distance to any
   line of the output.
6. Free-text kinds (captioning, IUPAC names) take the whole trimmed text.

Extraction failures raise :class:`NoAnswerFound`; callers score those
records as incorrect rather than dropping them.
"""

from __future__ import annotations

import re

from ..chemgraph import ParseDiagnostic, parse_smiles
from ..elements import is_element
from ..metrics import levenshtein
from .tasks import FORMULA_KINDS, SMILES_KINDS, TEXT_KINDS, YESNO_KINDS, TaskKind


class NoAnswerFound(ValueError):
    pass


_ANSWER_REGION = re.compile(r"<ANSWER>(.*?)</ANSWER>", re.DOTALL)
_SMILES_TOKEN = re.compile(r"[A-Za-z0-9@+\-\[\]()=#$:./\\%]+")
_YESNO = re.compile(r"\b(yes|no)\b", re.IGNORECASE)
_FORMULA_TOKEN = re.compile(r"[A-Za-z0-9+\-]+")
_FORMULA_SHAPE = re.compile(r"^(?:[A-Z][a-z]?\d*)+(?:[+-]\d*)?$")


# class characters that cannot terminate a SMILES string; candidate tokens
# are right-trimmed of these before the parse check so that e.g. a full stop
# after a molecule does not spoil the token
_NON_TERMINAL = ".-=#:/\\([@+%"


def _as_smiles(token: str) -> str | None:
    while token:
        if not isinstance(parse_smiles(token), ParseDiagnostic):
            return token
        if token[-1] in _NON_TERMINAL:
            token = token[:-1]
        else:
            return None
    return None


def _is_formula(token: str) -> bool:
    if not _FORMULA_SHAPE.match(token):
        return False
    return all(
        is_element(symbol)
        for symbol in re.findall(r"[A-Z][a-z]?", token)
    )


def extract_answer(
    raw: str,
    kind: TaskKind,
    candidates: list[str] | None = None,
) -> str:
    regions = _ANSWER_REGION.findall(raw)
    if regions:
        return regions[-1].strip()

    if kind in SMILES_KINDS:
        tokens = _SMILES_TOKEN.findall(raw)
        parsed = [(t, _as_smiles(t)) for t in tokens]
        parsing_long = [s for t, s in parsed if len(t) >= 2 and s]
        if parsing_long:
            return parsing_long[-1]
        parsing_any = [s for _, s in parsed if s]
        if parsing_any:
            return max(parsing_any, key=len)
        raise NoAnswerFound("no token parses as SMILES")

    if kind in FORMULA_KINDS:
        formulas = [
            t for t in _FORMULA_TOKEN.findall(raw) if _is_formula(t)]
        if formulas:
            return formulas[-1]
        raise NoAnswerFound("no token looks like a molecular formula")

    if kind in YESNO_KINDS:
        match = _YESNO.search(raw)
        if match:
            return match.group(1).lower()
        raise NoAnswerFound("no yes/no in output")

    if kind is TaskKind.REAGENT_SELECTION:
        if not candidates:
            raise NoAnswerFound("no candidate list supplied")
        lines = [line.strip() for line in raw.splitlines() if line.strip()]
        if not lines:
            raise NoAnswerFound("empty output")
        best = min(
            candidates,
            key=lambda cand: min(levenshtein(cand, line) for line in lines),
        )
        return best

    assert kind in TEXT_KINDS
    text = raw.strip()
    if not text:
        raise NoAnswerFound("empty output")
    return text
