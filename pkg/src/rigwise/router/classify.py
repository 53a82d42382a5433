"""Keyword-lexicon query classification.

An ordered rule list replaces a trained classifier: the first rule with a
keyword phrase present in the tokenized query assigns the task class, with
multimodal decided by attachments before any text rule fires.
"""

from __future__ import annotations

from ..errors import EmptyQuery
from ..rag.tokenize import tokenize
from .registry import QueryProfile, TASK_CLASSES


class Lexicon:
    """Ordered (task_class, phrase list) rules; phrases are token sequences."""

    def __init__(self, rules: list[tuple[str, list[str]]]):
        self.rules = []
        for task_class, phrases in rules:
            if task_class not in TASK_CLASSES:
                raise ValueError(f"unknown task_class {task_class!r}")
            self.rules.append((task_class, [tuple(tokenize(p)) for p in phrases]))

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        rules = []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            task_class, _, rest = line.partition("\t")
            phrases = [p.strip() for p in rest.split(",") if p.strip()]
            rules.append((task_class.strip(), phrases))
        return cls(rules)

    @classmethod
    def from_file(cls, path: str) -> "Lexicon":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())


def _contains_phrase(tokens: list[str], phrase: tuple) -> bool:
    n = len(phrase)
    if n == 0 or n > len(tokens):
        return False
    for i in range(len(tokens) - n + 1):
        if tuple(tokens[i : i + n]) == phrase:
            return True
    return False


def classify_query(text: str, attachments=frozenset(),
                   lexicon: Lexicon | None = None,
                   priority: str = "routine") -> QueryProfile:
    if not text or not text.strip():
        raise EmptyQuery("query text is blank")
    attachments = frozenset(attachments)
    tokens = tokenize(text)

    non_text = {m for m in attachments if m != "text"}
    if non_text:
        task_class = "multimodal"
    else:
        task_class = "complex_reasoning"
        for rule_class, phrases in (lexicon.rules if lexicon else []):
            if any(_contains_phrase(tokens, p) for p in phrases):
                task_class = rule_class
                break

    return QueryProfile(
        task_class=task_class,
        est_tokens=len(tokens),
        attachment_modalities=attachments,
        priority=priority,
    )
