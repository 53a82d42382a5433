"""Jargon-aware query expansion (single pass over a term dictionary)."""

from __future__ import annotations

from .tokenize import tokenize


class JargonDictionary:
    """Maps lowercase technical terms to expansion term lists."""

    def __init__(self, entries: dict[str, list[str]] | None = None):
        self.entries: dict[str, list[str]] = {}
        for term, expansions in (entries or {}).items():
            self.add(term, expansions)

    def add(self, term: str, expansions: list[str]) -> None:
        term = term.strip().lower()
        if not term:
            raise ValueError("empty jargon term")
        cleaned = [e.strip().lower() for e in expansions if e.strip()]
        if term in cleaned:
            raise ValueError(f"term {term!r} maps to itself")
        self.entries[term] = cleaned

    def get(self, term: str) -> list[str]:
        return self.entries.get(term.lower(), [])

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def from_file(cls, path: str) -> "JargonDictionary":
        """Two-column text file: term<TAB>comma-separated expansions."""
        entries = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                term, _, rest = line.partition("\t")
                entries[term.strip()] = [p.strip() for p in rest.split(",") if p.strip()]
        return cls(entries)


def expand_query(query: str, dictionary: JargonDictionary) -> list[str]:
    """Original tokens in order, then each dictionary hit's expansions once.

    A single pass with no transitive closure: expansion strings are appended
    verbatim and never themselves expanded. Re-expanding the joined output
    adds nothing new.
    """
    tokens = tokenize(query)
    out = list(tokens)
    seen = set(tokens)
    for token in tokens:
        for expansion in dictionary.get(token):
            if expansion not in seen:
                out.append(expansion)
                seen.add(expansion)
    return out
