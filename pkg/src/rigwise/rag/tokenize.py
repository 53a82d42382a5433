"""Deterministic word/punctuation tokenizer used everywhere tokens are counted."""

import re

# decimals stay one token ("0.21"), words (incl. unicode like φ) stay one
# token, any other non-space character is its own token
_TOKEN_RE = re.compile(r"\d+\.\d+|\w+|[^\w\s]", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Split lowercased text on whitespace and punctuation boundaries.

    Joining the tokens back together loses only whitespace.
    """
    if not text:
        return []
    return _TOKEN_RE.findall(text.lower())


def count_tokens(text: str) -> int:
    return len(tokenize(text))


def token_spans(text: str) -> list[tuple[int, int]]:
    """Character (start, end) span of each token in the original text."""
    if not text:
        return []
    return [m.span() for m in _TOKEN_RE.finditer(text.lower())]
