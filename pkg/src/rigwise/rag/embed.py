"""Deterministic reference embedder: hashed character trigrams in 768 dims.

The embedder is pluggable — anything with ``dim`` and ``embed(text)`` works,
and ``transform`` gives the batch surface so it drops into sklearn pipelines.
"""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

EMBEDDING_DIM = 768

_FNV_OFFSET = 0x811C9DC5
_FNV_PRIME = 0x01000193
_MASK32 = 0xFFFFFFFF


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK32
    return h


@runtime_checkable
class Embedder(Protocol):
    dim: int

    def embed(self, text: str) -> np.ndarray: ...


class TrigramEmbedder:
    """Fold character-trigram counts into ``dim`` buckets and L2-normalize.

    Identical text always yields the bitwise-identical unit vector. Text too
    short to contain a trigram maps to the first basis vector.
    """

    def __init__(self, dim: int = EMBEDDING_DIM):
        self.dim = dim

    def get_params(self, deep: bool = True) -> dict:
        return {"dim": self.dim}

    def embed(self, text: str) -> np.ndarray:
        lowered = text.lower()
        vec = np.zeros(self.dim, dtype=np.float64)
        if len(lowered) < 3:
            vec[0] = 1.0
            return vec
        for i in range(len(lowered) - 2):
            bucket = _fnv1a(lowered[i : i + 3].encode("utf-8")) % self.dim
            vec[bucket] += 1.0
        norm = np.linalg.norm(vec)
        if norm == 0.0:
            vec[0] = 1.0
            return vec
        return vec / norm

    def fit(self, texts, y=None):
        return self

    def transform(self, texts) -> np.ndarray:
        return np.vstack([self.embed(t) for t in texts])


def cosine_distance(a: np.ndarray, b: np.ndarray) -> float:
    """1 - dot product; both inputs are unit vectors by construction."""
    return 1.0 - float(np.dot(a, b))
