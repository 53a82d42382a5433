"""Reranking and the end-to-end retrieval pipeline."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import DuplicateDocId
from .embed import Embedder
from .hnsw import HnswIndex
from .jargon import JargonDictionary, expand_query
from .store import Chunk, DocumentStore
from .tokenize import tokenize

# candidate pool ahead of reranking: 5x the final top-5
RAW_POOL = 25
FINAL_K = 5


def overlap_score(expanded_terms: list[str], chunk_text: str) -> int:
    """Count of expanded-query tokens present in the chunk (set overlap).

    Multi-word expansions contribute each of their tokens.
    """
    query_tokens = set(tokenize(" ".join(expanded_terms)))
    return len(query_tokens & set(tokenize(chunk_text)))


def rerank(query: str, candidates: list[tuple[Chunk, float]],
           dictionary: JargonDictionary | None = None) -> list[tuple[Chunk, float, int]]:
    """Stable sort by descending expansion-aware token overlap.

    Ties keep the incoming vector-distance order. Returns
    (chunk, vector_distance, overlap) triples.
    """
    dictionary = dictionary or JargonDictionary()
    expanded = expand_query(query, dictionary)
    scored = [(chunk, dist, overlap_score(expanded, chunk.text))
              for chunk, dist in candidates]
    scored.sort(key=lambda item: -item[2])
    return scored


@dataclass(frozen=True)
class Passage:
    doc_id: str
    ordinal: int
    text: str
    vector_distance: float
    overlap: int

    def as_dict(self) -> dict:
        return {
            "doc_id": self.doc_id,
            "ordinal": self.ordinal,
            "text": self.text,
            "vector_distance": self.vector_distance,
            "overlap": self.overlap,
        }


def retrieve(query: str, store: DocumentStore, index: HnswIndex, embedder: Embedder,
             dictionary: JargonDictionary | None = None, filters: dict | None = None,
             k: int = FINAL_K, raw_pool: int = RAW_POOL) -> list[Passage]:
    """expand -> embed -> graph search -> hierarchy filter -> rerank -> top-k."""
    dictionary = dictionary or JargonDictionary()
    expanded = expand_query(query, dictionary)
    qvec = embedder.embed(" ".join(expanded))
    hits = index.search(qvec, k=raw_pool)

    candidates = []
    for key, dist in hits:
        chunk = store.chunk(key)
        if store.matches_filters(chunk.doc_id, filters):
            candidates.append((chunk, dist))

    ranked = rerank(query, candidates, dictionary)
    return [
        Passage(chunk.doc_id, chunk.ordinal, chunk.text, dist, score)
        for chunk, dist, score in ranked[:k]
    ]


def index_store(store: DocumentStore, embedder: Embedder, *, M: int = 32,
                ef_construction: int = 200, ef_search: int = 64, seed: int = 0) -> HnswIndex:
    """Build a fresh index over every chunk in the store."""
    index = HnswIndex(dim=embedder.dim, M=M, ef_construction=ef_construction,
                      ef_search=ef_search, seed=seed)
    for chunk in store.chunks():
        index.insert(chunk.key, embedder.embed(chunk.text))
    return index


def update_incremental(store: DocumentStore, index: HnswIndex, embedder: Embedder,
                       new_docs) -> tuple[DocumentStore, HnswIndex]:
    """Chunk, embed, and insert new documents in place (no rebuild)."""
    for doc in new_docs:
        if doc.doc_id in store:
            raise DuplicateDocId(doc.doc_id)
    for doc in new_docs:
        for chunk in store.add(doc):
            index.insert(chunk.key, embedder.embed(chunk.text))
    return store, index
