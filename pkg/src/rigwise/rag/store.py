"""Hierarchical document store and deterministic chunking."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from ..errors import DuplicateDocId, EmptyDocument
from .tokenize import token_spans

DOC_TYPES = (
    "spe_paper",
    "industry_standard",
    "regulatory_guideline",
    "best_practice_manual",
    "technical_dictionary",
)

DEFAULT_CHUNK_TOKENS = 1024
DEFAULT_CHUNK_OVERLAP = 128


@dataclass
class DocumentRecord:
    doc_id: str
    level1_doc_type: str
    level2_domain: str
    level3_topic: str
    level4_section: str
    text: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.text:
            raise EmptyDocument(f"document {self.doc_id!r} has no text")
        if self.level1_doc_type not in DOC_TYPES:
            raise ValueError(
                f"unknown doc_type {self.level1_doc_type!r}; expected one of {DOC_TYPES}"
            )


@dataclass(frozen=True)
class Chunk:
    doc_id: str
    ordinal: int
    token_start: int
    token_end: int
    text: str

    @property
    def key(self) -> str:
        return f"{self.doc_id}#{self.ordinal}"


def chunk_document(
    doc: DocumentRecord,
    max_tokens: int = DEFAULT_CHUNK_TOKENS,
    overlap: int = DEFAULT_CHUNK_OVERLAP,
) -> list[Chunk]:
    """Split a document into token windows of ``max_tokens`` with fixed overlap.

    Chunk i starts at token i * (max_tokens - overlap); the union of chunks
    covers every token.
    """
    if not (0 <= overlap < max_tokens):
        raise ValueError(f"need 0 <= overlap < max_tokens, got {overlap} / {max_tokens}")
    spans = token_spans(doc.text)
    if not spans:
        raise EmptyDocument(f"document {doc.doc_id!r} has no tokens")

    stride = max_tokens - overlap
    n = len(spans)
    starts = [0]
    while starts[-1] + max_tokens < n:
        starts.append(starts[-1] + stride)

    chunks = []
    for i, start in enumerate(starts):
        end = min(start + max_tokens, n)
        char_start = spans[start][0]
        char_end = spans[end - 1][1]
        chunks.append(
            Chunk(
                doc_id=doc.doc_id,
                ordinal=i,
                token_start=start,
                token_end=end,
                text=doc.text[char_start:char_end],
            )
        )
    return chunks


class DocumentStore:
    """Append-dominant store of documents and their chunks."""

    def __init__(self, max_tokens: int = DEFAULT_CHUNK_TOKENS, overlap: int = DEFAULT_CHUNK_OVERLAP):
        self.max_tokens = max_tokens
        self.overlap = overlap
        self._docs: dict[str, DocumentRecord] = {}
        self._chunks: dict[str, Chunk] = {}

    def __len__(self) -> int:
        return len(self._docs)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def add(self, doc: DocumentRecord) -> list[Chunk]:
        if doc.doc_id in self._docs:
            raise DuplicateDocId(doc.doc_id)
        chunks = chunk_document(doc, self.max_tokens, self.overlap)
        self._docs[doc.doc_id] = doc
        for c in chunks:
            self._chunks[c.key] = c
        return chunks

    def document(self, doc_id: str) -> DocumentRecord:
        return self._docs[doc_id]

    def chunk(self, key: str) -> Chunk:
        return self._chunks[key]

    def chunks(self) -> list[Chunk]:
        return list(self._chunks.values())

    def documents(self) -> list[DocumentRecord]:
        return list(self._docs.values())

    def matches_filters(self, doc_id: str, filters: dict | None) -> bool:
        """Hierarchy filter: keys level1_doc_type/level2_domain/level3_topic/level4_section."""
        if not filters:
            return True
        doc = self._docs[doc_id]
        for key, wanted in filters.items():
            if getattr(doc, key) != wanted:
                return False
        return True


def load_corpus_dir(path: str, max_tokens: int = DEFAULT_CHUNK_TOKENS,
                    overlap: int = DEFAULT_CHUNK_OVERLAP) -> DocumentStore:
    """Ingest a directory of ``*.txt`` files with ``*.meta`` YAML sidecars.

    The sidecar carries doc_type, domain, topic, section plus free key/values;
    missing sidecar fields default to "general".
    """
    store = DocumentStore(max_tokens=max_tokens, overlap=overlap)
    for name in sorted(os.listdir(path)):
        if not name.endswith(".txt"):
            continue
        doc_id = name[: -len(".txt")]
        with open(os.path.join(path, name), encoding="utf-8") as fh:
            text = fh.read()
        meta = {}
        sidecar = os.path.join(path, doc_id + ".meta")
        if os.path.exists(sidecar):
            with open(sidecar, encoding="utf-8") as fh:
                meta = yaml.safe_load(fh) or {}
        store.add(
            DocumentRecord(
                doc_id=doc_id,
                level1_doc_type=meta.get("doc_type", "spe_paper"),
                level2_domain=meta.get("domain", "general"),
                level3_topic=meta.get("topic", "general"),
                level4_section=meta.get("section", "general"),
                text=text,
                metadata={k: v for k, v in meta.items()
                          if k not in ("doc_type", "domain", "topic", "section")},
            )
        )
    return store
