from .tokenize import tokenize, count_tokens, token_spans
from .store import (
    Chunk,
    DocumentRecord,
    DocumentStore,
    chunk_document,
    load_corpus_dir,
    DOC_TYPES,
)
from .embed import TrigramEmbedder, Embedder, cosine_distance, EMBEDDING_DIM
from .jargon import JargonDictionary, expand_query
from .hnsw import HnswIndex, index_insert, hnsw_search
from .retrieve import (
    Passage,
    rerank,
    retrieve,
    overlap_score,
    index_store,
    update_incremental,
    RAW_POOL,
    FINAL_K,
)

__all__ = [
    "tokenize", "count_tokens", "token_spans",
    "Chunk", "DocumentRecord", "DocumentStore", "chunk_document",
    "load_corpus_dir", "DOC_TYPES",
    "TrigramEmbedder", "Embedder", "cosine_distance", "EMBEDDING_DIM",
    "JargonDictionary", "expand_query",
    "HnswIndex", "index_insert", "hnsw_search",
    "Passage", "rerank", "retrieve", "overlap_score", "index_store",
    "update_incremental", "RAW_POOL", "FINAL_K",
]
