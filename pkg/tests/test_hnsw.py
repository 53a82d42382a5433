import numpy as np
import pytest

from rigwise.errors import DimensionMismatch, EmptyIndex
from rigwise.rag import HnswIndex, hnsw_search, index_insert


def unit_rows(n, dim, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, dim))
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def brute_force(X, q, k):
    """Exhaustive top-k by (cosine distance, insertion order)."""
    d = 1.0 - X @ q
    order = np.argsort(d, kind="stable")[:k]
    return [(int(i), float(d[i])) for i in order]


def build(X, **kw):
    kw.setdefault("dim", X.shape[1])
    idx = HnswIndex(**kw)
    for i in range(len(X)):
        index_insert(idx, i, X[i])
    return idx


def test_singleton():
    X = unit_rows(1, 32, 0)
    idx = build(X, M=4)
    q = unit_rows(1, 32, 1)[0]
    assert [i for i, _ in hnsw_search(idx, q, k=5)] == [0]


def test_truncation_small_index():
    X = unit_rows(4, 32, 0)
    idx = build(X, M=4)
    assert len(hnsw_search(idx, X[0], k=10)) == 4


def test_dimension_mismatch():
    idx = HnswIndex(dim=32, M=4)
    with pytest.raises(DimensionMismatch):
        idx.insert(0, np.ones(16))
    idx.insert(0, unit_rows(1, 32, 0)[0])
    with pytest.raises(DimensionMismatch):
        idx.search(np.ones(16))


def test_empty_index_search():
    with pytest.raises(EmptyIndex):
        HnswIndex(dim=8, M=4).search(np.ones(8))


def test_duplicate_id_rejected():
    idx = HnswIndex(dim=8, M=4)
    v = unit_rows(1, 8, 0)[0]
    idx.insert("a", v)
    with pytest.raises(ValueError):
        idx.insert("a", v)


@pytest.mark.parametrize("n", [10, 50, 200])
def test_exact_mode_equals_exhaustive_scan(n):
    X = unit_rows(n, 768, seed=100 + n)
    idx = build(X, seed=5)
    queries = unit_rows(25, 768, seed=200 + n)
    for q in queries:
        got = hnsw_search(idx, q, k=5) if n >= 5 else idx.search(q, k=n)
        got = [(i, d) for i, d in idx.search(q, k=5, ef_search=n)]
        want = brute_force(X, q, 5)
        assert [i for i, _ in got] == [i for i, _ in want]
        for (_, dg), (_, dw) in zip(got, want):
            assert dg == pytest.approx(dw, abs=1e-9)


def test_results_ordered_by_distance():
    X = unit_rows(300, 64, 3)
    idx = build(X, M=8, ef_construction=60, ef_search=40, seed=1)
    q = unit_rows(1, 64, 9)[0]
    out = idx.search(q, k=10)
    dists = [d for _, d in out]
    assert dists == sorted(dists)


def test_incremental_no_rebuild_visibility():
    X = unit_rows(50, 64, 4)
    idx = build(X, M=8, ef_construction=60, ef_search=50, seed=2)
    extra = unit_rows(1, 64, 99)[0]
    idx.insert("new", extra)
    assert idx.search(extra, k=1)[0][0] == "new"


def test_degree_caps_and_connectivity():
    X = unit_rows(400, 48, 6)
    idx = build(X, M=6, ef_construction=40, ef_search=30, seed=3)
    assert idx.degree_ok()
    assert idx.is_connected()


def test_tombstone_excluded_from_results():
    X = unit_rows(30, 32, 7)
    idx = build(X, M=6, ef_construction=30, ef_search=30, seed=4)
    q = X[3]
    assert idx.search(q, k=1)[0][0] == 3
    idx.delete(3)
    assert all(i != 3 for i, _ in idx.search(q, k=5, ef_search=30))


def test_persistence_roundtrip(tmp_path):
    X = unit_rows(120, 64, 8)
    idx = build(X, M=8, ef_construction=50, ef_search=64, seed=9)
    idx.delete(7)
    path = str(tmp_path / "index.bin")
    idx.save(path)
    loaded = HnswIndex.load(path)

    assert loaded.M == idx.M
    assert loaded.ef_construction == idx.ef_construction
    assert loaded.seed == idx.seed
    assert len(loaded) == len(idx)
    queries = unit_rows(10, 64, 10)
    for q in queries:
        assert loaded.search(q, k=5) == idx.search(q, k=5)

    # post-load inserts behave like continuous operation (same level draws)
    extra = unit_rows(3, 64, 11)
    for j in range(3):
        idx.insert(f"x{j}", extra[j])
        loaded.insert(f"x{j}", extra[j])
    for q in queries:
        assert loaded.search(q, k=5) == idx.search(q, k=5)


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.bin"
    path.write_bytes(b"NOTANIDX" + b"\x00" * 64)
    with pytest.raises(ValueError):
        HnswIndex.load(str(path))


def test_recall_small_scale_sanity():
    # desk-size analogue of the acceptance recall run (full run lives there)
    X = unit_rows(2000, 768, 12)
    idx = build(X, seed=6)
    rng = np.random.default_rng(13)
    sample = rng.choice(len(X), 150, replace=False)
    hits = 0
    for i in sample:
        got = {j for j, _ in idx.search(X[i], k=5)}
        want = {j for j, _ in brute_force(X, X[i], 5)}
        hits += len(got & want)
    assert hits / (5 * len(sample)) >= 0.95
