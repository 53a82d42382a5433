"""Hierarchical navigable small world index over unit vectors.

Layered proximity graph per Malkov & Yashunin: every vector lives at layer 0,
upper layers thin out exponentially (level multiplier 1/ln(M)) and provide
long-range entry routing. Distances are cosine distances (1 - dot) on unit
vectors. Construction and degree-cap pruning both use the diversity neighbor
heuristic; degree is capped at M per upper layer and 2M at layer 0. The base
layer hot path runs in compiled kernels.

With ef_search >= index size the beam visits the whole connected component,
so results equal an exhaustive scan ordered by (distance, insertion order).
"""

from __future__ import annotations

import heapq
import math
import struct

import numpy as np

from ..errors import DimensionMismatch, EmptyIndex
from . import _hnsw_kernels as _k

_MAGIC = b"RWHNSWIX"
_VERSION = 1


class HnswIndex:
    def __init__(
        self,
        dim: int = 768,
        M: int = 32,
        ef_construction: int = 200,
        ef_search: int = 64,
        seed: int = 0,
    ):
        if M < 2:
            raise ValueError("M must be >= 2")
        self.dim = dim
        self.M = M
        self.M0 = 2 * M
        self.ef_construction = ef_construction
        self.ef_search = ef_search
        self.seed = seed
        self.mL = 1.0 / math.log(M)

        self._rng = np.random.default_rng(seed)
        self._level_draws = 0

        self._ids: list = []            # internal -> external id
        self._id_map: dict = {}         # external -> internal
        self._levels: list[int] = []
        self._tombstone: set[int] = set()
        self._count = 0
        self.entry_point = -1
        self.max_level = -1

        cap = 64
        self._vectors = np.empty((cap, dim), dtype=np.float64)
        # layer-0 adjacency as a flat matrix; one spare slot for overflow
        self._links0 = np.full((cap, self.M0 + 1), -1, dtype=np.int64)
        self._n0 = np.zeros(cap, dtype=np.int64)
        # upper layers are sparse (~1/M of nodes per level): plain dict
        self._upper: dict[tuple[int, int], list[int]] = {}

        # visited markers and heap scratch reused across searches
        self._stamp = np.zeros(cap, dtype=np.int64)
        self._epoch = 0
        self._scratch = self._make_scratch(cap)

    def _make_scratch(self, cap: int):
        size = cap + self.M0 + 8
        return (
            np.empty(size, dtype=np.float64),  # candidate heap keys
            np.empty(size, dtype=np.int64),    # candidate heap values
            np.empty(size, dtype=np.float64),  # best heap keys
            np.empty(size, dtype=np.int64),    # best heap values
            np.empty(self.M0 + 8, dtype=np.int64),  # selection output
        )

    def __len__(self) -> int:
        return self._count

    def __contains__(self, ext_id) -> bool:
        return ext_id in self._id_map

    @property
    def ids(self) -> list:
        return list(self._ids)

    # --- storage -------------------------------------------------------

    def _grow(self, need: int) -> None:
        cap = self._vectors.shape[0]
        if need <= cap:
            return
        new_cap = max(need, int(cap * 1.5))
        vectors = np.empty((new_cap, self.dim), dtype=np.float64)
        vectors[: self._count] = self._vectors[: self._count]
        self._vectors = vectors
        links0 = np.full((new_cap, self.M0 + 1), -1, dtype=np.int64)
        links0[: self._count] = self._links0[: self._count]
        self._links0 = links0
        n0 = np.zeros(new_cap, dtype=np.int64)
        n0[: self._count] = self._n0[: self._count]
        self._n0 = n0
        stamp = np.zeros(new_cap, dtype=np.int64)
        stamp[: self._stamp.shape[0]] = self._stamp
        self._stamp = stamp
        self._scratch = self._make_scratch(new_cap)

    def _begin_visit(self) -> int:
        self._epoch += 1
        return self._epoch

    def _draw_level(self) -> int:
        self._level_draws += 1
        u = self._rng.uniform()
        while u <= 0.0:  # guard log(0)
            self._level_draws += 1
            u = self._rng.uniform()
        return int(-math.log(u) * self.mL)

    # --- core graph routines --------------------------------------------

    def _search_layer0(self, q: np.ndarray, entries: list[int], ef: int):
        """Beam search on the base layer; (dist, internal) ascending by
        (distance, insertion order)."""
        epoch = self._begin_visit()
        cand_k, cand_v, best_k, best_v, _ = self._scratch
        dists, nodes = _k.search_layer0(
            self._vectors, self._links0, self._n0, q,
            np.asarray(entries, dtype=np.int64), ef, self._stamp, epoch,
            cand_k, cand_v, best_k, best_v,
        )
        order = np.lexsort((nodes, dists))
        return [(float(dists[i]), int(nodes[i])) for i in order]

    def _search_upper(self, q: np.ndarray, entries: list[int], layer: int, ef: int):
        """Beam search on a sparse upper layer (small graphs, plain python)."""
        epoch = self._begin_visit()
        stamp = self._stamp
        vec = self._vectors
        cand: list[tuple[float, int]] = []
        best: list[tuple[float, int]] = []
        for node in entries:
            if stamp[node] == epoch:
                continue
            stamp[node] = epoch
            d = 1.0 - float(vec[node] @ q)
            heapq.heappush(cand, (d, node))
            heapq.heappush(best, (-d, node))
        while cand:
            d, node = heapq.heappop(cand)
            if len(best) >= ef and d > -best[0][0]:
                break
            for n in self._upper.get((layer, node), ()):
                if stamp[n] == epoch:
                    continue
                stamp[n] = epoch
                dn = 1.0 - float(vec[n] @ q)
                if len(best) < ef or dn < -best[0][0]:
                    heapq.heappush(cand, (dn, n))
                    heapq.heappush(best, (-dn, n))
                    if len(best) > ef:
                        heapq.heappop(best)
        out = [(-negd, n) for negd, n in best]
        out.sort()
        return out

    def _select_neighbors(self, candidates, m: int) -> list[int]:
        """Diversity heuristic over (dist, id) candidates sorted ascending."""
        if len(candidates) <= m:
            return [n for _, n in candidates]
        ids = np.fromiter((n for _, n in candidates), dtype=np.int64, count=len(candidates))
        dists = np.fromiter((d for d, _ in candidates), dtype=np.float64, count=len(candidates))
        out = self._scratch[4]
        kept = _k.select_diverse(self._vectors, ids, dists, m, out)
        return [int(v) for v in out[:kept]]

    def _add_link0(self, node: int, target: int) -> None:
        c = self._n0[node]
        self._links0[node, c] = target
        self._n0[node] = c + 1
        if c + 1 > self.M0:
            _k.drop_farthest(self._vectors, self._links0, self._n0, node)

    def _add_link_upper(self, layer: int, node: int, target: int) -> None:
        row = self._upper.setdefault((layer, node), [])
        row.append(target)
        if len(row) > self.M:
            d = 1.0 - self._vectors[row] @ self._vectors[node]
            order = np.argsort(d, kind="stable")
            cands = [(float(d[i]), int(row[i])) for i in order]
            self._upper[(layer, node)] = self._select_neighbors(cands, self.M)

    # --- public API ------------------------------------------------------

    def insert(self, ext_id, vector) -> "HnswIndex":
        v = np.ascontiguousarray(vector, dtype=np.float64)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected dim {self.dim}, got {v.shape}")
        if ext_id in self._id_map:
            raise ValueError(f"id {ext_id!r} already indexed")

        internal = self._count
        self._grow(internal + 1)
        self._vectors[internal] = v
        self._ids.append(ext_id)
        self._id_map[ext_id] = internal
        level = self._draw_level()
        self._levels.append(level)
        self._count += 1

        if self.entry_point < 0:
            self.entry_point = internal
            self.max_level = level
            return self

        entries = [self.entry_point]
        for lc in range(self.max_level, level, -1):
            found = self._search_upper(v, entries, lc, 1)
            entries = [n for _, n in found]

        for lc in range(min(level, self.max_level), 0, -1):
            cands = self._search_upper(v, entries, lc, self.ef_construction)
            neigh = self._select_neighbors(cands, self.M)
            self._upper[(lc, internal)] = list(neigh)
            for n in neigh:
                self._add_link_upper(lc, n, internal)
            entries = [n for _, n in cands]

        cands = self._search_layer0(v, entries, self.ef_construction)
        neigh = self._select_neighbors(cands, self.M)
        self._links0[internal, : len(neigh)] = neigh
        self._n0[internal] = len(neigh)
        for n in neigh:
            self._add_link0(n, internal)

        if level > self.max_level:
            self.entry_point = internal
            self.max_level = level
        return self

    def delete(self, ext_id) -> None:
        """Tombstone an id: excluded from results, still routable. Compaction
        is a rebuild."""
        self._tombstone.add(self._id_map[ext_id])

    def search(self, query, k: int = 5, ef_search: int | None = None):
        """Top-k (external_id, cosine distance), nondecreasing distance."""
        q = np.ascontiguousarray(query, dtype=np.float64)
        if q.shape != (self.dim,):
            raise DimensionMismatch(f"expected dim {self.dim}, got {q.shape}")
        if k < 1:
            raise ValueError("k must be >= 1")
        if self._count == 0 or len(self._tombstone) == self._count:
            raise EmptyIndex("search on empty index")
        ef = self.ef_search if ef_search is None else ef_search
        ef = max(ef, k)

        entries = [self.entry_point]
        for lc in range(self.max_level, 0, -1):
            found = self._search_upper(q, entries, lc, 1)
            entries = [n for _, n in found]
        found = self._search_layer0(q, entries, ef)
        out = []
        for d, n in found:
            if n in self._tombstone:
                continue
            out.append((self._ids[n], d))
            if len(out) == k:
                break
        return out

    def degree_ok(self) -> bool:
        """Degree caps: <= 2M at layer 0, <= M above (diagnostic)."""
        if np.any(self._n0[: self._count] > self.M0):
            return False
        return all(len(row) <= self.M for row in self._upper.values())

    def is_connected(self) -> bool:
        """Layer-0 reachability from the entry point (diagnostic)."""
        if self._count == 0:
            return True
        seen = np.zeros(self._count, dtype=bool)
        seen[self.entry_point] = True
        frontier = [self.entry_point]
        while frontier:
            node = frontier.pop()
            for n in self._links0[node, : self._n0[node]]:
                if not seen[n]:
                    seen[n] = True
                    frontier.append(int(n))
        return bool(seen.all())

    # --- persistence -------------------------------------------------------

    def save(self, path: str) -> None:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<IIIIqIIiiQ", _VERSION, self.M, self.ef_construction,
                                 self.ef_search, self.seed, self.dim, self._count,
                                 self.entry_point, self.max_level, self._level_draws))
            for internal in range(self._count):
                raw = self._ids[internal]
                is_int = isinstance(raw, int)
                ext = str(raw).encode("utf-8")
                fh.write(struct.pack("<BH", is_int, len(ext)))
                fh.write(ext)
                level = self._levels[internal]
                fh.write(struct.pack("<BH", internal in self._tombstone, level))
                c = int(self._n0[internal])
                fh.write(struct.pack("<I", c))
                fh.write(self._links0[internal, :c].astype(np.int32).tobytes())
                for layer in range(1, level + 1):
                    row = self._upper.get((layer, internal), [])
                    fh.write(struct.pack("<I", len(row)))
                    fh.write(np.asarray(row, dtype=np.int32).tobytes())
            fh.write(np.ascontiguousarray(self._vectors[: self._count]).tobytes())

    @classmethod
    def load(cls, path: str) -> "HnswIndex":
        with open(path, "rb") as fh:
            magic = fh.read(len(_MAGIC))
            if magic != _MAGIC:
                raise ValueError(f"not an index file: bad magic {magic!r}")
            (version, M, ef_c, ef_s, seed, dim, count,
             entry, max_level, draws) = struct.unpack("<IIIIqIIiiQ", fh.read(48))
            if version != _VERSION:
                raise ValueError(f"unsupported index version {version}")
            idx = cls(dim=dim, M=M, ef_construction=ef_c, ef_search=ef_s, seed=seed)
            idx._grow(max(count, 1))
            for internal in range(count):
                is_int, id_len = struct.unpack("<BH", fh.read(3))
                ext = fh.read(id_len).decode("utf-8")
                if is_int:
                    ext = int(ext)
                dead, level = struct.unpack("<BH", fh.read(3))
                (c,) = struct.unpack("<I", fh.read(4))
                links = np.frombuffer(fh.read(4 * c), dtype=np.int32)
                idx._links0[internal, :c] = links
                idx._n0[internal] = c
                for layer in range(1, level + 1):
                    (cu,) = struct.unpack("<I", fh.read(4))
                    row = np.frombuffer(fh.read(4 * cu), dtype=np.int32)
                    idx._upper[(layer, internal)] = row.astype(int).tolist()
                idx._ids.append(ext)
                idx._id_map[ext] = internal
                idx._levels.append(level)
                if dead:
                    idx._tombstone.add(internal)
            vecs = np.frombuffer(fh.read(count * dim * 8), dtype=np.float64)
            idx._vectors[:count] = vecs.reshape(count, dim)
            idx._count = count
            idx.entry_point = entry
            idx.max_level = max_level
            # replay level draws so post-load inserts match continuous operation
            for _ in range(draws):
                idx._rng.uniform()
            idx._level_draws = draws
            return idx


def index_insert(index: HnswIndex, ext_id, vector) -> HnswIndex:
    return index.insert(ext_id, vector)


def hnsw_search(index: HnswIndex, query_vector, k: int = 5):
    return index.search(query_vector, k=k)
