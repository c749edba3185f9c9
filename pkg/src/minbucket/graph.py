"""Simple graphs in CSR form, the erased configuration model, and Chung-Lu.

All randomness goes through :func:`numpy.random.default_rng` (PCG64). Every
generator takes ``seed`` as an int, a ``SeedSequence``, or a ``Generator``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .degrees import DegreeSequence


class GraphFormatError(ValueError):
    """Malformed edge-list input."""


class SimpleGraph:
    """Undirected simple graph with sorted adjacency (CSR).

    ``indptr``/``indices`` follow the scipy CSR convention; neighbor lists are
    strictly increasing and contain no self-loops. Instances are read-only.
    """

    __slots__ = ("n", "indptr", "indices", "_degrees", "_edge_keys")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._degrees = None
        self._edge_keys = None

    @classmethod
    def from_edges(cls, n: int, u, v, *, check: bool = True) -> "SimpleGraph":
        """Build from endpoint arrays; each undirected edge listed once.

        With ``check`` the input is validated for range, self-loops and
        duplicates. Generators pass already-clean edges with ``check=False``.
        """
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if u.shape != v.shape:
            raise ValueError("endpoint arrays differ in length")
        if check:
            if u.size and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
                raise ValueError("vertex id out of range")
            if np.any(u == v):
                raise ValueError("self-loop")
            a, b = np.minimum(u, v), np.maximum(u, v)
            if np.unique(a * n + b).size != a.size:
                raise ValueError("duplicate edge")
        src = np.concatenate([u, v])
        dst = np.concatenate([v, u])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst)

    @classmethod
    def from_adjacency(cls, adj) -> "SimpleGraph":
        """From a list of neighbor lists (small graphs, tests)."""
        n = len(adj)
        u = [a for a, nb in enumerate(adj) for b in nb if a < b]
        v = [b for a, nb in enumerate(adj) for b in nb if a < b]
        g = cls.from_edges(n, u, v)
        for a, nb in enumerate(adj):
            if sorted(set(nb)) != g.neighbors(a).tolist():
                raise ValueError(f"adjacency of {a} is not symmetric")
        return g

    @property
    def degrees(self) -> np.ndarray:
        """Realized degrees ``D_v``."""
        if self._degrees is None:
            self._degrees = np.diff(self.indptr)
            self._degrees.setflags(write=False)
        return self._degrees

    @property
    def edge_count(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Canonical edge list: ``u < v``, sorted lexicographically."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return src[keep], self.indices[keep]

    def edge_keys(self) -> np.ndarray:
        """Sorted ``u * n + v`` codes of the canonical edges."""
        if self._edge_keys is None:
            u, v = self.edges()
            self._edge_keys = u * self.n + v
            self._edge_keys.setflags(write=False)
        return self._edge_keys

    def has_edge(self, a: int, b: int) -> bool:
        nb = self.neighbors(a)
        i = np.searchsorted(nb, b)
        return bool(i < nb.size and nb[i] == b)

    def __eq__(self, other):
        if not isinstance(other, SimpleGraph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __repr__(self):
        return f"SimpleGraph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class GenerationTrace:
    model: str
    degrees: DegreeSequence
    seed: object
    multi_edges_erased: int = 0
    self_loops_erased: int = 0
    clamped_pairs: int = 0


def generate_ecm(seq: DegreeSequence, seed=None) -> tuple[SimpleGraph, GenerationTrace]:
    """Erased configuration model.

    Shuffles the ``2m`` stubs uniformly, pairs consecutive positions, then
    drops self-loops and collapses parallel edges. Vertex ``v`` owns
    ``seq.vertex_degrees()[v]`` stubs.
    """
    d = seq.vertex_degrees()
    if seq.stub_sum % 2:
        raise ValueError("odd stub sum")
    rng = np.random.default_rng(seed)
    n = seq.n
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    rng.shuffle(stubs)
    u, v = stubs[0::2], stubs[1::2]
    loops = u == v
    a = np.minimum(u, v)[~loops]
    b = np.maximum(u, v)[~loops]
    keys = np.unique(a * n + b)
    a, b = keys // n, keys % n
    g = SimpleGraph.from_edges(n, a, b, check=False)
    trace = GenerationTrace(
        model="ecm",
        degrees=seq,
        seed=seed,
        multi_edges_erased=int((~loops).sum() - keys.size),
        self_loops_erased=int(loops.sum()),
    )
    return g, trace


def generate_chung_lu(seq: DegreeSequence, seed=None, *, fast: bool = False
                      ) -> tuple[SimpleGraph, GenerationTrace]:
    """Chung-Lu graph: each pair ``{i, j}`` independently with ``d_i d_j / 2m``.

    Probabilities above 1 (possible only when the truncation bound fails) are
    clamped and counted in ``trace.clamped_pairs``. The default path flips one
    coin per pair, O(n^2); ``fast=True`` uses geometric edge skipping over
    degree-sorted vertices, O(n + m) expected, with a different random stream.
    """
    rng = np.random.default_rng(seed)
    if fast:
        u, v, clamped = _chung_lu_skip(seq, rng)
    else:
        u, v, clamped = _chung_lu_pairs(seq, rng)
    g = SimpleGraph.from_edges(seq.n, u, v, check=False)
    return g, GenerationTrace("chung-lu", seq, seed, clamped_pairs=clamped)


def _chung_lu_pairs(seq, rng):
    d = seq.vertex_degrees().astype(float)
    two_m = float(seq.stub_sum)
    n = seq.n
    us, vs = [], []
    clamped = 0
    for i in range(n - 1):
        p = d[i] * d[i + 1:] / two_m
        over = p > 1
        if over.any():
            clamped += int(over.sum())
            p = np.minimum(p, 1.0)
        hit = np.flatnonzero(rng.random(n - 1 - i) < p) + i + 1
        us.append(np.full(hit.size, i, dtype=np.int64))
        vs.append(hit)
    if not us:
        return np.empty(0, np.int64), np.empty(0, np.int64), 0
    return np.concatenate(us), np.concatenate(vs), clamped


def _chung_lu_skip(seq, rng):
    # Miller-Hagberg style: vertices sorted by weight descending, so the
    # probability along a row is non-increasing and can be used as a skip rate.
    w = seq.vertex_degrees().astype(float)
    order = np.argsort(-w, kind="stable")
    ws = w[order]
    two_m = float(seq.stub_sum)
    n = seq.n
    us, vs = [], []
    clamped = 0
    for i in range(n - 1):
        j = i + 1
        p = min(ws[i] * ws[j] / two_m, 1.0)
        while j < n and p > 0:
            if p < 1:
                r = rng.random()
                j += int(math.floor(math.log(r) / math.log1p(-p)))
            if j >= n:
                break
            q = ws[i] * ws[j] / two_m
            if q > 1:
                clamped += 1
                q = 1.0
            if rng.random() < q / p:
                us.append(order[i])
                vs.append(order[j])
            p = q
            j += 1
    u = np.asarray(us, dtype=np.int64)
    v = np.asarray(vs, dtype=np.int64)
    return np.minimum(u, v), np.maximum(u, v), clamped


# ---------------------------------------------------------------------------
# edge-list io


def save_graph(g: SimpleGraph, path) -> None:
    """Write canonical ``u v`` lines.

    A leading ``# vertices N`` comment is written only when trailing isolated
    vertices would otherwise be lost.
    """
    u, v = g.edges()
    inferred = int(v.max()) + 1 if v.size else 0
    lines = []
    if inferred != g.n:
        lines.append(f"# vertices {g.n}\n")
    lines.extend(f"{a} {b}\n" for a, b in zip(u.tolist(), v.tolist()))
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_graph(path) -> SimpleGraph:
    """Parse an edge list; errors carry the offending line number."""
    us, vs = [], []
    n_decl = None
    seen = set()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if not s:
            continue
        if s.startswith("#"):
            parts = s[1:].split()
            if len(parts) == 2 and parts[0] == "vertices" and parts[1].isdigit():
                n_decl = int(parts[1])
            continue
        parts = s.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"{path}:{lineno}: expected 'u v', got {s!r}")
        a, b = int(parts[0]), int(parts[1])
        if a == b:
            raise GraphFormatError(f"{path}:{lineno}: self-loop at vertex {a}")
        if n_decl is not None and max(a, b) >= n_decl:
            raise GraphFormatError(f"{path}:{lineno}: vertex id {max(a, b)} out of range (n={n_decl})")
        key = (min(a, b), max(a, b))
        if key in seen:
            raise GraphFormatError(f"{path}:{lineno}: duplicate edge {key[0]} {key[1]}")
        seen.add(key)
        us.append(a)
        vs.append(b)
    n = n_decl if n_decl is not None else (max(max(us), max(vs)) + 1 if us else 0)
    return SimpleGraph.from_edges(n, us, vs, check=False)
