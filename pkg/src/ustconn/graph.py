"""Rotation maps, multigraphs, text formats and exact combinatorial oracles.

A :class:`RotationMap` stores a labelled ``d``-regular multigraph on ``n``
vertices as two ``(n, d)`` integer arrays: ``vert[v, i]`` is the neighbour
reached along edge label ``i`` of ``v`` and ``label[v, i]`` is the label that
same edge carries at the neighbour.  Vertices and labels are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import ParseError, ParameterError, RestrictionError


# ---------------------------------------------------------------------------
# Multigraphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph; self loops and parallel edges are allowed."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n <= 0:
            raise ParameterError(f"vertex count must be positive, got {self.n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ParameterError(f"edge ({u}, {v}) has an endpoint outside [0, {self.n})")
        object.__setattr__(self, "edges", edges)

    def degrees(self) -> list[int]:
        """Degree of every vertex; a self loop contributes one."""
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            if u != v:
                deg[v] += 1
        return deg


def _parse_ints(line: str, count: int, lineno: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError("malformed", lineno, f"expected {count} integers, got {line!r}")
    try:
        return [int(x) for x in parts]
    except ValueError:
        raise ParseError("malformed", lineno, f"non-integer field in {line!r}") from None


def _content_lines(text: str) -> list[str]:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def parse_edge_list(text: str) -> MultiGraph:
    """Parse the ``N M`` header followed by ``M`` lines of ``u v``."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("header", 1, "empty document")
    n, m = _parse_ints(lines[0], 2, 1)
    if n <= 0:
        raise ParseError("header", 1, f"vertex count must be positive, got {n}")
    if m < 0:
        raise ParseError("header", 1, f"edge count must be non-negative, got {m}")
    if len(lines) - 1 != m:
        raise ParseError("count", len(lines) + 1 if len(lines) - 1 < m else m + 2,
                         f"header announces {m} edges, found {len(lines) - 1} lines")
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        u, v = _parse_ints(line, 2, lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError("out_of_range", lineno, f"endpoint out of range [0, {n}) in {line!r}")
        edges.append((u, v))
    return MultiGraph(n, tuple(edges))


def format_edge_list(g: MultiGraph) -> str:
    out = [f"{g.n} {len(g.edges)}"]
    out.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Rotation maps
# ---------------------------------------------------------------------------


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RotationMap:
    """Labelled regular multigraph given by its rotation table.

    Construction only checks shapes; use :func:`validate_rotation_map` to
    certify that the table is an involution on ``[n] x [d]``.
    """

    vert: np.ndarray
    label: np.ndarray

    def __post_init__(self):
        vert, label = _frozen(self.vert), _frozen(self.label)
        if vert.ndim != 2 or vert.shape != label.shape:
            raise ParameterError("rotation table arrays must share an (n, d) shape")
        if vert.shape[0] < 1 or vert.shape[1] < 1:
            raise ParameterError("rotation maps need at least one vertex and one label")
        object.__setattr__(self, "vert", vert)
        object.__setattr__(self, "label", label)

    @property
    def n(self) -> int:
        return self.vert.shape[0]

    @property
    def d(self) -> int:
        return self.vert.shape[1]

    # workspace charged by path enumeration for one vertex / one label
    vertex_words = 1
    label_words = 1

    def rot(self, v: int, i: int, meter=None) -> tuple[int, int]:
        return int(self.vert[v, i]), int(self.label[v, i])

    def __eq__(self, other):
        if not isinstance(other, RotationMap):
            return NotImplemented
        return (self.vert.shape == other.vert.shape
                and np.array_equal(self.vert, other.vert)
                and np.array_equal(self.label, other.label))

    __hash__ = None

    @classmethod
    def from_function(cls, n: int, d: int, fn) -> "RotationMap":
        vert = np.empty((n, d), dtype=np.int64)
        label = np.empty((n, d), dtype=np.int64)
        for v in range(n):
            for i in range(d):
                vert[v, i], label[v, i] = fn(v, i)
        return cls(vert, label)


def cycle(n: int) -> RotationMap:
    """The ``n``-cycle: label 0 steps to ``v+1``, label 1 steps to ``v-1``."""
    v = np.arange(n)
    vert = np.stack([(v + 1) % n, (v - 1) % n], axis=1)
    label = np.tile(np.array([1, 0]), (n, 1))
    return RotationMap(vert, label)


def complete_with_loops(n: int) -> RotationMap:
    """``K_n`` plus one fixed-point loop per vertex: ``Rot(y, a) = (a, y)``."""
    y, a = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return RotationMap(a, y)


def path_with_loops(n: int) -> RotationMap:
    """2-regular path ``0 - 1 - ... - n-1`` with a fixed-point loop at each end.

    Label 0 steps right and label 1 steps left; at the ends the missing
    direction is a loop.  Connected and non-bipartite for every ``n >= 1``.
    """
    if n < 1:
        raise ParameterError("n must be positive")
    v = np.arange(n)
    vert = np.stack([np.minimum(v + 1, n - 1), np.maximum(v - 1, 0)], axis=1)
    label = np.tile(np.array([1, 0]), (n, 1))
    label[n - 1, 0] = 0
    label[0, 1] = 1
    return RotationMap(vert, label)


def parse_rotation_map(text: str) -> RotationMap:
    """Parse ``N D`` followed by ``N*D`` lines ``v i w j`` in (v, i) order."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("header", 1, "empty document")
    n, d = _parse_ints(lines[0], 2, 1)
    if n <= 0 or d <= 0:
        raise ParseError("header", 1, f"need positive N and D, got {n} {d}")
    if len(lines) - 1 != n * d:
        raise ParseError("count", min(len(lines), n * d) + 1,
                         f"expected {n * d} table lines, found {len(lines) - 1}")
    vert = np.empty((n, d), dtype=np.int64)
    label = np.empty((n, d), dtype=np.int64)
    for idx, line in enumerate(lines[1:]):
        lineno = idx + 2
        v, i, w, j = _parse_ints(line, 4, lineno)
        if (v, i) != divmod(idx, d):
            raise ParseError("order", lineno, f"expected entry {divmod(idx, d)}, got ({v}, {i})")
        if not (0 <= w < n and 0 <= j < d):
            raise ParseError("out_of_range", lineno, f"target ({w}, {j}) outside [{n}]x[{d}]")
        vert[v, i], label[v, i] = w, j
    return RotationMap(vert, label)


def format_rotation_map(r: RotationMap) -> str:
    out = [f"{r.n} {r.d}"]
    for v in range(r.n):
        for i in range(r.d):
            out.append(f"{v} {i} {r.vert[v, i]} {r.label[v, i]}")
    return "\n".join(out) + "\n"


def rotation_map_from_multigraph(g: MultiGraph) -> RotationMap:
    """Label a regular multigraph by edge-list order.

    Each vertex numbers its incident edge slots in order of first appearance;
    parallel edges receive consecutive labels and a self loop occupies one
    fixed-point label.
    """
    deg = g.degrees()
    d = deg[0]
    if any(x != d for x in deg):
        raise ParameterError(f"graph is not regular (degrees range {min(deg)}..{max(deg)})")
    if d == 0:
        raise ParameterError("graph has no edges; a rotation map needs degree >= 1")
    nxt = [0] * g.n
    vert = np.empty((g.n, d), dtype=np.int64)
    label = np.empty((g.n, d), dtype=np.int64)
    for u, v in g.edges:
        if u == v:
            i = nxt[u]
            nxt[u] += 1
            vert[u, i], label[u, i] = u, i
            continue
        i, j = nxt[u], nxt[v]
        nxt[u] += 1
        nxt[v] += 1
        vert[u, i], label[u, i] = v, j
        vert[v, j], label[v, j] = u, i
    return RotationMap(vert, label)


def to_multigraph(r: RotationMap) -> MultiGraph:
    """Edge list of a valid rotation map; fixed points become single loops."""
    edges = []
    for v in range(r.n):
        for i in range(r.d):
            w, j = int(r.vert[v, i]), int(r.label[v, i])
            if (v, i) <= (w, j):
                edges.append((v, w))
    return MultiGraph(r.n, tuple(edges))


@dataclass(frozen=True)
class ValidationVerdict:
    ok: bool
    violations: tuple[tuple[int, int], ...]

    def __bool__(self):
        return self.ok


def validate_rotation_map(r: RotationMap) -> ValidationVerdict:
    """Check that the table is a total involution on ``[n] x [d]``.

    Every ``(v, i)`` whose image is out of range or does not map back to
    ``(v, i)`` is reported.  An involution on a finite set is automatically a
    permutation, so no separate bijectivity check is needed.
    """
    n, d = r.n, r.d
    w, j = r.vert, r.label
    in_range = (w >= 0) & (w < n) & (j >= 0) & (j < d)
    ws = np.where(in_range, w, 0)
    js = np.where(in_range, j, 0)
    back_v = r.vert[ws, js]
    back_i = r.label[ws, js]
    vv, ii = np.meshgrid(np.arange(n), np.arange(d), indexing="ij")
    good = in_range & (back_v == vv) & (back_i == ii)
    bad = np.argwhere(~good)
    violations = tuple((int(a), int(b)) for a, b in bad)
    return ValidationVerdict(not violations, violations)


def to_adjacency(r: RotationMap) -> np.ndarray:
    """Integer adjacency matrix: ``A[u, v]`` counts labels ``i`` of ``u`` leading to ``v``."""
    A = np.zeros((r.n, r.n), dtype=np.int64)
    rows = np.repeat(np.arange(r.n), r.d)
    np.add.at(A, (rows, r.vert.ravel()), 1)
    return A


def permute(r: RotationMap, perm: Sequence[int]) -> RotationMap:
    """Relabel vertices: old vertex ``v`` becomes ``perm[v]``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    return RotationMap(perm[r.vert[inv]], r.label[inv])


# ---------------------------------------------------------------------------
# Exact oracles
# ---------------------------------------------------------------------------


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # smaller id wins so representatives are canonical
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def components_oracle(g: MultiGraph) -> list[list[int]]:
    """Connected components, each sorted, ordered by smallest vertex."""
    uf = _UnionFind(g.n)
    for u, v in g.edges:
        uf.union(u, v)
    groups: dict[int, list[int]] = {}
    for v in range(g.n):
        groups.setdefault(uf.find(v), []).append(v)
    return [groups[k] for k in sorted(groups)]


def rotation_components(r: RotationMap) -> list[list[int]]:
    """Connected components of a rotation map, same ordering as :func:`components_oracle`."""
    rows = np.repeat(np.arange(r.n), r.d)
    mat = csr_matrix((np.ones(rows.size, dtype=np.int8), (rows, r.vert.ravel())), shape=(r.n, r.n))
    count, labels = connected_components(mat, directed=False)
    groups: dict[int, list[int]] = {}
    for v, c in enumerate(labels.tolist()):
        groups.setdefault(c, []).append(v)
    return sorted(groups.values(), key=lambda comp: comp[0])


def is_bipartite(g: MultiGraph) -> dict[int, bool]:
    """Two-colourability of every component, keyed by its smallest vertex.

    Any self loop makes its component non-bipartite.
    """
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        if u != v:
            adj[v].append(u)
    colour = [-1] * g.n
    result = {}
    for root in range(g.n):
        if colour[root] != -1:
            continue
        colour[root] = 0
        ok = True
        queue = [root]
        for x in queue:
            for y in adj[x]:
                if colour[y] == -1:
                    colour[y] = colour[x] ^ 1
                    queue.append(y)
                elif colour[y] == colour[x]:
                    ok = False
        result[root] = ok
    return result


def restrict(r: RotationMap, s: Iterable[int]) -> RotationMap:
    """Induced rotation map on a union of connected components.

    Surviving vertices are renumbered in increasing order; labels are kept.
    """
    keep = sorted(set(int(v) for v in s))
    if not keep:
        raise RestrictionError("cannot restrict to an empty vertex set")
    if keep[0] < 0 or keep[-1] >= r.n:
        raise RestrictionError("subset contains vertices outside the graph")
    idx = np.asarray(keep, dtype=np.int64)
    member = np.zeros(r.n, dtype=bool)
    member[idx] = True
    sub_vert = r.vert[idx]
    leaving = ~member[sub_vert]
    if leaving.any():
        v, i = np.argwhere(leaving)[0]
        raise RestrictionError(
            f"subset is not component-closed: edge ({keep[v]}, {i}) leaves it")
    new_id = np.full(r.n, -1, dtype=np.int64)
    new_id[idx] = np.arange(len(keep))
    return RotationMap(new_id[sub_vert], r.label[idx])
