"""Regularization, the iterated zig-zag/power transform and its lazy evaluator.

``G_0`` is a ``D``-regular graph with ``D = d**k`` and ``H`` is a ``d``-regular
graph on ``D`` vertices.  Each iteration replaces ``G`` by
``power(zigzag(G, H), p)``; since ``k = 2p`` the degree stays ``D`` while the
vertex count is multiplied by ``D``.  A vertex of ``G_i`` is a base vertex of
``G_0`` followed by ``i`` labels in ``[D]``, packed as
``base * D**i + a_0 * D**(i-1) + ... + a_{i-1}``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np
from scipy import stats

from .errors import ParameterError
from .graph import MultiGraph, RotationMap, restrict, rotation_components
from .operators import TABLE_CAP, power, zigzag, zigzag_bound
from .spectral import DENSE_CAP, lambda_abs2


@dataclass(frozen=True)
class TransformParams:
    """``d``: degree of H; ``k = 2p``: H has ``d**k`` vertices; ``l``: iterations."""

    d: int
    k: int
    p: int
    l: int | None = None
    alpha: float = 0.5

    def __post_init__(self):
        if self.d < 1 or self.p < 1:
            raise ParameterError("d and p must be positive")
        if self.k != 2 * self.p:
            raise ParameterError(f"k must equal 2p (got k={self.k}, p={self.p})")
        if self.l is not None and self.l < 1:
            raise ParameterError(f"iteration count must be >= 1, got {self.l}")
        if not (0.0 <= self.alpha <= 1.0):
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def degree(self) -> int:
        return self.d ** self.k

    def with_l(self, l: int) -> "TransformParams":
        return TransformParams(self.d, self.k, self.p, l, self.alpha)


def clamp_iterations(l: int) -> int:
    if l < 1:
        warnings.warn(f"iteration count {l} clamped to 1", stacklevel=2)
        return 1
    return l


def transform_length(n_reg: int, d_reg: int) -> int:
    """``2 * ceil(log2(d_reg * n_reg**2))``, at least 1."""
    if n_reg < 1 or d_reg < 1:
        raise ParameterError("n_reg and d_reg must be positive")
    x = d_reg * n_reg * n_reg
    return max(1, 2 * (x - 1).bit_length())


# ---------------------------------------------------------------------------
# Regularization
# ---------------------------------------------------------------------------


def regularize(g: MultiGraph, params: TransformParams | int) -> RotationMap:
    """Replace every vertex by an ``N``-cycle and pad with fixed-point loops.

    Vertex ``(v, w)`` is encoded ``v * N + w``.  Label 0 steps to
    ``(v, w+1)``, label 1 to ``(v, w-1)``, label 2 crosses to ``(w, v)`` when
    ``{v, w}`` is an edge of ``g`` and is a loop otherwise; the remaining
    labels are loops.
    """
    D = params.degree if isinstance(params, TransformParams) else int(params)
    if D < 3:
        raise ParameterError(f"regular degree must be at least 3, got {D}")
    N = g.n
    adjacent = np.zeros((N, N), dtype=bool)
    for u, v in g.edges:
        adjacent[u, v] = adjacent[v, u] = True
    v, w = np.divmod(np.arange(N * N, dtype=np.int64), N)
    vert = np.repeat(np.arange(N * N, dtype=np.int64)[:, None], D, axis=1)
    label = np.repeat(np.arange(D, dtype=np.int64)[None, :], N * N, axis=0)
    vert[:, 0] = v * N + (w + 1) % N
    label[:, 0] = 1
    vert[:, 1] = v * N + (w - 1) % N
    label[:, 1] = 0
    cross = adjacent[v, w]
    vert[cross, 2] = (w * N + v)[cross]
    return RotationMap(vert, label)


def canonical_vertex(s: int, n: int) -> int:
    """Vertex ``(s, 0)`` of the regularized graph of an ``n``-vertex input."""
    return s * n


# ---------------------------------------------------------------------------
# Eager transform
# ---------------------------------------------------------------------------


def transform_step(g_prev: RotationMap, h: RotationMap, p: int,
                   cap: int | None = TABLE_CAP) -> RotationMap:
    return power(zigzag(g_prev, h, cap), p, cap)


def transform_iterates(g_reg: RotationMap, h: RotationMap, params: TransformParams,
                       cap: int | None = TABLE_CAP) -> Iterator[RotationMap]:
    """Yield ``G_1 .. G_l``."""
    if h.n != g_reg.d or h.d ** (2 * params.p) != g_reg.d:
        raise ParameterError("need h.n == g_reg.d == h.d ** k")
    l = params.l if params.l is not None else transform_length(g_reg.n, g_reg.d)
    g = g_reg
    for _ in range(l):
        g = transform_step(g, h, params.p, cap)
        yield g


def materialize_transform(g_reg: RotationMap, h: RotationMap, params: TransformParams,
                          cap: int | None = TABLE_CAP) -> RotationMap:
    g = g_reg
    for g in transform_iterates(g_reg, h, params, cap):
        pass
    return g


@dataclass(frozen=True)
class TraceRow:
    """One iterate of one component; ``bound`` is ``f(lambda_prev, alpha)**p``."""

    component: int
    i: int
    n: int
    degree: int
    lambda_abs2: float
    bound: float | None

    CSV_HEADER = "component,i,n,degree,lambda_abs2,bound,slack"

    @property
    def slack(self) -> float | None:
        return None if self.bound is None else self.bound - self.lambda_abs2

    def csv_row(self) -> str:
        tail = ["", ""] if self.bound is None else [repr(self.bound), repr(self.slack)]
        return ",".join([str(self.component), str(self.i), str(self.n), str(self.degree),
                         repr(self.lambda_abs2)] + tail)


def transform_trace(g0: RotationMap, h: RotationMap, params: TransformParams,
                    cap: int | None = TABLE_CAP,
                    dense_cap: int | None = DENSE_CAP) -> list[TraceRow]:
    """Materialize ``G_0 .. G_l`` separately on every component of ``g0``.

    ``alpha`` in the bound is the measured value for ``h``.  Components are
    numbered in :func:`rotation_components` order.
    """
    alpha = lambda_abs2(h, dense_cap)
    rows = []
    for c, comp in enumerate(rotation_components(g0)):
        g = restrict(g0, comp)
        lam = lambda_abs2(g, dense_cap)
        rows.append(TraceRow(c, 0, g.n, g.d, lam, None))
        for i, g in enumerate(transform_iterates(g, h, params, cap), start=1):
            bound = zigzag_bound(lam, alpha) ** params.p
            lam = lambda_abs2(g, dense_cap)
            rows.append(TraceRow(c, i, g.n, g.d, lam, bound))
    return rows


# ---------------------------------------------------------------------------
# Lazy evaluation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExpandedVertex:
    base: int
    labels: tuple[int, ...] = ()

    @property
    def level(self) -> int:
        return len(self.labels)

    def encode(self, D: int) -> int:
        x = self.base
        for a in self.labels:
            x = x * D + a
        return x

    @classmethod
    def decode(cls, x: int, D: int, level: int) -> "ExpandedVertex":
        labels = []
        for _ in range(level):
            x, a = divmod(x, D)
            labels.append(a)
        return cls(x, tuple(reversed(labels)))


@dataclass
class WorkspaceMeter:
    """Counts live words; ``largest_block`` is the biggest single allocation."""

    live_words: int = 0
    peak_words: int = 0
    largest_block: int = 0

    def alloc(self, words: int):
        self.live_words += words
        self.peak_words = max(self.peak_words, self.live_words)
        self.largest_block = max(self.largest_block, words)

    def free(self, words: int):
        self.live_words -= words
        if self.live_words < 0:
            raise RuntimeError("workspace meter freed more words than allocated")

    def reset(self):
        self.live_words = self.peak_words = self.largest_block = 0

    def read(self) -> "WorkspaceMeter":
        return WorkspaceMeter(self.live_words, self.peak_words, self.largest_block)


# per recursion level: the frame slot and the loop index j
FRAME_WORDS = 2
# scratch for one rotation call on H: the H vertex and the returned label
SCRATCH_WORDS = 2


def _table_lookup(r):
    """Fast ``rot`` for materialized maps; anything else must provide ``rot``."""
    if isinstance(r, RotationMap):
        vert, label = r.vert.tolist(), r.label.tolist()
        return lambda v, i: (vert[v][i], label[v][i])
    return lambda v, i: r.rot(v, i)


class _Evaluator:
    """One-query state of the log-space rotation evaluator.

    Registers: the base vertex ``v`` and labels ``a_0 .. a_l``, each held as
    ``k`` base-``d`` digits (an H vertex or a word of ``k`` H labels).
    """

    def __init__(self, rot_g, rot_h, d: int, k: int, p: int, meter: WorkspaceMeter):
        self.rot_g, self.rot_h = rot_g, rot_h
        self.d, self.k, self.p = d, k, p
        self.meter = meter

    def digits(self, x: int) -> list[int]:
        out = [0] * self.k
        for pos in range(self.k - 1, -1, -1):
            x, out[pos] = divmod(x, self.d)
        return out

    def value(self, ds: list[int]) -> int:
        x = 0
        for digit in ds:
            x = x * self.d + digit
        return x

    def run(self, base: int, labels: Sequence[int], a: int) -> tuple[int, list[int], int]:
        l = len(labels)
        meter = self.meter
        meter.alloc(1)
        for _ in range(l + 1):
            meter.alloc(self.k)
        self.v = base
        self.regs = [self.digits(x) for x in labels] + [self.digits(a)]
        self._rot(l)
        out = [self.value(r) for r in self.regs]
        for _ in range(l + 1):
            meter.free(self.k)
        meter.free(1)
        return self.v, out[:-1], out[-1]

    def _rot(self, i: int):
        meter = self.meter
        meter.alloc(FRAME_WORDS)
        regs = self.regs
        if i == 0:
            self.v, a0 = self.rot_g(self.v, self.value(regs[0]))
            regs[0] = self.digits(a0)
        else:
            word = regs[i]
            for j in range(2 * self.p):
                meter.alloc(SCRATCH_WORDS)
                hv, word[j] = self.rot_h(self.value(regs[i - 1]), word[j])
                regs[i - 1] = self.digits(hv)
                meter.free(SCRATCH_WORDS)
                if j % 2 == 0:
                    self._rot(i - 1)
            word.reverse()
        meter.free(FRAME_WORDS)


def lazy_rot_eval(g_reg, h: RotationMap, params: TransformParams, v: ExpandedVertex, a: int,
                  meter: WorkspaceMeter | None = None) -> tuple[ExpandedVertex, int]:
    """``Rot`` of ``G_l`` at ``(v, a)`` without building any intermediate graph.

    ``l`` is ``params.l``; ``v`` must carry exactly ``l`` labels.
    """
    return TransformOracle(g_reg, h, params).rot_expanded(v, a, meter)


@dataclass(frozen=True)
class SpaceSample:
    l: int
    peak_words: int
    largest_block: int


@dataclass(frozen=True)
class AffineFit:
    slope: float
    intercept: float
    r2: float


def space_profile(g_reg, h: RotationMap, params: TransformParams, levels: Sequence[int],
                  queries: int = 8, seed: int = 0) -> list[SpaceSample]:
    """Peak metered workspace of the lazy evaluator over random queries per level."""
    rng = np.random.default_rng(seed)
    out = []
    for l in levels:
        oracle = TransformOracle(g_reg, h, params.with_l(l))
        peak = block = 0
        for _ in range(queries):
            v = ExpandedVertex(int(rng.integers(g_reg.n)),
                               tuple(int(x) for x in rng.integers(oracle.D, size=l)))
            meter = WorkspaceMeter()
            oracle.rot_expanded(v, int(rng.integers(oracle.D)), meter)
            peak, block = max(peak, meter.peak_words), max(block, meter.largest_block)
        out.append(SpaceSample(l, peak, block))
    return out


def affine_fit(xs: Sequence[float], ys: Sequence[float]) -> AffineFit:
    res = stats.linregress(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))
    return AffineFit(float(res.slope), float(res.intercept), float(res.rvalue ** 2))


class TransformOracle:
    """Rotation oracle for ``G_l`` backed by :func:`lazy_rot_eval`."""

    def __init__(self, g_reg, h: RotationMap, params: TransformParams):
        D = params.degree
        if h.n != D or g_reg.d != D or h.d != params.d:
            raise ParameterError(
                f"need g_reg.d == h.n == d**k == {D} and h.d == d == {params.d}")
        self.g_reg, self.h, self.params = g_reg, h, params
        self.level = params.l if params.l is not None else transform_length(g_reg.n, g_reg.d)
        self.D = D
        self.n = g_reg.n * D ** self.level
        self.d = D
        self._rot_g = _table_lookup(g_reg)
        self._rot_h = _table_lookup(h)

    @property
    def vertex_words(self) -> int:
        return 1 + self.level * self.params.k

    @property
    def label_words(self) -> int:
        return self.params.k

    def rot_expanded(self, v: ExpandedVertex, a: int,
                     meter: WorkspaceMeter | None = None) -> tuple[ExpandedVertex, int]:
        if v.level != self.level:
            raise ParameterError(f"vertex has {v.level} labels, transform level is {self.level}")
        if not (0 <= v.base < self.g_reg.n) or any(not (0 <= x < self.D) for x in v.labels):
            raise ParameterError(f"malformed expanded vertex {v}")
        if not (0 <= a < self.D):
            raise ParameterError(f"label {a} outside [0, {self.D})")
        ev = _Evaluator(self._rot_g, self._rot_h, self.params.d, self.params.k, self.params.p,
                        meter if meter is not None else WorkspaceMeter())
        base, labels, out = ev.run(v.base, v.labels, a)
        return ExpandedVertex(base, tuple(labels)), out

    def rot(self, v: int, a: int, meter: WorkspaceMeter | None = None) -> tuple[int, int]:
        w, b = self.rot_expanded(ExpandedVertex.decode(v, self.D, self.level), a, meter)
        return w.encode(self.D), b

    def canonical(self, base: int) -> int:
        """The all-zero label extension of a base vertex."""
        return ExpandedVertex(base, (0,) * self.level).encode(self.D)
