"""Graph powering, the zig-zag product and the derandomized square.

All three build the full output table eagerly with numpy.  Composite labels
are mixed-radix integers:

* power ``t``: ``(a_1, ..., a_t)`` -> ``sum a_i * d**(t - i)``
* zig-zag:     ``(i, j)``          -> ``i * d_H + j``
* derandomized square: ``(x, a)``  -> ``x * d_H + a``
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError, SizeCapError
from .graph import RotationMap

TABLE_CAP = 1 << 20


def _check_cap(entries: int, cap: int | None):
    if cap is not None and entries > cap:
        raise SizeCapError(f"table with {entries} entries exceeds cap {cap}")


def power(r: RotationMap, t: int, cap: int | None = TABLE_CAP) -> RotationMap:
    """``t``-th power: label ``(a_1..a_t)`` walks the path and returns it reversed."""
    if t < 1:
        raise ParameterError(f"power exponent must be positive, got {t}")
    n, d = r.n, r.d
    deg = d ** t
    _check_cap(n * deg, cap)
    codes = np.arange(deg, dtype=np.int64)
    v = np.repeat(np.arange(n, dtype=np.int64)[:, None], deg, axis=1)
    back = np.zeros((n, deg), dtype=np.int64)
    for step in range(t):
        a = (codes // d ** (t - 1 - step)) % d
        w = r.vert[v, a]
        b = r.label[v, a]
        # b_step lands in position step of the reversed word (b_t ... b_1)
        back += b * d ** step
        v = w
    return RotationMap(v, back)


def zigzag(g: RotationMap, h: RotationMap, cap: int | None = TABLE_CAP) -> RotationMap:
    """Zig-zag product on ``[g.n] x [g.d]`` with degree ``h.d ** 2``.

    Vertex ``(v, a)`` is encoded ``v * g.d + a``.
    """
    if h.n != g.d:
        raise DimensionError(f"zig-zag needs h.n == g.d, got h.n={h.n}, g.d={g.d}")
    N, D, d = g.n, g.d, h.d
    _check_cap(N * D * d * d, cap)
    v = np.repeat(np.arange(N, dtype=np.int64), D)[:, None]
    a = np.tile(np.arange(D, dtype=np.int64), N)[:, None]
    lab = np.arange(d * d, dtype=np.int64)[None, :]
    i, j = lab // d, lab % d
    a1, i1 = h.vert[a, i], h.label[a, i]
    w, b1 = g.vert[v, a1], g.label[v, a1]
    b, j1 = h.vert[b1, j], h.label[b1, j]
    return RotationMap(w * D + b, j1 * d + i1)


def derand_square(g: RotationMap, h: RotationMap, cap: int | None = TABLE_CAP) -> RotationMap:
    """Derandomized square: degree ``g.d * h.d`` on the vertices of ``g``."""
    if h.n != g.d:
        raise DimensionError(f"derandomized square needs h.n == g.d, got h.n={h.n}, g.d={g.d}")
    N, D, d = g.n, g.d, h.d
    _check_cap(N * D * d, cap)
    v = np.arange(N, dtype=np.int64)[:, None]
    lab = np.arange(D * d, dtype=np.int64)[None, :]
    x, a = lab // d, lab % d
    u, y = g.vert[v, x], g.label[v, x]
    z, b = h.vert[y, a], h.label[y, a]
    w, hh = g.vert[u, z], g.label[u, z]
    return RotationMap(w, hh * d + b)


# ---------------------------------------------------------------------------
# Closed-form bounds
# ---------------------------------------------------------------------------


# measured eigenvalues may overshoot [0, 1] by rounding
UNIT_SLACK = 1e-9


def _unit(name: str, x: float) -> float:
    if not (-UNIT_SLACK <= x <= 1.0 + UNIT_SLACK):
        raise ParameterError(f"{name} must lie in [0, 1], got {x}")
    return min(max(x, 0.0), 1.0)


def zigzag_bound(lam: float, alpha: float) -> float:
    lam, alpha = _unit("lambda", lam), _unit("alpha", alpha)
    c = 1.0 - alpha * alpha
    return 0.5 * c * lam + 0.5 * math.sqrt(c * c * lam * lam + 4.0 * alpha * alpha)


def zigzag_gap_bound(lam: float, alpha: float) -> float:
    """Lower bound on the spectral gap of the zig-zag product."""
    lam, alpha = _unit("lambda", lam), _unit("alpha", alpha)
    return 0.5 * (1.0 - alpha * alpha) * (1.0 - lam)


def dsquare_bound(lam: float, alpha: float) -> float:
    lam, alpha = _unit("lambda", lam), _unit("alpha", alpha)
    return 1.0 - (1.0 - lam * lam) * (1.0 - alpha)


def dsquare_loose_bound(lam: float, alpha: float) -> float:
    lam, alpha = _unit("lambda", lam), _unit("alpha", alpha)
    return lam * lam + alpha


@dataclass(frozen=True)
class BoundReport:
    operator: str
    lambda_in: float
    alpha_in: float
    bound: float
    measured: float

    CSV_HEADER = "operator,lambda_in,alpha_in,bound,measured,slack"

    @property
    def slack(self) -> float:
        return self.bound - self.measured

    def csv_row(self) -> str:
        vals = (self.lambda_in, self.alpha_in, self.bound, self.measured, self.slack)
        return ",".join([self.operator] + [repr(float(x)) for x in vals])
