"""Seeded and algebraic expanders with measured spectral certificates."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ParameterError, SearchFailure
from .graph import RotationMap, path_with_loops
from .spectral import DENSE_CAP, lambda_abs2


def derive_seed(seed: int, *counters: int) -> int:
    """Counter-based child seed; identical inputs give identical streams."""
    return int(np.random.SeedSequence([seed, *counters]).generate_state(1, dtype=np.uint64)[0])


def random_regular(n: int, d: int, seed: int) -> RotationMap:
    """Uniform random perfect matching of the ``n*d`` edge slots.

    Loops and parallel edges are kept, so the result is a ``d``-regular
    multigraph for every ``n >= 1`` with ``n*d`` even.
    """
    if n < 1 or d < 1:
        raise ParameterError("n and d must be positive")
    if (n * d) % 2:
        raise ParameterError(f"n*d must be even, got n={n}, d={d}")
    rng = np.random.default_rng(seed)
    slots = rng.permutation(n * d)
    first, second = slots[0::2], slots[1::2]
    target = np.empty(n * d, dtype=np.int64)
    target[first] = second
    target[second] = first
    vert, label = np.divmod(target.reshape(n, d), d)
    return RotationMap(vert, label)


@dataclass(frozen=True)
class ExpanderSpec:
    n: int
    d: int
    alpha: float
    seed: int
    tries: int
    target: float

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "alpha": self.alpha, "seed": self.seed,
                "tries": self.tries, "target": self.target}


def find_expander(n: int, d: int, alpha: float, seed: int, max_tries: int = 100,
                  cap: int | None = DENSE_CAP) -> tuple[RotationMap, ExpanderSpec]:
    """First sample (in try order) whose measured ``lambda_abs2`` is at most ``alpha``.

    The returned spec's ``alpha`` is the measured value, not the target.
    """
    if max_tries < 1:
        raise ParameterError("max_tries must be at least 1")
    best = float("inf")
    for attempt in range(max_tries):
        r = random_regular(n, d, derive_seed(seed, attempt))
        lam = lambda_abs2(r, cap)
        best = min(best, lam)
        if lam <= alpha:
            return r, ExpanderSpec(n, d, lam, seed, attempt + 1, alpha)
    raise SearchFailure(
        f"no ({n}, {d}) graph with lambda <= {alpha} in {max_tries} tries (best {best:.6f})",
        best, max_tries)


def certified_base(n: int, d: int, alpha: float, seed: int, max_tries: int = 100,
                   cap: int | None = DENSE_CAP) -> tuple[RotationMap, ExpanderSpec]:
    """A ``d``-regular graph on ``n`` vertices with measured ``lambda_abs2 <= alpha``.

    Random 2-regular multigraphs are unions of cycles or isolated loops and
    are never connected non-bipartite on an even vertex count, so ``d = 2``
    uses the looped path instead of a search.
    """
    if d != 2:
        return find_expander(n, d, alpha, seed, max_tries, cap)
    h = path_with_loops(n)
    lam = lambda_abs2(h, cap)
    if lam > alpha:
        raise SearchFailure(f"looped path on {n} vertices has lambda {lam:.6f} > {alpha}", lam, 1)
    return h, ExpanderSpec(n, d, lam, seed, 1, alpha)


def _as_ints(m: int, generators: Sequence[int | str]) -> list[int]:
    out = []
    for g in generators:
        if isinstance(g, str):
            if len(g) != m or set(g) - {"0", "1"}:
                raise ParameterError(f"generator {g!r} is not an {m}-bit string")
            g = int(g, 2)
        elif not (0 <= g < 1 << m):
            raise ParameterError(f"generator {g} does not fit in {m} bits")
        out.append(int(g))
    return out


def cayley_f2m(m: int, generators: Sequence[int | str]) -> RotationMap:
    """Cayley graph of ``F_2^m``: label ``i`` joins ``v`` and ``v ^ g_i``.

    Every label is its own inverse.  A zero generator yields fixed-point loops.
    """
    if m < 0:
        raise ParameterError("m must be non-negative")
    gens = _as_ints(m, generators)
    if not gens:
        raise ParameterError("need at least one generator")
    if 0 in gens:
        warnings.warn("zero generator produces self loops", stacklevel=2)
    v = np.arange(1 << m, dtype=np.int64)[:, None]
    g = np.asarray(gens, dtype=np.int64)[None, :]
    label = np.broadcast_to(np.arange(len(gens), dtype=np.int64), (1 << m, len(gens)))
    return RotationMap(v ^ g, label)


def character_spectrum(m: int, generators: Sequence[int | str]) -> np.ndarray:
    """Eigenvalues ``(1/d) sum_i (-1)^<x, g_i>`` for every ``x`` in ``F_2^m``, sorted descending."""
    gens = np.asarray(_as_ints(m, generators), dtype=np.uint64)
    x = np.arange(1 << m, dtype=np.uint64)[:, None]
    parity = np.bitwise_count(x & gens[None, :]) & 1
    vals = (1.0 - 2.0 * parity).mean(axis=1)
    return np.sort(vals)[::-1]
