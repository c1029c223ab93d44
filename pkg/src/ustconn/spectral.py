"""Normalized adjacency spectra and the bound checks built on them."""

from __future__ import annotations

from dataclasses import dataclass, astuple
from typing import Sequence

import numpy as np

from .errors import NumericalError, SizeCapError
from .graph import (
    RotationMap,
    is_bipartite,
    restrict,
    rotation_components,
    to_adjacency,
    to_multigraph,
)

TOL = 1e-9
DENSE_CAP = 4096


@dataclass(frozen=True, eq=False)
class NormalizedAdjacency:
    entries: np.ndarray
    degree: int

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    d: int
    lambda1: float
    lambda2_signed: float
    lambda_min: float
    lambda_abs2: float
    gap: float
    connected: bool
    bipartite: bool

    CSV_HEADER = "n,d,lambda1,lambda2_signed,lambda_min,lambda_abs2,gap,connected,bipartite"

    def csv_row(self) -> str:
        fields = []
        for x in astuple(self):
            if isinstance(x, bool):
                fields.append("true" if x else "false")
            else:
                fields.append(repr(x))
        return ",".join(fields)


def normalized_adjacency(r: RotationMap, cap: int | None = DENSE_CAP) -> NormalizedAdjacency:
    if cap is not None and r.n > cap:
        raise SizeCapError(f"dense matrix of size {r.n} exceeds cap {cap}")
    return NormalizedAdjacency(to_adjacency(r) / r.d, r.d)


def eigenvalues(m: NormalizedAdjacency) -> np.ndarray:
    """All eigenvalues, sorted descending."""
    try:
        vals = np.linalg.eigvalsh(m.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolve failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise NumericalError("eigensolver returned non-finite values")
    return vals[::-1]


def spectrum_report(m: NormalizedAdjacency, components: Sequence[Sequence[int]],
                    bipartite: bool) -> SpectrumReport:
    """Summarize the spectrum of ``m``.

    ``components`` and ``bipartite`` come from the exact oracles.  A
    single-vertex graph has no non-trivial eigenvalue; both second-eigenvalue
    fields are then reported as 0.
    """
    vals = eigenvalues(m)
    lam1 = float(vals[0])
    lam_min = float(vals[-1])
    if len(vals) > 1:
        lam2 = float(vals[1])
        abs2 = max(abs(lam2), abs(lam_min))
    else:
        lam2 = 0.0
        abs2 = 0.0
    return SpectrumReport(
        n=m.n, d=m.degree, lambda1=lam1, lambda2_signed=lam2, lambda_min=lam_min,
        lambda_abs2=abs2, gap=1.0 - lam2, connected=len(components) == 1,
        bipartite=bool(bipartite),
    )


def report(r: RotationMap, cap: int | None = DENSE_CAP) -> SpectrumReport:
    """:func:`spectrum_report` with the oracle flags computed from ``r``."""
    m = normalized_adjacency(r, cap)
    comps = rotation_components(r)
    bip = all(is_bipartite(to_multigraph(r)).values())
    return spectrum_report(m, comps, bip)


def lambda_abs2(r: RotationMap, cap: int | None = DENSE_CAP) -> float:
    vals = eigenvalues(normalized_adjacency(r, cap))
    if len(vals) == 1:
        return 0.0
    return float(max(abs(vals[1]), abs(vals[-1])))


def component_reports(r: RotationMap, cap: int | None = DENSE_CAP) -> list[tuple[list[int], SpectrumReport]]:
    return [(comp, report(restrict(r, comp), cap)) for comp in rotation_components(r)]


@dataclass(frozen=True)
class AlonCheck:
    component: tuple[int, ...]
    status: str  # "pass", "fail" or "skipped"
    reason: str = ""
    bound: float | None = None
    measured: float | None = None


def check_alon_bound(r: RotationMap, cap: int | None = DENSE_CAP) -> list[AlonCheck]:
    """Check ``lambda2 <= 1 - 1/(d n'^2)`` on every connected non-bipartite component."""
    out = []
    for comp, rep in component_reports(r, cap):
        key = tuple(comp)
        if rep.bipartite:
            out.append(AlonCheck(key, "skipped", "bipartite"))
            continue
        if rep.n == 1:
            out.append(AlonCheck(key, "skipped", "single vertex"))
            continue
        bound = 1.0 - 1.0 / (r.d * rep.n ** 2)
        ok = rep.lambda2_signed <= bound + TOL
        out.append(AlonCheck(key, "pass" if ok else "fail", "", bound, rep.lambda2_signed))
    return out
