"""Command-line entry point: ``ustconn <command> [options]``.

Exit codes: 0 on success (or connected), 1 when ``connect`` finds no path,
2 on any input or parameter error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .connectivity import (
    DEFAULT_BUDGET_C,
    RV_BASE_DEGREE,
    log_budget,
    oracle_connect,
    path_enum_connect,
    reingold_connect,
    rv_connect,
)
from .errors import GraphError, ParameterError
from .expanders import certified_base, derive_seed
from .graph import (
    MultiGraph,
    RotationMap,
    format_rotation_map,
    parse_edge_list,
    parse_rotation_map,
    rotation_map_from_multigraph,
    to_multigraph,
)
from .operators import TABLE_CAP
from .spectral import DENSE_CAP, component_reports, report
from .transform import (
    TraceRow,
    TransformParams,
    affine_fit,
    canonical_vertex,
    clamp_iterations,
    regularize,
    space_profile,
    transform_trace,
)

EXIT_OK, EXIT_DISCONNECTED, EXIT_ERROR = 0, 1, 2


def _read_graph(args) -> MultiGraph | RotationMap:
    text = Path(args.input).read_text()
    if args.format == "rotmap":
        return parse_rotation_map(text)
    return parse_edge_list(text)


def _as_multigraph(g) -> MultiGraph:
    return to_multigraph(g) if isinstance(g, RotationMap) else g


def _as_rotation_map(g) -> RotationMap:
    return g if isinstance(g, RotationMap) else rotation_map_from_multigraph(g)


def _caps(args) -> tuple[int, int]:
    if args.cap_override is not None:
        return args.cap_override, args.cap_override
    return TABLE_CAP, DENSE_CAP


def _emit(args, text: str):
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _params(args) -> TransformParams:
    l = None if args.l is None else clamp_iterations(args.l)
    return TransformParams(args.d, args.k, args.p, l, args.alpha)


def _base_expander(args, params: TransformParams, dense_cap: int):
    return certified_base(params.degree, params.d, params.alpha,
                          derive_seed(args.seed, 0), cap=dense_cap)


def cmd_spectrum(args) -> int:
    _, dense_cap = _caps(args)
    r = _as_rotation_map(_read_graph(args))
    lines = ["scope," + report(r, dense_cap).CSV_HEADER]
    for c, (_, rep) in enumerate(component_reports(r, dense_cap)):
        lines.append(f"component{c}," + rep.csv_row())
    lines.append("graph," + report(r, dense_cap).csv_row())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_transform_trace(args) -> int:
    table_cap, dense_cap = _caps(args)
    params = _params(args)
    g = _read_graph(args)
    g0 = g if isinstance(g, RotationMap) else regularize(g, params)
    if params.l is None:
        params = params.with_l(1)
        warnings.warn("no --l given; tracing a single iteration", stacklevel=2)
    h, _ = _base_expander(args, params, dense_cap)
    rows = transform_trace(g0, h, params, table_cap, dense_cap)
    _emit(args, "\n".join([TraceRow.CSV_HEADER] + [r.csv_row() for r in rows]) + "\n")
    return EXIT_OK


def _pathenum(g, s: int, t: int, c: float):
    """Rotation-map input is searched as is; an edge list is first regularized
    to degree 3 and searched between the canonical vertices of ``s`` and ``t``."""
    if isinstance(g, RotationMap):
        return path_enum_connect(g, s, t, log_budget(g.n, c))
    if not (0 <= s < g.n and 0 <= t < g.n):
        raise ParameterError(f"vertices ({s}, {t}) outside [0, {g.n})")
    r = regularize(g, 3)
    return path_enum_connect(r, canonical_vertex(s, g.n), canonical_vertex(t, g.n),
                             log_budget(r.n, c))


def cmd_connect(args) -> int:
    g = _read_graph(args)
    c = args.budget_c
    if args.method == "oracle":
        verdict = oracle_connect(_as_multigraph(g), args.s, args.t)
    elif args.method == "pathenum":
        verdict = _pathenum(g, args.s, args.t, c)
    elif args.method == "reingold":
        params = _params(args)
        h, _ = _base_expander(args, params, _caps(args)[1])
        verdict = reingold_connect(_as_multigraph(g), args.s, args.t, params, h, c=c)
    else:
        alphas = [args.alpha] * args.iters
        verdict = rv_connect(_as_multigraph(g), args.s, args.t, args.d, alphas, args.iters,
                             seed=args.seed, q=args.q, c=c)
    sys.stdout.write(json.dumps(verdict.to_json(), sort_keys=True) + "\n")
    return EXIT_OK if verdict.connected else EXIT_DISCONNECTED


def cmd_bench_space(args) -> int:
    params = _params(args)
    top = params.l if params.l is not None else 6
    # edgeless single vertex; the metered workspace does not depend on the base graph
    g_reg = regularize(MultiGraph(1, ()), params)
    h, _ = _base_expander(args, params, _caps(args)[1])
    samples = space_profile(g_reg, h, params, range(1, top + 1), args.queries, args.seed)
    fit = affine_fit([s.l for s in samples], [s.peak_words for s in samples])
    lines = ["l,peak_words,largest_block"]
    lines += [f"{s.l},{s.peak_words},{s.largest_block}" for s in samples]
    lines.append(f"# slope={fit.slope!r},intercept={fit.intercept!r},r2={fit.r2!r}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_gen_expander(args) -> int:
    _, dense_cap = _caps(args)
    n = args.n if args.n is not None else args.d ** args.k
    r, spec = certified_base(n, args.d, args.alpha, args.seed, args.max_tries, dense_cap)
    sidecar = json.dumps(spec.to_json(), sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(format_rotation_map(r))
        Path(args.out + ".json").write_text(sidecar)
    else:
        sys.stdout.write(format_rotation_map(r))
        sys.stderr.write(sidecar)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ustconn", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--input", required=True, help="graph file")
            p.add_argument("--format", choices=("edges", "rotmap"), default="edges")
        p.add_argument("--d", type=int, default=2, help="degree of the base expander H")
        p.add_argument("--k", type=int, default=2, help="H has d**k vertices")
        p.add_argument("--p", type=int, default=1, help="power per iteration (k = 2p)")
        p.add_argument("--l", type=int, default=None, help="iterations (default: transform length)")
        p.add_argument("--alpha", type=float, default=0.75, help="target second eigenvalue for H")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--cap-override", type=int, default=None,
                       help="replace both the table and dense-matrix caps")

    p = sub.add_parser("spectrum", help="spectrum report per component and for the whole graph")
    common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("transform-trace", help="materialized transform, one row per iterate")
    common(p)
    p.set_defaults(func=cmd_transform_trace)

    p = sub.add_parser("connect", help="decide whether s and t are connected")
    common(p)
    p.add_argument("s", type=int)
    p.add_argument("t", type=int)
    p.add_argument("--method", choices=("reingold", "rv", "pathenum", "oracle"),
                   default="reingold")
    p.add_argument("--budget-c", type=float, default=DEFAULT_BUDGET_C)
    p.add_argument("--iters", type=int, default=1, help="derandomized squarings (rv)")
    p.add_argument("--q", type=int, default=1,
                   help=f"power of the {RV_BASE_DEGREE}-regular graph before squaring (rv)")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("bench-space", help="peak lazy-evaluation workspace for l = 1..L")
    common(p, needs_input=False)
    p.add_argument("--queries", type=int, default=8)
    p.set_defaults(func=cmd_bench_space)

    p = sub.add_parser("gen-expander", help="search for a certified regular graph")
    common(p, needs_input=False)
    p.add_argument("--n", type=int, default=None, help="vertex count (default d**k)")
    p.add_argument("--max-tries", type=int, default=100)
    p.set_defaults(func=cmd_gen_expander)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
