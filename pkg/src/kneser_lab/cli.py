"""Command line entry point: ``kneser-lab {verify,scan,container,shadow,bounds}``.

Exit codes: 0 pass, 1 assertion or precondition failure, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import random
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from . import __version__
from .combinat import DomainError
from .container import (
    GraphOracle, PreconditionError, babycont_params, build_container, reconstruct_container,
    supersat_lb, ym_log_bound,
)
from .kneser import SimpleGraph
from .randomsim import expected_y, threshold_scan
from .setfam import Family, KneserParams, ParseError, parse_family, serialize_family
from .shadow import kk_edge_lower_bound, shadow_bound
from .verify import SUITES

THREADS_ENV = "KNESER_LAB_THREADS"


class UsageError(Exception):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational 'num/den': {text!r}") from None


def parse_grid(text: str) -> list[float]:
    """'start:stop:step' (inclusive) or a comma-separated list."""
    if ":" in text:
        try:
            start, stop, step = (Fraction(x) for x in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
        count = int((stop - start) / step) + 1
        return [float(start + i * step) for i in range(count)]
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None


def atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the target directory and rename into place."""
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def emit(args, text: str) -> None:
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)


def resolve_threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV}={env!r} is not an integer") from None
    return 1


def read_family(path: str) -> Family:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        return parse_family(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_verify(args) -> int:
    suite = SUITES[args.suite]
    report = suite(args.n, args.r, trials=args.trials, seed=args.seed)
    status = "PASS" if report.passed else "FAIL"
    if args.format == "json":
        doc = {"suite": report.suite, "n": args.n, "r": args.r, "passed": report.passed,
               "checked": report.checked, "lines": report.lines}
        if report.counterexample is not None:
            doc["counterexample"] = serialize_family(report.counterexample)
        emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        out = [f"{status} verify {report.suite} n={args.n} r={args.r}"] + report.lines
        if report.counterexample is not None:
            out += ["counterexample:", serialize_family(report.counterexample).rstrip("\n")]
        emit(args, "\n".join(out) + "\n")
    return 0 if report.passed else 1


def cmd_scan(args) -> int:
    params = KneserParams(args.n, args.r)
    params.require_kneser_range()
    if any(not 0.0 <= p <= 1.0 for p in args.p_grid):
        raise UsageError("p-grid values must lie in [0, 1]")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    result = threshold_scan(params, args.p_grid, args.trials, args.seed,
                            threads=resolve_threads(args), cap=args.cap,
                            coupled=not args.independent_points)
    text = result.to_json(__version__) if args.format == "json" else result.to_csv()
    emit(args, text)
    if result.inversions:
        print(f"warning: {len(result.inversions)} phat inversions beyond Wilson noise",
              file=sys.stderr)
    return 0


def _container_inputs(args) -> tuple[GraphOracle, list[int], Family | None]:
    if args.graph == "kneser":
        if args.family is None:
            raise UsageError("--graph kneser needs --family")
        fam = read_family(args.family)
        if (fam.n, fam.r) != (args.n, args.r):
            raise UsageError(f"family is on [{fam.n}]^({fam.r}), expected n={args.n} r={args.r}")
        seed = args.order_seed if args.order == "random" else None
        return GraphOracle.kneser(args.n, args.r, seed), list(fam.ranks), fam
    rng = random.Random(args.graph_seed)
    nv = args.vertices
    edges = [(i, j) for i in range(nv) for j in range(i + 1, nv) if rng.random() < args.edge_prob]
    g = SimpleGraph.from_edges(nv, edges)
    order = None
    if args.order == "random":
        order = list(range(nv))
        random.Random(args.order_seed).shuffle(order)
    u = [int(x) for x in args.u.split(",") if x.strip()] if args.u else []
    if any(not 0 <= v < nv for v in u):
        raise UsageError("--u vertices out of range")
    return GraphOracle.from_graph(g, order), u, None


def cmd_container(args) -> int:
    oracle, u, _ = _container_inputs(args)
    try:
        run = build_container(oracle, u, args.a, args.b)
    except PreconditionError as exc:
        print(f"precondition failed: measured mu(U) = {exc.mu} > a = {args.a}", file=sys.stderr)
        return 1
    doc = run.to_json()
    doc["vertex_labels"] = "colex rank" if args.graph == "kneser" else "vertex index"
    status = 0
    if args.replay:
        same = reconstruct_container(oracle, run.fingerprint, args.a, args.b) == run.container
        doc["reconstruction"] = "identical" if same else "MISMATCH"
        status = 0 if same else 1
    if args.format == "json":
        emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        b = run.bounds
        lines = [
            f"fingerprint |T| = {len(run.fingerprint)} (T1={run.t1_size}, T2={run.t2_size}), k = {run.k}",
            f"container |C| = {len(run.container)}, mu(C) = {run.mu_container}",
            "bounds:",
            f"  |T| <= {b['fingerprint_size']:.2f}",
            f"  mu(C) <= {b['mu_container']:.2f}",
            f"fingerprint: {' '.join(map(str, run.fingerprint))}",
            f"container: {' '.join(map(str, run.container))}",
        ]
        if args.replay:
            lines.append(f"reconstruction: {doc['reconstruction']}")
        emit(args, "\n".join(lines) + "\n")
    return status


def cmd_shadow(args) -> int:
    fam = read_family(args.family)
    if args.kk:
        bound, trace = kk_edge_lower_bound(fam, cap=args.cap)
        emit(args, json.dumps(trace.to_json(), indent=2) + "\n")
        return 0
    k = fam.r - 1 if args.k is None else args.k
    sb = shadow_bound(fam, k)
    doc = {"size": len(fam), "r": fam.r, "k": k, "exact_size": sb.exact_size,
           "lovasz_x": sb.lovasz_x, "lovasz_bound": sb.lovasz_bound}
    if args.format == "json":
        emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        emit(args, "".join(f"{key}: {val}\n" for key, val in doc.items()))
    return 0 if sb.exact_size >= sb.lovasz_bound - 1e-6 else 1


def cmd_bounds(args) -> int:
    params = KneserParams(args.n, args.r)
    params.require_kneser_range()
    rows: list[tuple[str, str]] = [("V", str(params.V)), ("N", str(params.N)),
                                   ("M", str(params.M)), ("R", str(params.R))]
    if args.epsilon is not None and args.beta is not None and args.m is not None:
        bp = babycont_params(params, args.epsilon, args.beta, args.m)
        rows += [("C_hat", repr(bp.C_hat)), ("k1", repr(bp.k1)), ("k2", repr(bp.k2)),
                 ("log_container_count", repr(bp.log_container_count)),
                 ("vacuous", str(bp.vacuous))]
    if args.epsilon is not None and args.m is not None:
        try:
            rows.append(("ym_log_bound", repr(ym_log_bound(params, args.epsilon, args.m, args.beta))))
        except DomainError as exc:
            rows.append(("ym_log_bound", f"n/a ({exc})"))
    if args.k is not None:
        rows.append(("supersat_lb", str(supersat_lb(params, args.k))))
    for p in args.p_grid or []:
        ey = expected_y(params, p)
        rows.append((f"expected_y_log[p={p!r}]", repr(-math.inf if ey.is_zero else ey.log_value)))
    if args.format == "json":
        emit(args, json.dumps(dict(rows), indent=2) + "\n")
    elif args.format == "csv":
        emit(args, "quantity,value\n" + "".join(f"{k},{v}\n" for k, v in rows))
    else:
        emit(args, "".join(f"{k}: {v}\n" for k, v in rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kneser-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kneser-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=("text", "json")):
        p.add_argument("--format", choices=fmt, default=fmt[0])
        p.add_argument("--output", "-o", help="write to this path atomically instead of stdout")
        p.add_argument("--cap", type=int, default=600, help="exact solver vertex cap")

    p = sub.add_parser("verify", help="run a theorem-inequality suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="Monte Carlo P(alpha = N) over a p grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--p-grid", type=parse_grid, required=True, help="start:stop:step or a,b,c")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help=f"worker processes (env {THREADS_ENV})")
    p.add_argument("--independent-points", action="store_true",
                   help="fresh trial seeds per grid point instead of shared edge uniforms")
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("container", help="build a graph container for a sparse set")
    p.add_argument("--graph", choices=("kneser", "gnp"), default="kneser")
    p.add_argument("--n", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--family", help="family file (kneser graph)")
    p.add_argument("--vertices", type=int, default=40, help="gnp vertex count")
    p.add_argument("--edge-prob", type=float, default=0.2)
    p.add_argument("--graph-seed", type=int, default=0)
    p.add_argument("--u", help="gnp: comma-separated vertex indices of U")
    p.add_argument("--a", type=rational, required=True)
    p.add_argument("--b", type=rational, required=True)
    p.add_argument("--order", choices=("colex", "random"), default="colex")
    p.add_argument("--order-seed", type=int, default=0)
    p.add_argument("--replay", action="store_true", help="check reconstruction from T")
    common(p)
    p.set_defaults(func=cmd_container)

    p = sub.add_parser("shadow", help="exact shadow vs Lovasz bound, or the --kk pipeline")
    p.add_argument("--family", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--kk", action="store_true", help="print the shadow edge-bound trace")
    common(p)
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("bounds", help="evaluate counting bounds and E[Y]")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int, help="supersaturation excess k")
    p.add_argument("--p-grid", type=parse_grid, help="probabilities for E[Y]")
    common(p, ("text", "json", "csv"))
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "graph", None) == "kneser" and args.command == "container":
        if args.n is None or args.r is None:
            parser.error("--graph kneser needs --n and --r")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
