"""Command-line front end.

Exit codes: 0 success, 1 user/validation error, 2 internal cross-check
failure (methods disagree or a roundtrip fails).  Output is JSON (JSON lines
for enumerations) or DOT, and is byte-identical across identical invocations;
wall-clock timings are only emitted behind --timings.

HURWITZ_THREADS caps the verify sweep's worker processes (0 = one per CPU,
unset = serial).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .core import HurwitzError, Partition, RZero, format_rational, hurwitz_params
from .permutation import count_hurwitz_permutation, enumerate_monodromy_sets
from .ribbon import (
    count_hurwitz_ribbon,
    enumerate_skeletons,
    hurwitz_ribbon_classes,
)
from .traffic import roundtrip_check
from .tropical import (
    count_hurwitz_tropical,
    enumerate_tropical_graphs,
    monodromy_graph_classes,
)

METHODS = {
    "permutation": count_hurwitz_permutation,
    "ribbon": count_hurwitz_ribbon,
    "tropical": count_hurwitz_tropical,
}


def _emit(doc) -> None:
    sys.stdout.write(json.dumps(doc) + "\n")


def _fail(message: str) -> int:
    sys.stderr.write(f"error: {message}\n")
    return 1


def _params_from(args):
    if args.genus is None or args.mu is None or args.nu is None:
        raise ValueError("--genus, --mu and --nu are required here")
    return hurwitz_params(
        args.genus, Partition.parse(args.mu), Partition.parse(args.nu)
    )


def cmd_compute(args) -> int:
    try:
        params = _params_from(args)
    except (HurwitzError, ValueError) as exc:
        return _fail(str(exc))
    wanted = (
        list(METHODS) if args.method == "all" else [args.method]
    )
    values = {}
    timings = {}
    for name in wanted:
        t0 = time.perf_counter()
        try:
            values[name] = METHODS[name](params)
        except RZero as exc:
            return _fail(str(exc))
        timings[name] = round(1000.0 * (time.perf_counter() - t0), 3)
    agree = len(set(values.values())) == 1
    report = {
        "params": params.describe(),
        "values": {k: format_rational(v) for k, v in values.items()},
        "value": format_rational(next(iter(values.values()))) if agree else None,
        "agree": agree,
    }
    if args.timings:
        report["timings_ms"] = timings
    _emit(report)
    return 0 if agree else 2


def cmd_enumerate(args) -> int:
    kind = args.kind
    as_dot = args.format == "dot"
    try:
        if kind in ("skeletons", "tropical-graphs"):
            if args.m is None or args.n is None or args.r is None:
                return _fail(f"--kind {kind} needs --m, --n and --r")
            if args.r < 1:
                return _fail("r >= 1 required")
            if kind == "skeletons":
                items = enumerate_skeletons(args.m, args.n, args.r)
                for skel, aut in items:
                    if as_dot:
                        sys.stdout.write(skel.to_dot() + "\n")
                    else:
                        _emit({"skeleton": skel.serialize(), "aut": aut})
            else:
                for graph, aut in enumerate_tropical_graphs(args.m, args.n, args.r):
                    if as_dot:
                        sys.stdout.write(graph.to_dot() + "\n")
                    else:
                        _emit({"graph": graph.serialize(), "aut": aut})
            return 0
        params = _params_from(args)
        if kind == "monodromy-sets":
            if as_dot:
                return _fail("monodromy sets have no DOT form")
            for ms in enumerate_monodromy_sets(params):
                _emit(ms.serialize())
        elif kind == "hrgs":
            for hrg, aut in hurwitz_ribbon_classes(params):
                if as_dot:
                    sys.stdout.write(hrg.to_dot() + "\n")
                else:
                    _emit({"hrg": hrg.serialize(), "aut": aut})
        elif kind == "monodromy-graphs":
            for mg, aut in monodromy_graph_classes(params):
                if as_dot:
                    sys.stdout.write(mg.to_dot() + "\n")
                else:
                    _emit({"graph": mg.serialize(), "aut": aut})
        return 0
    except (HurwitzError, ValueError) as exc:
        return _fail(str(exc))


def _descending_partitions(d: int) -> list:
    def gen(total, cap):
        if total == 0:
            yield ()
            return
        for p in range(min(total, cap), 0, -1):
            for rest in gen(total - p, p):
                yield (p,) + rest

    return list(gen(d, d))


def sweep_params(max_d: int, max_r: int) -> list:
    """All (g, mu, nu) with sum <= max_d and 1 <= r <= max_r, partitions taken
    descending (parts are labels; counts are invariant under reordering)."""
    out = []
    for d in range(1, max_d + 1):
        parts = _descending_partitions(d)
        for mu in parts:
            for nu in parts:
                g = 0
                while True:
                    r = 2 * g - 2 + len(mu) + len(nu)
                    if r > max_r:
                        break
                    if r >= 1:
                        out.append((g, mu, nu))
                    g += 1
    return out


def _verify_one(job):
    g, mu, nu = job
    params = hurwitz_params(g, Partition(mu), Partition(nu))
    values = {name: fn(params) for name, fn in METHODS.items()}
    agree = len(set(values.values())) == 1
    rep = roundtrip_check(params)
    return {
        "params": params.describe(),
        "values": {k: format_rational(v) for k, v in values.items()},
        "agree": agree,
        "roundtrip_matched": rep.matched,
        "classes": rep.classes_ribbon,
    }


def worker_count() -> int:
    raw = os.environ.get("HURWITZ_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def cmd_verify(args) -> int:
    if args.max_d < 1 or args.max_r < 1:
        return _fail("--max-d and --max-r must be >= 1")
    jobs = sweep_params(args.max_d, args.max_r)
    workers = worker_count()
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(job) for job in jobs]
    failures = [
        res
        for res in results
        if not (res["agree"] and res["roundtrip_matched"])
    ]
    report = {
        "max_d": args.max_d,
        "max_r": args.max_r,
        "checked": len(results),
        "all_agree": not failures,
        "results": results,
    }
    if failures:
        report["first_failure"] = failures[0]
    _emit(report)
    return 0 if not failures else 2


def cmd_chambers(args) -> int:
    from .chambers import degree_check, fit_all_chambers, walls

    r = 2 * args.genus - 2 + args.m + args.n
    if r < 1:
        return _fail(f"(g={args.genus}, m={args.m}, n={args.n}) has r={r}; no chambers")
    try:
        fits = fit_all_chambers(args.genus, args.m, args.n, dmax=args.dmax)
    except HurwitzError as exc:
        return _fail(str(exc))
    _emit(
        {
            "g": args.genus,
            "m": args.m,
            "n": args.n,
            "degree_bound": 4 * args.genus - 3 + args.m + args.n,
            "walls": [w.describe() for w in walls(args.m, args.n)],
            "chambers": [
                dict(cp.describe(), degree_ok=degree_check(cp)) for cp in fits
            ],
        }
    )
    return 0


def cmd_roundtrip(args) -> int:
    try:
        params = _params_from(args)
        rep = roundtrip_check(params)
    except (HurwitzError, ValueError) as exc:
        return _fail(str(exc))
    _emit(rep.serialize())
    return 0 if rep.matched else 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hurwitz",
        description="Exact double Hurwitz numbers via permutations, ribbon graphs and tropical graphs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="compute H_g(mu, nu)")
    c.add_argument("--genus", type=int, required=True)
    c.add_argument("--mu", required=True, help='partition, e.g. "2,1"')
    c.add_argument("--nu", required=True)
    c.add_argument(
        "--method",
        choices=["permutation", "ribbon", "tropical", "all"],
        default="all",
    )
    c.add_argument("--timings", action="store_true", help="include wall-clock timings")
    c.set_defaults(func=cmd_compute)

    e = sub.add_parser("enumerate", help="list combinatorial objects, one per line")
    e.add_argument(
        "--kind",
        choices=[
            "monodromy-sets",
            "skeletons",
            "hrgs",
            "tropical-graphs",
            "monodromy-graphs",
        ],
        required=True,
    )
    e.add_argument("--genus", type=int)
    e.add_argument("--mu")
    e.add_argument("--nu")
    e.add_argument("--m", type=int)
    e.add_argument("--n", type=int)
    e.add_argument("--r", type=int)
    e.add_argument("--format", choices=["json", "dot"], default="json")
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", help="cross-check all three methods on a sweep")
    v.add_argument("--max-d", type=int, required=True)
    v.add_argument("--max-r", type=int, required=True)
    v.set_defaults(func=cmd_verify)

    ch = sub.add_parser("chambers", help="fit chamber polynomials exactly")
    ch.add_argument("--genus", type=int, required=True)
    ch.add_argument("--m", type=int, required=True)
    ch.add_argument("--n", type=int, required=True)
    ch.add_argument("--dmax", type=int, default=10)
    ch.set_defaults(func=cmd_chambers)

    rt = sub.add_parser("roundtrip", help="ribbon <-> permutation translation check")
    rt.add_argument("--genus", type=int, required=True)
    rt.add_argument("--mu", required=True)
    rt.add_argument("--nu", required=True)
    rt.set_defaults(func=cmd_roundtrip)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
