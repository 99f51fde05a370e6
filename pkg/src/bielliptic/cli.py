"""Command-line front end.

Exit codes: 0 success, 1 verification or assertion failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from typing import List, Optional

from . import graphsum as gs
from . import invariants as inv
from .enumeration import default_workers, enumerate_diagrams, enumerate_shapes
from .series import format_fraction
from .surface import ALL_TYPES, surface_type


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    kinds: List[str] = field(default_factory=list)
    genus: Optional[int] = None
    amax: Optional[int] = None
    bmax: Optional[int] = None
    umax: Optional[int] = None
    qmax: Optional[int] = None
    fmt: str = "json"
    divide_automorphisms: bool = True
    workers: int = 1
    output: Optional[str] = None

    def check(self):
        for name in ("amax", "bmax", "qmax"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise UsageError(f"--{name} must be >= 1, got {v}")
        if self.umax is not None and self.umax < 0:
            raise UsageError("--umax must be >= 0")
        if self.genus is not None and self.genus < 2:
            raise UsageError("--genus must be >= 2")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")
        if self.fmt not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.fmt!r}")


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, cfg: RunConfig):
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _kinds(value: str) -> List[str]:
    if value.lower() == "all":
        return [t.kind for t in ALL_TYPES]
    try:
        return [surface_type(value).kind]
    except ValueError as exc:
        raise UsageError(str(exc))


def _csv_table(series, amax: int, bmax: int) -> str:
    rows = ["a\\b," + ",".join(str(b) for b in range(1, bmax + 1))]
    for a in range(1, amax + 1):
        rows.append(f"{a}," + ",".join(format_fraction(series[(a, b)]) for b in range(1, bmax + 1)))
    return "\n".join(rows) + "\n"


# -- commands --------------------------------------------------------------

def cmd_invariants(cfg: RunConfig, refined: bool = False, experimental: bool = False) -> int:
    t = surface_type(cfg.kinds[0])
    if refined:
        umax = 10 if cfg.umax is None else cfg.umax
        tab = inv.refined_table(t, cfg.genus, cfg.amax, cfg.bmax, umax, cfg.workers, experimental=experimental)
        if cfg.fmt == "csv":
            lines = ["a,b,u,coefficient"]
            for a, s in sorted(tab.items()):
                for (u, b), v in s.items():
                    lines.append(f"{a},{b},{u},{format_fraction(v)}")
            _emit("\n".join(lines) + "\n", cfg)
        else:
            _emit(_dump({"surface": t.to_json(), "g0": cfg.genus, "bounds": {"amax": cfg.amax, "bmax": cfg.bmax, "umax": umax},
                         "refined": {str(a): s.to_json() for a, s in sorted(tab.items())}}), cfg)
        return 0
    f = inv.series_F(t, cfg.genus, cfg.amax, cfg.bmax, cfg.workers, cfg.divide_automorphisms)
    if cfg.fmt == "csv":
        _emit(_csv_table(f, cfg.amax, cfg.bmax), cfg)
    else:
        _emit(_dump({"surface": t.to_json(), "genus": cfg.genus, "divide_automorphisms": cfg.divide_automorphisms,
                     "bounds": {"amax": cfg.amax, "bmax": cfg.bmax}, "series": f.to_json()}), cfg)
    return 0


def _describe(report: inv.InvariantReport) -> str:
    head = f"{'PASS' if report.ok else 'FAIL'} {report.name} type={report.kind.lower()}"
    if report.first_mismatch:
        mm = report.first_mismatch
        where = ", ".join(f"{k}={mm[k]}" for k in ("a", "b", "u") if k in mm)
        head += f" first mismatch at ({where}): computed {mm['computed']}, oracle {mm['oracle']}"
    if report.extra.get("closed_form_matches"):
        m = report.extra["closed_form_matches"]
        head += " printed closed form: " + ", ".join(f"{k}={'match' if v else 'no match'}" for k, v in m.items())
    return head


def run_suite(suite: str, kinds: List[str], amax: int, bmax: int, umax: int, qmax: int, workers: int,
              oracle: str = "lists") -> List[dict]:
    """Run a verification suite; returns canonical (timing-free) result records."""
    results = []
    if suite in ("genus2", "all"):
        for k in kinds:
            results.append(inv.verify_genus2(surface_type(k), amax, bmax, workers))
    if suite in ("genus3", "all"):
        for k in kinds:
            results.append(inv.verify_genus3(surface_type(k), amax, bmax, workers, oracle if k == "A" else "lists"))
    if suite in ("refined", "all"):
        for k in kinds:
            results.append(inv.verify_refined(surface_type(k), amax, bmax, umax, workers))
    if suite in ("graphsum", "all"):
        loops = gs.check_loop_examples(qmax)
        tele = gs.check_telescoping(qmax)
        contour = gs.check_contour(qmax)
        bad = [r for r in loops + tele + contour if not r["ok"]]
        results.append({"suite": "graphsum", "ok": not bad, "qmax": qmax,
                        "loop_examples": loops, "telescoping": tele,
                        "contour": {"cases": len(contour), "failures": [r for r in contour if not r["ok"]]}})
    return results


def cmd_verify(cfg: RunConfig, suite: str, oracle: str) -> int:
    umax = 10 if cfg.umax is None else cfg.umax
    qmax = 8 if cfg.qmax is None else cfg.qmax
    t0 = time.perf_counter()
    results = run_suite(suite, cfg.kinds, cfg.amax, cfg.bmax, umax, qmax, cfg.workers, oracle)
    ok = True
    records = []
    lines = []
    for r in results:
        if isinstance(r, inv.InvariantReport):
            ok &= r.ok
            lines.append(_describe(r))
            records.append(r.to_json())
        else:
            ok &= r["ok"]
            line = f"{'PASS' if r['ok'] else 'FAIL'} graphsum qmax={r['qmax']} contour cases={r['contour']['cases']}"
            if not r["ok"]:
                first = (r["contour"]["failures"] or [x for x in r["loop_examples"] + r["telescoping"] if not x["ok"]])[0]
                line += f" first failure: {json.dumps(first)}"
            lines.append(line)
            records.append(r)
    if cfg.fmt == "json":
        _emit(_dump({"ok": ok, "results": records}), cfg)
    else:
        _emit("\n".join(lines) + "\n", cfg)
    if cfg.output or cfg.fmt == "json":
        sys.stderr.write("\n".join(lines) + "\n")
    sys.stderr.write(f"elapsed {time.perf_counter() - t0:.2f}s\n")
    return 0 if ok else 1


def cmd_diagrams(cfg: RunConfig, degree: Optional[tuple], count: bool, shapes: bool) -> int:
    if shapes:
        found = enumerate_shapes(cfg.genus)
        if count:
            _emit(f"{len(found)}\n", cfg)
        else:
            _emit(_dump([s.to_json() for s in found]), cfg)
        return 0
    if degree is None:
        raise UsageError("--degree A,B is required unless --shapes is given")
    a, b = degree
    ds = enumerate_diagrams(cfg.genus, a, b, cfg.workers)
    if count:
        _emit(f"{len(ds)}\n", cfg)
    else:
        _emit(_dump([d.to_json() for d in ds]), cfg)
    return 0


def cmd_graphsum(cfg: RunConfig, path: str, check_contour: bool) -> int:
    try:
        with open(path) as fh:
            dg = gs.DecoratedGraph.from_json(json.load(fh))
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read graph {path}: {exc}")
    s = gs.graph_sum(dg, cfg.qmax)
    out = {"graph": dg.to_json(), "qmax": cfg.qmax, "series": s.to_json()}
    code = 0
    if check_contour:
        c = gs.constant_coefficient_check(dg.without_loops(), cfg.qmax)
        loops_ok = gs.check_loop_factorization(dg, cfg.qmax)
        same = c == gs.graph_sum(dg.without_loops(), cfg.qmax)
        out["contour"] = {"series": c.to_json(), "matches_loopless_graph_sum": same, "loop_factorization": loops_ok}
        if not (same and loops_ok):
            code = 1
    _emit(_dump(out), cfg)
    return code


# -- argument parsing ------------------------------------------------------

def _degree(text: str) -> tuple:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("degree must look like A,B")
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("degree entries must be >= 1")
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bielliptic", description="Pearl-diagram invariants of bielliptic surfaces.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--workers", type=int, default=None,
                        help="worker threads (default from BIELLIPTIC_WORKERS, else 1)")
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    si = sub.add_parser("invariants", help="table of invariants F_g(p, q)")
    si.add_argument("--type", required=True, choices=["a", "b", "c", "d"])
    si.add_argument("--genus", type=int, required=True)
    si.add_argument("--amax", type=int, required=True)
    si.add_argument("--bmax", type=int, required=True)
    si.add_argument("--format", choices=["json", "csv"], default="json")
    si.add_argument("--refined", action="store_true", help="refined series (genus is then g0)")
    si.add_argument("--umax", type=int, default=None)
    si.add_argument("--experimental", action="store_true", help="allow refined series with g0 != 2")
    si.add_argument("--no-aut-division", action="store_true",
                    help="do not divide by parallel-edge automorphisms")
    common(si)

    sv = sub.add_parser("verify", help="compare the pipeline with closed forms")
    sv.add_argument("suite", choices=["genus2", "genus3", "refined", "graphsum", "all"])
    sv.add_argument("--type", default="all", choices=["a", "b", "c", "d", "all"])
    sv.add_argument("--amax", type=int, default=4)
    sv.add_argument("--bmax", type=int, default=4)
    sv.add_argument("--umax", type=int, default=None)
    sv.add_argument("--qmax", type=int, default=None)
    sv.add_argument("--oracle", choices=["lists", "printed"], default="lists",
                    help="genus-3 type a: per-type lists (default) or the literal printed total")
    sv.add_argument("--format", choices=["text", "json"], default="text")
    common(sv)

    sd = sub.add_parser("diagrams", help="list or count pearl diagrams or shapes")
    sd.add_argument("--genus", type=int, required=True)
    sd.add_argument("--degree", type=_degree)
    mode = sd.add_mutually_exclusive_group()
    mode.add_argument("--list", action="store_true")
    mode.add_argument("--count", action="store_true")
    sd.add_argument("--shapes", action="store_true")
    common(sd)

    sg = sub.add_parser("graphsum", help="graph generating series from a JSON graph")
    sg.add_argument("--graph", required=True)
    sg.add_argument("--qmax", type=int, required=True)
    sg.add_argument("--check-contour", action="store_true")
    common(sg)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        workers = args.workers if args.workers is not None else default_workers()
        cfg = RunConfig(args.command, workers=workers, output=args.output)
        if args.command == "invariants":
            cfg.kinds = _kinds(args.type)
            cfg.genus, cfg.amax, cfg.bmax, cfg.umax = args.genus, args.amax, args.bmax, args.umax
            cfg.fmt = args.format
            cfg.divide_automorphisms = not args.no_aut_division
            cfg.check()
            return cmd_invariants(cfg, args.refined, args.experimental)
        if args.command == "verify":
            cfg.kinds = _kinds(args.type)
            cfg.amax, cfg.bmax, cfg.umax, cfg.qmax = args.amax, args.bmax, args.umax, args.qmax
            cfg.fmt = args.format
            cfg.check()
            if args.oracle == "printed" and "A" not in cfg.kinds:
                raise UsageError("--oracle printed applies to type a only")
            return cmd_verify(cfg, args.suite, args.oracle)
        if args.command == "diagrams":
            cfg.genus = args.genus
            cfg.check()
            return cmd_diagrams(cfg, args.degree, args.count, args.shapes)
        if args.command == "graphsum":
            cfg.qmax = args.qmax
            cfg.check()
            return cmd_graphsum(cfg, args.graph, args.check_contour)
    except UsageError as exc:
        parser.error(str(exc))
    except AssertionError as exc:
        sys.stderr.write(f"assertion failed: {exc}\n")
        return 1
    except (ValueError, NotImplementedError) as exc:
        parser.error(str(exc))
    return 2


if __name__ == "__main__":
    sys.exit(main())
