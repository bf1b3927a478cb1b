"""Command line interface: ``modcx <command> ...``.

Rings are catalog names or JSON session files of the form

    {"field": 101, "vars": ["x", "y"], "relations": ["x^2", "x*y - y^2"],
     "cap": 3, "modules": {"M": {"gens": 2, "relations": [["x", "y"], ["y", "0"]]}}}

Modules are ``k``, ``R``, ``E``, ``rand:SEED`` or a name from the session
file; a trailing ``^v`` takes the Matlis dual.

Exit codes: 0 success, 1 a check was violated or a cross-check disagreed,
2 bad input, 3 an internal invariant failed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import traceback
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from . import growth
from . import linalg as la
from .algebra import AlgebraError, AlgebraSpec, ArtinAlgebra, build_algebra
from .checks import FAULTS, SUITE_MODULES, SUITE_RINGS, corpus, run_full_suite, run_suite
from .fixtures import CATALOG, FixtureError, builtin_ring, random_module
from .homology import ext_table, tor_table
from .modules import ModuleError, ModulePresentation, ModuleRep, free_module, injective_hull, matlis_dual, realize, residue_field
from .polynomial import PolynomialSyntaxError
from .resolution import DEFAULT_MAX_DIM, ResolutionError, minimal_free_resolution, verify_resolution

SCHEMA = "modcx/1"

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class InputError(ValueError):
    pass


class InternalError(RuntimeError):
    pass


@dataclass
class SessionConfig:
    prime: int = la.DEFAULT_PRIME
    steps: int = 20
    max_order: int = growth.DEFAULT_MAX_ORDER
    max_dim: int = DEFAULT_MAX_DIM
    seed: int = 0
    cache_dir: str | None = None
    fmt: str = "text"
    thresholds: dict = field(
        default_factory=lambda: {
            "guard": growth.GUARD,
            "horizon": growth.HORIZON,
            "epsilon": str(growth.EPSILON),
            "tail": growth.TAIL,
        }
    )

    def __post_init__(self):
        if not la.is_prime(self.prime):
            raise InputError(f"--prime {self.prime} is not prime")
        if self.steps < 1:
            raise InputError("--steps must be at least 1")
        if self.fmt not in ("json", "csv", "text"):
            raise InputError(f"unknown format {self.fmt!r}")


# -- input -------------------------------------------------------------------


@dataclass
class Session:
    algebra: ArtinAlgebra
    modules: dict[str, ModulePresentation]
    source: str


def _line_of(text: str, needle: str) -> int | None:
    pos = text.find(json.dumps(needle))
    return text.count("\n", 0, pos) + 1 if pos >= 0 else None


def load_session(ref: str, prime: int) -> Session:
    """A catalog ring or a JSON session file."""
    if ref in CATALOG or not os.path.exists(ref):
        try:
            algebra, _ = builtin_ring(ref, prime)
        except FixtureError as exc:
            raise InputError(f"{exc.args[0]} (and no such file)") from exc
        return Session(algebra, {}, ref)
    text = Path(ref).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{ref}:{exc.lineno}: invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise InputError(f"{ref}: expected a JSON object")
    missing = [k for k in ("vars", "relations", "cap") if k not in doc]
    if missing:
        raise InputError(f"{ref}: missing keys {missing}")
    field_p = int(doc.get("field", prime))
    name = doc.get("name") or Path(ref).stem
    try:
        spec = AlgebraSpec(doc["vars"], doc["relations"], int(doc["cap"]), field_p, name, doc.get("ci_codim"))
        algebra = build_algebra(spec)
    except PolynomialSyntaxError as exc:
        bad = next((r for r in doc["relations"] if r == getattr(exc, "text", None)), None)
        line = _line_of(text, bad) if bad is not None else None
        raise InputError(f"{ref}:{line or '?'}: {exc}") from exc
    except AlgebraError as exc:
        raise InputError(f"{ref}: {exc}") from exc
    modules = {}
    for mname, mdoc in (doc.get("modules") or {}).items():
        try:
            modules[mname] = ModulePresentation(mname, int(mdoc["gens"]), list(mdoc.get("relations", [])))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{ref}:{_line_of(text, mname) or '?'}: module {mname!r}: {exc}") from exc
    return Session(algebra, modules, ref)


def resolve_module(session: Session, ref: str) -> tuple[ModuleRep, dict]:
    """The module named ``ref`` and a canonical description of it for cache keys."""
    A = session.algebra
    if ref.endswith("^v"):
        base, desc = resolve_module(session, ref[:-2])
        return matlis_dual(base, name=ref), {"dual": desc}
    if ref == "k":
        return residue_field(A), {"builtin": "k"}
    if ref == "R":
        return free_module(A, 1, name="R"), {"builtin": "R"}
    if ref == "E":
        return injective_hull(A), {"builtin": "E"}
    if ref.startswith("rand:"):
        try:
            seed = int(ref[5:])
        except ValueError as exc:
            raise InputError(f"bad random module {ref!r}; use rand:SEED") from exc
        pres = random_module(A, seed)
    elif ref in session.modules:
        pres = session.modules[ref]
    else:
        known = ", ".join(["k", "R", "E", "rand:SEED", *session.modules])
        raise InputError(f"unknown module {ref!r}; known: {known}")
    try:
        M = realize(A, pres)
    except (ModuleError, PolynomialSyntaxError, ValueError) as exc:
        raise InputError(f"module {ref!r}: {exc}") from exc
    M.name = ref
    return M, {"presentation": pres.canonical(A)}


# -- cache -------------------------------------------------------------------


class Cache:
    """JSON results keyed by a hash of the canonical request."""

    def __init__(self, directory: str | None):
        self.dir = Path(directory) if directory else None

    @staticmethod
    def key(request: dict) -> str:
        blob = json.dumps(request, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, request: dict):
        if self.dir is None:
            return None
        path = self.dir / f"{self.key(request)}.json"
        if not path.exists():
            return None
        try:
            return json.loads(path.read_text())["result"]
        except (OSError, ValueError, KeyError):
            return None

    def put(self, request: dict, result) -> None:
        if self.dir is None:
            return
        self.dir.mkdir(parents=True, exist_ok=True)
        path = self.dir / f"{self.key(request)}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"request": request, "result": result}, sort_keys=True))
        tmp.replace(path)


def cached(cache: Cache, request: dict, compute, verify: bool = False):
    """Look ``request`` up; with ``verify`` recompute and insist on agreement."""
    hit = cache.get(request)
    if hit is not None and not verify:
        return hit
    fresh = compute()
    if hit is not None and hit != fresh:
        raise InternalError(f"cache entry {cache.key(request)[:12]} disagrees with recomputation")
    cache.put(request, fresh)
    return fresh


# -- output ------------------------------------------------------------------


def emit(doc: dict, fmt: str, text_lines: list[str], csv_rows: list[list] | None = None, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps({"schema": SCHEMA, **doc}, sort_keys=True, indent=1) + "\n")
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in csv_rows or []:
            w.writerow(row)
        out.write(buf.getvalue())
    else:
        out.write("\n".join(text_lines) + "\n")


# -- commands ----------------------------------------------------------------


def cmd_ring_info(args, cfg: SessionConfig) -> int:
    s = load_session(args.ring, cfg.prime)
    info = s.algebra.summary()
    lines = [
        f"ring        {info['name']}  over GF({info['field']})",
        f"length      {info['length']}",
        f"edim        {info['edim']}",
        f"m^j ladder  {info['m_power_lengths']}",
        f"socle       {info['socle_length']}",
        f"gorenstein  {info['gorenstein']}",
        f"tags        {', '.join(info['tags']) or '-'}",
    ]
    rows = [["key", "value"]] + [[k, json.dumps(v) if isinstance(v, (list, dict)) else v] for k, v in info.items()]
    emit({"command": "ring-info", "ring": info}, cfg.fmt, lines, rows)
    return EXIT_OK


def _resolve_request(s: Session, desc: dict, cfg: SessionConfig) -> dict:
    return {"what": "resolve", "spec": s.algebra.spec.canonical(), "M": desc, "steps": cfg.steps, "max_dim": cfg.max_dim}


def cmd_resolve(args, cfg: SessionConfig) -> int:
    s = load_session(args.ring, cfg.prime)
    M, desc = resolve_module(s, args.module)
    cache = Cache(cfg.cache_dir)

    def compute():
        res = minimal_free_resolution(M, cfg.steps, cfg.max_dim)
        return {"betti": res.betti, "reached": res.reached, "stop_reason": res.stop_reason}

    result = cached(cache, _resolve_request(s, desc, cfg), compute, args.cache_check)
    if args.verify:
        v = verify_resolution(minimal_free_resolution(M, cfg.steps, cfg.max_dim))
        if not v.ok:
            raise InternalError(f"resolution audit failed at degree {v.degree}: {v.failure}")
    cls = growth.classify(result["betti"], cfg.max_order)
    doc = {"command": "resolve", "ring": s.algebra.name, "module": args.module, "steps": cfg.steps, **result, "class": cls.to_dict()}
    lines = [f"betti({args.module}) over {s.algebra.name}: {' '.join(map(str, result['betti']))}"]
    if result["reached"] < cfg.steps:
        lines.append(f"truncated at degree {result['reached']}: {result['stop_reason']}")
    lines.append(f"class       {cls}")
    rows = [["i", "betti"]] + [[i, b] for i, b in enumerate(result["betti"])]
    emit(doc, cfg.fmt, lines, rows)
    return EXIT_OK


def cmd_ext(args, cfg: SessionConfig) -> int:
    s = load_session(args.ring, cfg.prime)
    M, dm = resolve_module(s, args.M)
    N, dn = resolve_module(s, args.N)
    cache = Cache(cfg.cache_dir)
    kind = "Tor" if args.tor else "Ext"
    base = {"spec": s.algebra.spec.canonical(), "M": dm, "N": dn, "steps": cfg.steps, "max_dim": cfg.max_dim}
    fn = tor_table if args.tor else ext_table
    table = cached(cache, {"what": kind, **base}, lambda: fn(M, N, cfg.steps, cfg.max_dim).to_dict(), args.cache_check)
    doc = {"command": "ext", "ring": s.algebra.name, "table": table}
    lines = [f"{kind}({args.M}, {args.N}) over {s.algebra.name}", f"  lengths {' '.join(map(str, table['lengths']))}"]
    lines.append(f"  gens    {' '.join(map(str, table['gens']))}")
    if table["reached"] < cfg.steps:
        lines.append(f"  truncated at degree {table['reached']}: {table['stop_reason']}")
    rows = [["i", f"{kind.lower()}_length", f"{kind.lower()}_gens"]]
    rows += [[i, l, g] for i, (l, g) in enumerate(zip(table["lengths"], table["gens"]))]
    code = EXIT_OK
    if args.dual_check:
        if args.tor:
            raise InputError("--dual-check compares Ext(M,N) with Tor(M,N^v); drop --tor")
        other = cached(
            cache, {"what": "Tor", **base, "N": {"dual": dn}}, lambda: tor_table(M, matlis_dual(N), cfg.steps, cfg.max_dim).to_dict(), args.cache_check
        )
        common = min(len(table["lengths"]), len(other["lengths"]))
        mismatches = [i for i in range(common) if table["lengths"][i] != other["lengths"][i]]
        doc["dual_check"] = {"tor_lengths": other["lengths"], "degrees": common, "mismatches": mismatches}
        lines.append(f"dual check: Tor({args.M}, {args.N}^v) over {common} degrees, {len(mismatches)} mismatches")
        if mismatches:
            code = EXIT_VIOLATION
    emit(doc, cfg.fmt, lines, rows)
    return code


def cmd_cx(args, cfg: SessionConfig) -> int:
    s = load_session(args.ring, cfg.prime)
    M, _ = resolve_module(s, args.M)
    if args.N is not None:
        N, _ = resolve_module(s, args.N)
        cls = growth.cx_pair(M, N, cfg.steps, cfg.max_dim, cfg.max_order)
        label = f"cx({args.M}, {args.N})"
    elif args.px:
        cls = growth.px_mod(M, cfg.steps, cfg.max_dim, cfg.max_order)
        label = f"px({args.M})"
    else:
        cls = growth.cx_mod(M, cfg.steps, cfg.max_dim, cfg.max_order)
        label = f"cx({args.M})"
    doc = {"command": "cx", "ring": s.algebra.name, "quantity": label, **cls.to_dict()}
    emit(doc, cfg.fmt, [f"{label} over {s.algebra.name}: {cls}"], [["quantity", "class"], [label, str(cls)]])
    return EXIT_OK


def _report_lines(report: dict) -> list[str]:
    lines = [f"suite {report['suite']}  seed {report['seed']}  instances {report['instances']}"]
    header = f"{'check':<14}{'Holds':>8}{'Violated':>10}{'Inconcl.':>10}{'N/A':>8}"
    lines += [header, "-" * len(header)]
    for check, row in report["counts"].items():
        lines.append(
            f"{check:<14}{row['Holds']:>8}{row['Violated']:>10}{row['Inconclusive']:>10}{row['NotApplicable']:>8}"
        )
    lines.append(f"violated: {report['violated']}")
    for v in report["verdicts"]:
        if v["verdict"] == "Violated":
            lines.append(f"  {v['check']} on {json.dumps(v['instance'], sort_keys=True)}")
    return lines


def _report_rows(report: dict) -> list[list]:
    rows = [["check", "Holds", "Violated", "Inconclusive", "NotApplicable"]]
    for check, row in report["counts"].items():
        rows.append([check, row["Holds"], row["Violated"], row["Inconclusive"], row["NotApplicable"]])
    return rows


def cmd_check(args, cfg: SessionConfig) -> int:
    hook = FAULTS[args.inject_fault] if args.inject_fault else None
    if args.suite == "paper":
        rings = dict(SUITE_RINGS)
        if args.max_dim is not None:
            rings = {k: min(v, args.max_dim) for k, v in rings.items()}
        report = run_full_suite(
            cfg.seed, cfg.steps, args.modules, rings, cfg.max_order, cfg.prime, args.workers, table_hook=hook
        )
    else:
        if not args.ring:
            raise InputError("--suite corpus needs a ring")
        s = load_session(args.ring, cfg.prime)
        mods = corpus(s.algebra, cfg.seed, args.modules)
        for name in sorted(s.modules):
            M, _ = resolve_module(s, name)
            mods.append(M)
        report = run_suite(s.algebra, mods, cfg.steps, cfg.seed, suite=f"corpus:{s.algebra.name}", max_dim=cfg.max_dim, max_order=cfg.max_order, table_hook=hook)
    doc = {"command": "check", **report.to_dict()}
    text = json.dumps({"schema": SCHEMA, **doc}, sort_keys=True, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    if cfg.fmt == "json":
        sys.stdout.write(text)
    else:
        emit(doc, cfg.fmt, _report_lines(doc), _report_rows(doc))
    return EXIT_VIOLATION if report.violated else EXIT_OK


def cmd_report(args, cfg: SessionConfig) -> int:
    try:
        doc = json.loads(Path(args.path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read report {args.path}: {exc}") from exc
    if doc.get("schema") != SCHEMA:
        raise InputError(f"{args.path}: unsupported schema {doc.get('schema')!r}")
    emit(doc, cfg.fmt, _report_lines(doc), _report_rows(doc))
    return EXIT_VIOLATION if doc.get("violated") else EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--steps", type=int, default=20)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--prime", type=int, default=la.DEFAULT_PRIME)
    common.add_argument("--format", dest="fmt", choices=["json", "csv", "text"], default="text")
    common.add_argument("--cache-dir", default=os.environ.get("MODCX_CACHE"))
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--cache-check", action="store_true", help="recompute and compare against cached entries")
    common.add_argument("--max-dim", type=int, default=None, help="largest linear system to set up")
    common.add_argument("--max-order", type=int, default=growth.DEFAULT_MAX_ORDER)

    p = argparse.ArgumentParser(prog="modcx", description="Betti, Ext and Tor complexity over artinian algebras")
    p.add_argument("--version", action="version", version=f"modcx {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("ring-info", parents=[common], help="ring invariants")
    q.add_argument("ring")
    q.set_defaults(func=cmd_ring_info)

    q = sub.add_parser("resolve", parents=[common], help="Betti numbers and their growth class")
    q.add_argument("ring")
    q.add_argument("module")
    q.add_argument("--verify", action="store_true", help="audit the resolution")
    q.set_defaults(func=cmd_resolve)

    q = sub.add_parser("ext", parents=[common], help="Ext (or Tor) table")
    q.add_argument("ring")
    q.add_argument("M")
    q.add_argument("N")
    q.add_argument("--tor", action="store_true")
    q.add_argument("--dual-check", action="store_true", help="compare with Tor(M, N^v)")
    q.set_defaults(func=cmd_ext)

    q = sub.add_parser("cx", parents=[common], help="complexity of a module or a pair")
    q.add_argument("ring")
    q.add_argument("M")
    q.add_argument("N", nargs="?")
    q.add_argument("--px", action="store_true", help="plexity instead of complexity")
    q.set_defaults(func=cmd_cx)

    q = sub.add_parser("check", parents=[common], help="run a check suite")
    q.add_argument("ring", nargs="?")
    q.add_argument("--suite", choices=["paper", "corpus"], default="paper")
    q.add_argument("--modules", type=int, default=SUITE_MODULES)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out", help="write the JSON report here")
    q.add_argument("--inject-fault", choices=sorted(FAULTS), help=argparse.SUPPRESS)
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("report", parents=[common], help="render a saved check report")
    q.add_argument("path")
    q.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = SessionConfig(
            prime=args.prime,
            steps=args.steps,
            max_order=args.max_order,
            max_dim=args.max_dim or DEFAULT_MAX_DIM,
            seed=args.seed,
            cache_dir=None if args.no_cache else args.cache_dir,
            fmt=args.fmt,
        )
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (growth.ClassMismatch, InternalError, ResolutionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
