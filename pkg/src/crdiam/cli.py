"""Command-line driver.

A job is a JSON document naming the field, the ring, one presented module,
a window, and the tasks to run.  Subcommands mirror tasks one to one
(`crdiam resolve`, `crdiam diameter`, ...); `crdiam run` executes the task
list from the job file itself.  Reports are emitted as canonical JSON
(sorted keys, two-space indent) so identical jobs produce byte-identical
output; `--json` switches the human-readable commands to that form too.

Exit codes: 0 success, 2 parse error, 3 ring rejected, 4 window too
narrow, 5 internal invariant breach.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from dataclasses import dataclass, field as dc_field

from . import __version__
from .cioper import eisenbud_operators
from .complexes import format_complex, solve_homotopy
from .errors import (
    CrdiamError,
    InternalInvariantError,
    OutOfWindow,
    ParseError,
    RingRejected,
    TooNarrow,
)
from .pipeline import Workspace, verify_suite
from .polyring import PolyRing
from .ffield import Field

TASKS = ("show", "resolve", "cioperators", "crdeg", "cocrdeg", "diameter", "verify")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RING = 3
EXIT_WINDOW = 4
EXIT_INTERNAL = 5


@dataclass
class JobSpec:
    p: int
    e: int
    variables: list[str]
    defining: list[str]
    presentation: list[list[str]]
    window: tuple[int, int]
    tasks: list[str]
    max_period: int = 4
    audit: bool = False
    extension_escalation: bool = True

    @property
    def nvars(self) -> int:
        return len(self.variables)


def load_jobspec(text: str) -> JobSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"job file is not valid JSON: {exc}") from exc
    try:
        fld = doc.get("field", {})
        ring = doc["ring"]
        module = doc.get("module", {})
        window = doc["window"]
        opts = doc.get("options", {})
        spec = JobSpec(
            p=int(fld.get("p", 2)),
            e=int(fld.get("e", 1)),
            variables=list(ring["vars"]),
            defining=list(ring["f"]),
            presentation=[list(row) for row in module.get("presentation", [])],
            window=(int(window["lo"]), int(window["hi"])),
            tasks=list(doc.get("tasks", ["diameter"])),
            max_period=int(opts.get("max_period", 4)),
            audit=bool(opts.get("audit", False)),
            extension_escalation=bool(opts.get("extension_escalation", True)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed job specification: {exc}") from exc
    for t in spec.tasks:
        if t not in TASKS:
            raise ParseError(f"unknown task {t!r}")
    if spec.window[1] < spec.window[0]:
        raise ParseError("window hi must be >= lo")
    rows = spec.presentation
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError("presentation matrix must be rectangular")
    return spec


def build_workspace(spec: JobSpec) -> Workspace:
    field = Field(spec.p, 1)
    ctx = PolyRing(field, spec.nvars, spec.variables)
    defining = [ctx.parse(s) for s in spec.defining]
    relations = [[ctx.parse(s) for s in row] for row in spec.presentation]
    return Workspace(
        spec.p,
        spec.nvars,
        defining,
        relations,
        spec.window,
        names=spec.variables,
        max_period=spec.max_period,
        label="module",
    )


def _ring_hash(spec: JobSpec) -> str:
    blob = json.dumps(
        {
            "p": spec.p,
            "vars": spec.variables,
            "f": spec.defining,
            "presentation": spec.presentation,
        },
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def run(spec: JobSpec) -> dict:
    """Execute the requested tasks in dependency order."""
    ws = build_workspace(spec)
    e_max = 2 if spec.extension_escalation else 1
    built = ws.built(spec.e)
    results: dict = {}
    report = {
        "provenance": {
            "tool_version": __version__,
            "field": {"p": spec.p, "e": spec.e},
            "ring": repr(built.ring),
            "ring_hash": _ring_hash(spec),
            "window": list(spec.window),
        },
        "results": results,
    }
    cx = built.bundle.complex

    if "show" in spec.tasks:
        results["show"] = format_complex(cx)
    if "resolve" in spec.tasks:
        results["resolve"] = {
            "betti": [[n, cx.rank(n)] for n in cx.degrees()],
            "comparison_degree": built.bundle.comparison_degree,
            "free_rank_split": built.bundle.free_rank_split,
            "minimal": cx.is_minimal(),
            "module_dim_k": built.presentation.dim_k(),
        }
    if "cioperators" in spec.tasks:
        fam = built.analysis.family
        homotopy_ok = True
        for i in range(fam.count):
            for j in range(i + 1, fam.count):
                ti, tj = fam.operator(i), fam.operator(j)
                if solve_homotopy(ti.compose(tj), tj.compose(ti)) is None:
                    homotopy_ok = False
        entry = {
            "count": fam.count,
            "strict_commutation": True,  # asserted at construction
            "division_identity": True,  # asserted at construction
            "homotopy_commutation": homotopy_ok,
        }
        if spec.audit:
            entry["audit"] = _audit_dump(built)
        results["cioperators"] = entry
    degree_reports = None
    if {"crdeg", "cocrdeg", "diameter"} & set(spec.tasks):
        degree_reports = ws.degree_reports(e_max=max(e_max, spec.e))
    if "crdeg" in spec.tasks:
        results["crdeg"] = degree_reports[0].to_dict()
    if "cocrdeg" in spec.tasks:
        results["cocrdeg"] = degree_reports[1].to_dict()
    if "diameter" in spec.tasks:
        results["diameter"] = degree_reports[2].to_dict()
    if "verify" in spec.tasks:
        suite = verify_suite([ws], e=spec.e)
        results["verify"] = suite.to_dict()
    return report


def _audit_dump(built) -> list:
    """Per-degree lifted differentials and cofactor matrices, as text."""
    ctx = built.ring.ctx
    fam = built.analysis.family
    cx = built.bundle.complex
    out = []
    for n in range(cx.lo + 2, cx.hi + 1):
        entry = {
            "degree": n,
            "lift_upper": [[ctx.format(p) for p in row] for row in cx.diff(n).lift()],
            "lift_lower": [[ctx.format(p) for p in row] for row in cx.diff(n - 1).lift()],
        }
        for j in range(fam.count):
            entry[f"cofactor_{j}"] = [
                [ctx.format(p) for p in row] for row in fam.lifts[j][n]
            ]
        out.append(entry)
    return out


def serialize(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def deserialize(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"report is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "provenance" not in doc or "results" not in doc:
        raise ParseError("report lacks provenance/results")
    return doc


def _read_job(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read job file: {exc}") from exc


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="crdiam",
        description=(
            "critical and cocritical degrees and critical diameter of "
            "totally acyclic complexes over Artinian complete intersections"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in TASKS + ("run",):
        p = sub.add_parser(name)
        p.add_argument("job", help="job file path, or - for stdin")
        p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"))
        p.add_argument("--ext-degree", type=int, default=None)
        p.add_argument("--max-period", type=int, default=None)
        p.add_argument("--audit", action="store_true")
        p.add_argument("--json", action="store_true", dest="as_json")
    args = parser.parse_args(argv)

    try:
        spec = load_jobspec(_read_job(args.job))
        if args.window:
            spec.window = (args.window[0], args.window[1])
        if args.ext_degree is not None:
            spec.e = args.ext_degree
        if args.max_period is not None:
            spec.max_period = args.max_period
        if args.audit:
            spec.audit = True
        if args.command != "run":
            spec.tasks = [args.command]
        report = run(spec)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except RingRejected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RING
    except (TooNarrow, OutOfWindow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CrdiamError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL

    if args.command == "show" and not args.as_json:
        print(report["results"]["show"])
    elif args.command == "verify" and not args.as_json:
        suite = report["results"]["verify"]
        for check in suite["checks"]:
            mark = "PASS" if check["passed"] else "FAIL"
            print(f"[{mark}] {check['name']} ({check['subject']})")
        print("all passed" if suite["passed"] else "FAILURES present")
    else:
        sys.stdout.write(serialize(report))
    if args.command == "verify" and not report["results"]["verify"]["passed"]:
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
