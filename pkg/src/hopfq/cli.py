"""hopfq: verify structure files, certify the Fundamental Theorem, run the equivalence pipeline.

Exit codes: 0 every check passed, 1 some check failed, 2 the input could not be used.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable

from .comodule import anchor_identities, check_anchor, check_comodule_magma, check_strong_eqs
from .constructions import TableError
from .exactlin import DimensionError, FactorizationError, NotIdempotentError, rank
from .fileformat import InputError, StructureFile, load
from .functors import EquivalenceExample, equivalence_report
from .hopfmod import StrongHopfModule, check_strong_hopf_module, fundamental_theorem, module_identities
from .report import AxiomError, AxiomReport, Check
from .structures import (
    CLASS_NAMES,
    antipode_properties,
    associativity_witness,
    check_hopf_quasigroup,
    check_whq,
    corollary_class,
    lemma_projection_identities,
    projection_report,
)

SCHEMA_VERSION = "1.0"
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SUITES = ("whq", "hopf-quasigroup", "comodule-magma", "anchor", "module", "lemma22", "identities")
_CHECK_ERRORS = (AxiomError, TableError, FactorizationError, NotIdempotentError, ArithmeticError)


def _entry(kind: str, obj: str, suite: str, rep: AxiomReport, dims: dict, seconds: float, **extra) -> dict:
    out = {"kind": kind, "object": obj, "suite": suite, "pass": rep.passed, "dims": dims,
           "wall_time": round(seconds, 4), "checks": [c.to_dict() for c in rep.checks]}
    out.update(extra)
    return out


def _timed(fn: Callable[[], AxiomReport], suite: str) -> tuple[AxiomReport, float]:
    start = time.perf_counter()
    try:
        rep = fn()
    except AxiomError as exc:
        rep = exc.report
    except _CHECK_ERRORS + (ValueError, AssertionError) as exc:
        rep = AxiomReport(suite, [Check("suite aborted", False, 0, f"{type(exc).__name__}: {exc}")])
    return rep, time.perf_counter() - start


def _whq_jobs(doc: StructureFile, suite: str):
    for name, H in doc.whq.items():
        if suite == "whq":
            fn = lambda H=H: check_whq(H)
        elif suite == "hopf-quasigroup":
            fn = lambda H=H: check_hopf_quasigroup(H)
        elif suite == "lemma22":
            fn = lambda H=H: lemma_projection_identities(H)
        else:
            def fn(H=H):
                rep = projection_report(H)
                rep.extend(antipode_properties(H))
                return rep
        yield "whq", name, fn, {"H": H.dim}


def _right_module_dims(N) -> dict:
    try:
        return {"N": N.dim, "B^coH": N.over.dim}
    except _CHECK_ERRORS + (ValueError,):
        return {"N": N.dim}  # the anchor is broken and its own suite says so


def verify_jobs(doc: StructureFile, suite: str):
    """(kind, name, thunk, dims) for every object the suite applies to."""
    if suite in ("whq", "hopf-quasigroup", "lemma22", "identities"):
        yield from _whq_jobs(doc, suite)
    if suite == "comodule-magma":
        for name, B in doc.comodule_magma.items():
            yield "comodule_magma", name, lambda B=B: check_comodule_magma(B), {"B": B.dim, "H": B.H.dim}
    if suite in ("anchor", "identities"):
        for name, A in doc.anchor.items():
            fn = (lambda A=A: check_anchor(A.h, A.target)) if suite == "anchor" else (lambda A=A: anchor_identities(A))
            yield "anchor", name, fn, {"B": A.target.dim, "H": A.source.dim}
    if suite in ("module", "identities"):
        for name, M in doc.modules.items():
            fn = (lambda M=M: check_strong_hopf_module(M)) if suite == "module" else (lambda M=M: module_identities(M))
            yield "module", name, fn, {"M": M.dim, "B": M.B.dim, "H": M.H.dim}
    if suite == "module":
        for name, N in doc.right_modules.items():
            yield "right_module", name, N.report, _right_module_dims(N)


def _verify(doc: StructureFile, suites: list[str]) -> list[dict]:
    entries = []
    for suite in suites:
        for kind, name, fn, dims in verify_jobs(doc, suite):
            rep, secs = _timed(fn, suite)
            extra = {}
            if kind == "whq" and suite == "whq":
                H = doc.whq[name]
                extra["associativity_witness"] = associativity_witness(H.magma)
                extra["cocommutative"] = H.is_cocommutative
            entries.append(_entry(kind, name, suite, rep, dims, secs, **extra))
    return entries


def _prerequisites(doc: StructureFile, anchors: list[str]) -> list[dict]:
    """Structure suites every certification depends on; run before anything heavier."""
    entries = []
    seen_h, seen_b = set(), set()
    for an in anchors:
        A = doc.anchor[an]
        H, B = A.source, A.target
        if id(H) not in seen_h:
            seen_h.add(id(H))
            rep, secs = _timed(lambda: check_whq(H), "whq")
            entries.append(_entry("whq", H.name, "whq", rep, {"H": H.dim}, secs))
        if id(B) not in seen_b:
            seen_b.add(id(B))
            rep, secs = _timed(lambda: check_comodule_magma(B), "comodule-magma")
            entries.append(_entry("comodule_magma", B.name, "comodule-magma", rep, {"B": B.dim}, secs))
        rep, secs = _timed(lambda: check_anchor(A.h, B), "anchor")
        entries.append(_entry("anchor", an, "anchor", rep, {"B": B.dim, "H": H.dim}, secs))
        if rep.passed:
            # the theorems assume B^coH acts associatively on B from both sides
            rep, secs = _timed(lambda: check_strong_eqs(B, A.h, co=A.coinvariants), "strong")
            entries.append(_entry("anchor", an, "strong", rep, {"B": B.dim}, secs))
    return entries


def _modules_for(doc: StructureFile, an: str) -> list[StrongHopfModule]:
    mods = doc.modules_over(an)
    if not mods:
        M = StrongHopfModule.regular(doc.anchor[an], validate=False)
        M.name = f"{an}:regular"
        mods = [M]
    return mods


def _fundamental(doc: StructureFile) -> list[dict]:
    anchors = list(doc.anchor)
    if not anchors:
        raise InputError("file declares no anchor morphism")
    entries = _prerequisites(doc, anchors)
    if not all(e["pass"] for e in entries):
        return entries
    for an in anchors:
        for M in _modules_for(doc, an):
            start = time.perf_counter()
            try:
                fr = fundamental_theorem(M)
                rep, dims = fr.report, fr.dims
            except AxiomError as exc:
                rep, dims = exc.report, {"M": M.dim}
            except _CHECK_ERRORS as exc:
                rep = AxiomReport("fundamental", [Check("certification aborted", False, 0,
                                                        f"{type(exc).__name__}: {exc}")])
                dims = {"M": M.dim}
            entries.append(_entry("module", M.name, "fundamental", rep, dims, time.perf_counter() - start))
    return entries


def _equivalence(doc: StructureFile) -> list[dict]:
    anchors = list(doc.anchor)
    if not anchors:
        raise InputError("file declares no anchor morphism")
    entries = _prerequisites(doc, anchors)
    for an in anchors:
        for M in doc.modules_over(an):
            rep, secs = _timed(lambda: check_strong_hopf_module(M), "module")
            entries.append(_entry("module", M.name, "module", rep, {"M": M.dim}, secs))
        for N in doc.right_modules_over(an):
            rep, secs = _timed(N.report, "right-module")
            entries.append(_entry("right_module", N.name, "right-module", rep, {"N": N.dim}, secs))
    if not all(e["pass"] for e in entries):
        return entries
    for an in anchors:
        A = doc.anchor[an]
        ex = EquivalenceExample(an, A, _modules_for(doc, an), doc.right_modules_over(an))
        start = time.perf_counter()
        er = equivalence_report([ex])
        checks = []
        for r in er.records:
            for k, v in r.items():
                if isinstance(v, bool) and k != "pass" and k != "B=H":
                    checks.append(Check(f"{r['kind']} {r['object']}: {k}", v, None if v else 0))
            if "error" in r:
                checks.append(Check(f"{r['kind']} {r['object']}", False, 0, r["error"]))
        rep = AxiomReport("equivalence", checks)
        cls = corollary_class(A.source)
        dims = {"H": A.source.dim, "H_L": rank(A.source.pi_L), "B": A.target.dim,
                "B^coH": A.coinvariants.dim}
        entries.append(_entry("anchor", an, "equivalence", rep, dims, time.perf_counter() - start,
                              corollary=cls, corollary_name=CLASS_NAMES[cls], records=er.records))
    return entries


def _render(result: dict) -> str:
    lines = []
    for e in result["reports"]:
        dims = " ".join(f"{k}={v}" for k, v in e["dims"].items())
        head = f"== {e['suite']}: {e['kind']} {e['object']} ({dims}) {e['wall_time']:.2f}s"
        if "corollary" in e:
            head += f"  corollary ({e['corollary']}) {e['corollary_name']}"
        lines.append(head)
        if e.get("associativity_witness") is not None:
            lines.append(f"   nonassociative: witness basis triple index {e['associativity_witness']}")
        if "cocommutative" in e:
            lines.append(f"   cocommutative: {e['cocommutative']}")
        for c in e["checks"]:
            status = "PASS" if c["pass"] else "FAIL"
            line = f"   {status}  {c['label']}"
            if not c["pass"]:
                line += f"  witness={c['witness']}"
                if c.get("detail"):
                    line += f"  ({c['detail']})"
            lines.append(line)
    if result.get("error"):
        err = result["error"]
        where = f"line {err['line']}, column {err['column']}: " if err.get("line") else ""
        path = f"at {err['path']}: " if err.get("path") else ""
        lines.append(f"error: {where}{path}{err['message']}")
    total = sum(len(e["checks"]) for e in result["reports"])
    failed = sum(not c["pass"] for e in result["reports"] for c in e["checks"])
    verdict = {EXIT_PASS: "PASS", EXIT_FAIL: "FAIL", EXIT_INPUT: "INPUT ERROR"}[result["exit_code"]]
    lines.append(f"{verdict}: {total - failed}/{total} checks passed in {result['wall_time']:.2f}s")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hopfq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for cmd, help_ in (("verify", "run axiom suites on every object in the file"),
                       ("fundamental", "certify M ≅ M^coH⊗_{B^coH}B for every module"),
                       ("equivalence", "unit, counit and triangle identities of the induction/coinvariants pair")):
        sp = sub.add_parser(cmd, help=help_)
        sp.add_argument("file")
        if cmd == "verify":
            sp.add_argument("--suite", choices=SUITES, action="append",
                            help="suite to run (repeatable; default: all)")
        sp.add_argument("--json", action="store_true", help="machine-readable report")
        sp.add_argument("--max-dim", type=int, default=None, metavar="N",
                        help="refuse files declaring an object of dimension above N")
    return p


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    result: dict = {"schema_version": SCHEMA_VERSION, "command": args.command, "file": args.file,
                    "reports": [], "error": None}
    if args.command == "verify":
        result["suites"] = args.suite or list(SUITES)
    code = EXIT_PASS
    try:
        doc = load(args.file)
        if args.max_dim is not None and doc.max_dim() > args.max_dim:
            raise InputError(f"largest object has dimension {doc.max_dim()}, above --max-dim {args.max_dim}")
        if args.command == "verify":
            result["reports"] = _verify(doc, result["suites"])
        elif args.command == "fundamental":
            result["reports"] = _fundamental(doc)
        else:
            result["reports"] = _equivalence(doc)
        code = EXIT_PASS if all(e["pass"] for e in result["reports"]) else EXIT_FAIL
    except InputError as exc:
        code, result["error"] = EXIT_INPUT, {"kind": "input", **exc.to_dict()}
    except DimensionError as exc:
        code, result["error"] = EXIT_INPUT, {"kind": "dimension", "message": str(exc)}
    except AxiomError as exc:
        # a builder section rejected its parameters
        code = EXIT_FAIL
        result["reports"] = [_entry("builder", "", exc.report.suite, exc.report, {}, 0.0)]
    except TableError as exc:
        code = EXIT_FAIL
        result["error"] = {"kind": "table", "message": str(exc), "witness": list(exc.witness)}
    except _CHECK_ERRORS as exc:
        # a builder produced data on which a derived construction broke down
        code = EXIT_FAIL
        rep = AxiomReport("builder", [Check("construction failed", False, 0, f"{type(exc).__name__}: {exc}")])
        result["reports"] = [_entry("builder", "", "builder", rep, {}, 0.0)]
    result["pass"] = code == EXIT_PASS
    result["exit_code"] = code
    result["wall_time"] = round(time.perf_counter() - start, 4)
    return code, result


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, result = run(argv)
    if "--json" in argv:
        print(json.dumps(result, indent=2, ensure_ascii=False))
    else:
        print(_render(result))
    return code


if __name__ == "__main__":
    sys.exit(main())
