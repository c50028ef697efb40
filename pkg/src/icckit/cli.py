"""Command-line front end.

``icckit check FILE`` parses an extension description, runs the
analyzer, optionally cross-checks the verdict against the brute-force
oracle, and prints a text or JSON report.

Exit codes: 0 = analysis completed (whatever the verdict), 1 = the
``--assert`` expectation failed, 2 = parse or validation error,
3 = unsupported construction.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .analyzer import (
    AnalyzerLimits,
    KernelTorsionWitness,
    KernelVectorWitness,
    QuotientLiftWitness,
    Report,
    TrivialGroupWitness,
    analyze,
)
from .dsl import Diagnostic, parse_extension
from .extension import ExtensionSpec, UnsupportedExtensionError
from .oracle import crosscheck
from .words import render_word


def witness_json(witness, spec: ExtensionSpec):
    if witness is None:
        return None
    if isinstance(witness, KernelTorsionWitness):
        return {
            "type": "kernel_torsion",
            "description": witness.description,
            "element_order": witness.order,
            "class_bound": witness.class_bound,
        }
    if isinstance(witness, KernelVectorWitness):
        return {
            "type": "kernel_vector",
            "vector": list(witness.vector),
            "orbit": [list(v) for v in witness.orbit],
            "orbit_size": witness.orbit_size,
        }
    if isinstance(witness, QuotientLiftWitness):
        evidence = {"kind": witness.evidence_kind}
        if witness.action_order is not None:
            evidence["order"] = witness.action_order
        if witness.conjugator is not None:
            names = spec.kernel.names if hasattr(spec.kernel, "names") else ()
            evidence["conjugator"] = render_word(witness.conjugator, names)
        return {"type": "quotient_lift", "element": witness.rendered, "evidence": evidence}
    if isinstance(witness, TrivialGroupWitness):
        return {"type": "trivial_group"}
    raise TypeError(f"unknown witness {witness!r}")


def report_json(report: Report, spec: ExtensionSpec, oracle_result=None):
    return {
        "verdict": report.verdict,
        "theorem_path": report.theorem_path,
        "witness": witness_json(report.witness, spec),
        "obstruction": report.obstruction,
        "condition_results": [
            {"name": c.name, "status": c.status, "detail": c.detail}
            for c in report.conditions
        ],
        "tool": {"name": "icckit", "version": __version__},
        "oracle_crosscheck": oracle_result,
    }


def report_text(report: Report, spec: ExtensionSpec, oracle_result=None) -> str:
    lines = [f"verdict: {report.verdict}", f"path: {report.theorem_path}"]
    w = witness_json(report.witness, spec)
    if w is not None:
        lines.append("witness: " + json.dumps(w, sort_keys=True))
    if report.obstruction:
        lines.append(f"obstruction: {report.obstruction}")
    lines.append("conditions:")
    for c in report.conditions:
        lines.append(f"  - {c.name}: {c.status} ({c.detail})")
    if oracle_result is not None:
        lines.append(
            "oracle: " + ("consistent" if oracle_result["consistent"] else "INCONSISTENT")
        )
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="icckit")
    sub = parser.add_subparsers(dest="command", required=True)
    check = sub.add_parser("check", help="analyze an extension description file")
    check.add_argument("file")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--oracle-radius", type=int, default=0, metavar="R",
                       help="conjugacy-ball cross-check radius; 0 disables")
    check.add_argument("--oracle-cap", type=int, default=5000, metavar="N",
                       help="conjugacy-ball set-size cap")
    check.add_argument("--orbit-cap", type=int, default=10_000, metavar="N",
                       help="orbit enumeration cap")
    check.add_argument("--out-order-cap", type=int, default=16, metavar="N",
                       help="bound on the searched outer-automorphism order")
    check.add_argument("--relation-bound", type=int, default=8, metavar="B",
                       help="exponent bound for abelian relation search")
    check.add_argument("--emit-growth", metavar="PATH", default=None,
                       help="write the cross-check growth curve as CSV")
    check.add_argument("--assert", dest="expect", choices=("icc", "not_icc"), default=None,
                       help="exit 1 unless the verdict matches")
    return parser


def run(argv) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = open(args.file, encoding="utf-8").read()
    except OSError as e:
        print(f"{args.file}: {e.strerror or e}", file=sys.stderr)
        return 2

    try:
        spec = parse_extension(text)
    except Diagnostic as d:
        print(f"{args.file}:{d.line}:{d.col}: [{d.code}] {d.message}", file=sys.stderr)
        return 2
    except UnsupportedExtensionError as e:
        print(f"{args.file}: unsupported construction: {e}", file=sys.stderr)
        return 3

    limits = AnalyzerLimits(
        out_order_cap=args.out_order_cap,
        relation_bound=args.relation_bound,
    )
    try:
        report = analyze(spec, limits)
    except UnsupportedExtensionError as e:
        print(f"{args.file}: unsupported construction: {e}", file=sys.stderr)
        return 3

    oracle_result = None
    if args.oracle_radius > 0:
        try:
            oracle_result, curve = crosscheck(
                spec, report,
                radius=args.oracle_radius,
                cap=args.oracle_cap,
                orbit_cap=args.orbit_cap,
            )
        except UnsupportedExtensionError as e:
            print(f"{args.file}: unsupported construction: {e}", file=sys.stderr)
            return 3
        if args.emit_growth:
            with open(args.emit_growth, "w", encoding="utf-8") as f:
                f.write("\n".join(curve.csv_rows()) + "\n")
    elif args.emit_growth:
        print("--emit-growth requires --oracle-radius > 0", file=sys.stderr)
        return 2

    if args.format == "json":
        sys.stdout.write(json.dumps(report_json(report, spec, oracle_result), indent=2) + "\n")
    else:
        sys.stdout.write(report_text(report, spec, oracle_result))

    if args.expect is not None and report.verdict != args.expect:
        return 1
    return 0


def main(argv=None) -> int:
    code = run(sys.argv[1:] if argv is None else argv)
    if argv is None:
        sys.exit(code)
    return code
