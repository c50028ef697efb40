"""End-to-end verdicts with oracle cross-checks on the shipped examples.

Run with:  python3 demos/03_verdicts.py
"""

from pathlib import Path

from icckit import analyze, crosscheck, parse_extension
from icckit.cli import report_json

EXAMPLES = Path(__file__).resolve().parent.parent / "extensions"

for name in ("klein.ext", "sol.ext", "swap.ext", "f2xz.ext"):
    text = (EXAMPLES / name).read_text()
    spec = parse_extension(text)
    report = analyze(spec)
    summary, curve = crosscheck(spec, report, radius=5, cap=4000)
    print(f"--- {name} ---")
    print(text.strip())
    print(f"verdict: {report.verdict}  via {report.theorem_path}")
    witness = report_json(report, spec)["witness"]
    if witness is not None:
        print(f"witness: {witness}")
    print(f"oracle: mode={summary['mode']}, consistent={summary['consistent']}")
    print(f"growth curve of the checked element: {curve.sizes}"
          + (f" (closed at radius {curve.closed_at})" if curve.is_closed else " (still growing)"))
    print()
