"""Command-line front end: run the case studies and write the reports."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .berkeley import BudgetExceeded, verify_berkeley
from .hay.claims import verify_hay_5bin, verify_hay_claims
from .report import FAIL, FALSIFIED, CaseResult, build_report, dump_report, render_decimal
from .smoking import verify_smoking_binom, verify_smoking_hyper

CASES = ("smoking-binom", "smoking-hyper", "hay", "hay-5bin", "berkeley")
EXIT_OK, EXIT_CLAIM, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="argulab", description="Check the quantitative claims of the case studies.")
    p.add_argument("case", choices=CASES + ("all",))
    p.add_argument("--grid", type=int, default=50, help="lattice resolution for the binomial smoking case")
    p.add_argument("--alpha-step", type=_fraction, default=Fraction(1, 1000), help="alpha grid step, e.g. 1/1000")
    p.add_argument("--seed", type=int, default=0, help="seed for the PCG64 generator")
    p.add_argument("--samples", type=int, default=1000, help="scenarios in the hypergeometric search")
    p.add_argument("--notlc-cap", type=int, default=20, help="non-LC population cap as a multiple of the LC one")
    p.add_argument("--mc-samples", type=int, default=10**6, help="Monte-Carlo samples for the 5-bin volume check")
    p.add_argument("--max-nodes", type=int, default=200_000, help="branch-and-bound node budget")
    p.add_argument("--max-pivots", type=int, default=100_000, help="simplex pivot budget per node")
    p.add_argument("--out", type=Path, default=Path("argulab-out"), help="output directory")
    p.add_argument("--format", choices=("json", "csv"), default="json",
                   help="csv also writes report.csv next to report.json")
    p.add_argument("--strict-berkeley", action="store_true", help="add the exact rate equalities as well")
    p.add_argument("-q", "--quiet", action="store_true")
    return p


def _validate(a: argparse.Namespace) -> None:
    if a.grid < 2:
        raise UsageError("--grid must be at least 2")
    if not 0 < a.alpha_step <= Fraction(1, 10):
        raise UsageError("--alpha-step must lie in (0, 1/10]")
    if not -(2**63) <= a.seed < 2**64:
        raise UsageError("--seed must fit in 64 bits")
    for name in ("samples", "mc_samples", "max_nodes", "max_pivots"):
        if getattr(a, name) <= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be positive")
    if a.notlc_cap < 5:
        raise UsageError("--notlc-cap must be at least 5")


def run_case(case: str, a: argparse.Namespace) -> CaseResult:
    # negative seeds are folded onto the unsigned 64-bit range
    seed = a.seed % 2**64
    if case == "smoking-binom":
        return verify_smoking_binom(grid_n=a.grid)
    if case == "smoking-hyper":
        return verify_smoking_hyper(samples=a.samples, seed=seed, notlc_cap=a.notlc_cap)
    if case == "hay":
        return verify_hay_claims(grid_step=a.alpha_step)
    if case == "hay-5bin":
        return verify_hay_5bin(mc_samples=a.mc_samples, seed=seed)
    if case == "berkeley":
        return verify_berkeley(strict=a.strict_berkeley, max_nodes=a.max_nodes, max_pivots=a.max_pivots)
    raise UsageError(f"unknown case {case!r}")


def parameters(a: argparse.Namespace) -> dict:
    return {
        "case": a.case, "grid": a.grid, "alpha_step": a.alpha_step, "seed": a.seed, "samples": a.samples,
        "notlc_cap": a.notlc_cap, "mc_samples": a.mc_samples, "max_nodes": a.max_nodes,
        "max_pivots": a.max_pivots, "format": a.format, "strict_berkeley": a.strict_berkeley,
    }


def report_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["claim_id", "status", "exact_value_as_fraction", "decimal_rendering", "paper_expectation"])
    for c in report["claims"]:
        w.writerow([c["claim_id"], c["status"], c["exact_value_as_fraction"] or "", c["decimal_rendering"] or "",
                    c["paper_expectation"]])
    return buf.getvalue()


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        _validate(a)
        a.out.mkdir(parents=True, exist_ok=True)
        probe = a.out / ".argulab-write-test"
        probe.write_text("")
        probe.unlink()
    except UsageError as e:
        print(f"argulab: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"argulab: cannot write to {a.out}: {e}", file=sys.stderr)
        return EXIT_USAGE

    cases = CASES if a.case == "all" else (a.case,)
    claims, data, artifacts, timing = [], {}, {}, {}
    for case in cases:
        t0 = time.perf_counter()
        try:
            res = run_case(case, a)
        except (BudgetExceeded, RuntimeError) as e:
            print(f"argulab: {case}: {e}", file=sys.stderr)
            return EXIT_USAGE
        timing[case] = round(time.perf_counter() - t0, 3)
        claims += res.claims
        data[case] = res.data
        artifacts.update(res.artifacts)

    report = build_report(a.case, claims, parameters(a), data)
    text = dump_report(report)
    (a.out / "report.json").write_text(text)
    if a.format == "csv":
        (a.out / "report.csv").write_text(report_csv(report))
    # wall-clock numbers live apart from the report so reruns stay byte-identical
    (a.out / "timing.json").write_text(json.dumps({"seconds": timing}, indent=2, sort_keys=True) + "\n")
    for name, body in sorted(artifacts.items()):
        (a.out / name).write_text(body)

    if not a.quiet:
        for c in claims:
            val = "" if c.value is None else f" {render_decimal(c.value)}"
            print(f"{c.status.upper():9} {c.claim_id}{val}")
    bad = [c for c in claims if c.status in (FAIL, FALSIFIED)]
    return EXIT_CLAIM if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
