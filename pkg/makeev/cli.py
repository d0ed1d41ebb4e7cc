"""
Command-line interface.

    makeev certify --theorem thm3.1 --k 3 --q 0 --t 1
    makeev certify --spec spec.json
    makeev search --m 1 --l 3 --k 4 --policy paper
    makeev bounds --m 3 --l 3 --k 4
    makeev table [--max-q 3] [--csv FILE] [--xlsx FILE]
    makeev verify --arrangement arr.json --masses masses.json --l 2
    makeev solve --masses masses.json --k 2 --l 2 --seed 42 --out arr.json

Every command accepts --json. Reports go to stdout; logs go to stderr.

Exit codes: 0 success (certified / found / passed), 1 negative outcome,
2 usage, parse or domain error, 3 dimension mismatch, 4 resource limit.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import TypeAdapter

from makeev import __version__
from makeev.config import get_settings
from makeev.errors import DomainError, ResourceLimitError, SpecParseError
from makeev.models.schemas import CertificateResult, CertificateStatus, SolveReport, TableRow
from makeev.services import bounds, certify, equipart, solver
from makeev.services.export import get_export_service
from makeev.services.presets import FAMILIES, make_preset
from makeev.services.reproduction import build_table
from makeev.validation.validator import get_validator

logger = logging.getLogger("makeev.cli")

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_DIMENSION_MISMATCH = 3
EXIT_RESOURCE = 4

_STATUS_EXIT = {
    CertificateStatus.CERTIFIED: EXIT_OK,
    CertificateStatus.NOT_CERTIFIED: EXIT_NEGATIVE,
    CertificateStatus.DIMENSION_MISMATCH: EXIT_DIMENSION_MISMATCH,
}


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ---------------------------------------------------------------------------
# certify
# ---------------------------------------------------------------------------

def _render_certificate(result: CertificateResult, label: str) -> str:
    lines = [f"{label}: {result.status.value} at d={result.d}"]
    lines.append(f"  k={result.k}, dim U={result.dim_U}, k*d={result.target_dimension}")
    if result.status == CertificateStatus.DIMENSION_MISMATCH:
        lines.append("  full-monomial test not run: dim U != k*d")
    else:
        target = "*".join(f"t{i}^{result.d}" for i in range(1, result.k + 1))
        verdict = "equals" if result.certified else "differs from"
        lines.append(f"  p_U {verdict} {target} (support {result.residual_support}, max degrees {result.max_degrees})")
    return "\n".join(lines)


def cmd_certify(args: argparse.Namespace) -> int:
    if args.spec:
        spec_file = get_validator().load_spec(args.spec)
        result = certify.certify_full_monomial(spec_file.to_spec(), spec_file.d)
        label = Path(args.spec).name
    else:
        preset = make_preset(args.theorem, k=args.k, q=args.q, t=args.t, d=args.d)
        result = certify.certify_preset(preset)
        label = preset.label()

    _emit(result.model_dump_json(indent=2) if args.json else _render_certificate(result, label))
    return _STATUS_EXIT[result.status]


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------

def cmd_search(args: argparse.Namespace) -> int:
    report = certify.minimal_certified_d(args.m, args.l, args.k, args.policy, args.dmax)
    if args.json:
        _emit(report.model_dump_json(indent=2))
    elif report.found:
        _emit(f"Found d={report.d} for m={args.m}, l={args.l}, k={args.k} (policy {args.policy})")
        _emit(report.spec.model_dump_json(indent=2))
    else:
        _emit(f"No certificate for d in {report.d_min}..{report.d_max} (policy {args.policy})")
        for c in report.candidates:
            _emit(f"  d={c.d}: {c.status}" + (f" ({c.reason})" if c.reason else ""))
    return EXIT_OK if report.found else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def cmd_bounds(args: argparse.Namespace) -> int:
    report = bounds.bound_report(args.m, args.l, args.k, args.ortho)
    if args.json:
        _emit(report.model_dump_json(indent=2))
    else:
        _emit(bounds.render_bracket(report))
        source = report.upper_source or "none"
        _emit(f"  m={report.m}, l={report.l}, k={report.k}; upper bound source: {source}; "
              f"constraint count suggests d >= {report.expected_lower}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

def _render_table(rows: List[TableRow]) -> str:
    header = f"{'family':<9} {'params':<22} {'m':>3} {'l':>2} {'k':>2} {'orth':>4} {'lower':>5} {'upper':>5} {'exp d':>5} {'d':>4}  status"
    lines = [header, "-" * len(header)]
    for r in rows:
        lower = "" if r.lower is None else str(r.lower)
        upper = "" if r.upper is None else str(r.upper)
        mark = "ok" if r.ok else "FAIL"
        lines.append(
            f"{r.family:<9} {r.params:<22} {r.m:>3} {r.l:>2} {r.k:>2} {'yes' if r.orthogonal else 'no':>4} "
            f"{lower:>5} {upper:>5} {r.expected_d:>5} {r.d:>4}  {r.status} [{mark}]"
        )
    passed = sum(r.ok for r in rows)
    lines.append(f"{passed}/{len(rows)} rows ok")
    return "\n".join(lines)


def cmd_table(args: argparse.Namespace) -> int:
    rows = build_table(max_q=args.max_q, families=args.family)
    exporter = get_export_service()
    if args.csv:
        Path(args.csv).write_bytes(exporter.export_to_csv(rows))
        logger.info(f"Wrote {args.csv}")
    if args.xlsx:
        Path(args.xlsx).write_bytes(exporter.export_to_excel(rows))
        logger.info(f"Wrote {args.xlsx}")

    if args.json:
        _emit(TypeAdapter(List[TableRow]).dump_json(rows, indent=2).decode("utf-8"))
    else:
        _emit(_render_table(rows))
    return EXIT_OK if rows and all(r.ok for r in rows) else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# verify / solve
# ---------------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    validator = get_validator()
    arrangement, _ = validator.load_arrangement(args.arrangement)
    masses, _ = validator.load_masses(args.masses)
    report = equipart.check_equipartition(arrangement, masses, args.l, rel_tol=args.tol, orthogonal=args.ortho)

    if args.json:
        _emit(report.model_dump_json(indent=2))
    else:
        for n, mass in enumerate(report.masses, start=1):
            verdict = "pass" if mass.passed else "FAIL"
            _emit(f"mass {n}: max |c_h| / (total/2^k) = {mass.max_relative_residual:.3e} [{verdict}]")
        for v in report.orthogonality or []:
            verdict = "pass" if v.passed else "FAIL"
            _emit(f"<a_{v.r}, a_{v.s}> = {v.inner_product:.3e} [{verdict}]")
        _emit(f"{args.l}-of-{report.k} equipartition: {'pass' if report.passed else 'FAIL'}")
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_solve(args: argparse.Namespace) -> int:
    validator = get_validator()
    masses, _ = validator.load_masses(args.masses)
    result = solver.solve_arrangement(
        masses, args.k, args.l, orthogonal=args.ortho, restarts=args.restarts, seed=args.seed,
    )
    arrangement_file = validator.from_arrangement(result.arrangement)
    if args.out:
        Path(args.out).write_text(arrangement_file.model_dump_json(indent=2) + "\n", encoding="utf-8")
        logger.info(f"Wrote {args.out}")

    passed = result.residual <= args.tol
    report = SolveReport(
        k=args.k,
        l=args.l,
        d=masses[0].d,
        orthogonal=args.ortho,
        seed=args.seed,
        restarts=len(result.restart_residuals),
        best_restart=result.best_restart,
        residual=result.residual,
        tol=args.tol,
        passed=passed,
        arrangement=arrangement_file,
    )
    if args.json:
        _emit(report.model_dump_json(indent=2))
    else:
        _emit(f"residual {result.residual:.4e} (tol {args.tol:g}, best restart {result.best_restart}) "
              f"[{'pass' if passed else 'FAIL'}]")
    return EXIT_OK if passed else EXIT_NEGATIVE


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="makeev", description="Makeev equipartition certification toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default=None, help="logging level (default from MAKEEV_LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.set_defaults(handler=handler)
        return p

    p = add("certify", cmd_certify, "run the full-monomial certificate")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="spec JSON file")
    source.add_argument("--theorem", choices=sorted(FAMILIES), help="theorem preset")
    for name in ("k", "q", "t", "d"):
        p.add_argument(f"--{name}", type=int)

    p = add("search", cmd_search, "smallest certifiable d under a padding policy")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--policy", choices=["paper", "bisection-pad", "ortho-then-pad"], default="paper")
    p.add_argument("--dmax", type=int)

    p = add("bounds", cmd_bounds, "lower and upper bounds")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ortho", action="store_true")

    p = add("table", cmd_table, "reproduction table with live certificates")
    p.add_argument("--max-q", type=int, default=3)
    p.add_argument("--family", action="append", choices=sorted(FAMILIES), help="restrict to a family (repeatable)")
    p.add_argument("--csv", help="also write the table as CSV")
    p.add_argument("--xlsx", help="also write the table as Excel")

    p = add("verify", cmd_verify, "Fourier equipartition check")
    p.add_argument("--arrangement", required=True)
    p.add_argument("--masses", required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--ortho", action="store_true")
    p.add_argument("--tol", type=float, default=1e-9)

    p = add("solve", cmd_solve, "search for an equipartitioning arrangement")
    p.add_argument("--masses", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    p.add_argument("--ortho", action="store_true")
    p.add_argument("--restarts", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=0.01)
    p.add_argument("--out", help="write the arrangement JSON here")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=(args.log_level or get_settings().log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.handler(args)
    except (SpecParseError, DomainError) as e:
        sys.stderr.write(f"error: {e.message}\n")
        for issue in e.details.get("issues", []):
            where = f"line {issue['line']}, column {issue['column']}" if issue.get("line") else issue["field"]
            sys.stderr.write(f"  {where}: {issue['message']}\n")
        return EXIT_USAGE
    except ResourceLimitError as e:
        sys.stderr.write(f"resource limit: {e.message} (raise MAKEEV_CELL_LIMIT to allow it)\n")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
