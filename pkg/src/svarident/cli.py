"""Command-line interface.

Commands: check (verdict over sampled draws or an explicit point), rotate
(construct a restriction-satisfying rotation), demo (walk through the
built-in counting-is-not-enough fixture), explain (name the redundant
cells).  Exit codes: 0 identified or success, 1 usage or I/O problem,
2 not identified / infeasible / nothing to explain, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import fixtures
from .errors import (
    InfeasibleRestrictionsError,
    SpecError,
    SvarIdentError,
    UnrestrictedPointError,
)
from .identify import (
    IdentificationReport,
    OnRedundancy,
    Theorem6Result,
    Verdict,
    check_at_point,
    check_exact_identification,
    construct_rotation,
    count_condition,
    q_tilde,
    restricted_point,
    sign_normalize,
    theorem6_check,
)
from .linalg import DEFAULT_TOL, RankTolerance, svd_rank_null
from .model import ModelDims, ReducedFormParams, StructuralParams, baseline_structural
from .restrictions import (
    RestrictionSpec,
    assemble_f,
    compile_spec,
    parse_spec,
    restriction_residual,
)
from .report import (
    check_report_dict,
    check_report_text,
    format_matrix,
    format_vector,
    render_json,
    rotation_report_dict,
    rotation_report_text,
    verdict_exit_code,
)
from .sampler import SamplerConfig, draw_reduced_form


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="svar-ident",
        description="Exact-identification checks for zero-restricted structural VARs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("check", "verdict on exact identification over sampled reduced-form draws"),
        ("rotate", "construct a rotation satisfying the restrictions at one point"),
        ("demo", "walk through the built-in counterexample fixture"),
        ("explain", "name restriction cells implied by the others"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--spec", help="path to a restriction document")
        p.add_argument("--draws", type=int, default=5, help="number of sampled draws (default 5)")
        p.add_argument("--seed", type=int, default=0, help="base seed for sampled draws (default 0)")
        p.add_argument("--sigma", help="plain-text Sigma matrix file (one row per line)")
        p.add_argument("--b", help="plain-text B matrix file (one row per line)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--tol", type=float, default=None,
                       help="absolute singular-value cutoff for rank decisions")
    return parser


def _fail(message: str) -> int:
    print(f"svar-ident: error: {message}", file=sys.stderr)
    return 1


def _tolerance(args) -> RankTolerance:
    if args.tol is None:
        return DEFAULT_TOL
    return RankTolerance(policy="absolute", value=args.tol)


def _load_spec(args) -> RestrictionSpec:
    if not args.spec:
        raise SpecError("--spec is required for this command")
    text = Path(args.spec).read_text(encoding="utf-8")
    return parse_spec(text)


def _load_matrix(path: str, shape: tuple[int, int], name: str) -> np.ndarray:
    arr = np.loadtxt(path, ndmin=2, dtype=float)
    if arr.shape != shape:
        raise ValueError(f"{name} in {path} must be {shape[0]}x{shape[1]}, got {arr.shape}")
    return arr


def _explicit_point(args, dims: ModelDims) -> ReducedFormParams:
    n, m = dims.n, dims.m
    sigma = _load_matrix(args.sigma, (n, n), "Sigma") if args.sigma else np.eye(n)
    b = _load_matrix(args.b, (m, n), "B") if args.b else np.zeros((m, n))
    return ReducedFormParams(dims, b, sigma)


def _theorem6_for_report(spec, r, tol) -> Theorem6Result | None:
    c = compile_spec(spec)
    try:
        s_rot = restricted_point(r, c, spec, pick_seed=0, tol=tol)
        return theorem6_check(s_rot, c, spec, tol)
    except (InfeasibleRestrictionsError, UnrestrictedPointError):
        return None


def _run_check(args, tol) -> tuple[IdentificationReport, Theorem6Result | None]:
    spec = _load_spec(args)
    explicit = args.sigma is not None or args.b is not None
    if explicit:
        r0 = _explicit_point(args, spec.dims)
        report = check_at_point(spec, r0, tol)
    else:
        if args.draws < 2:
            raise ValueError("--draws must be at least 2")
        report = check_exact_identification(
            spec, draws=args.draws, seed=args.seed, tol=tol
        )
        r0 = draw_reduced_form(SamplerConfig(dims=spec.dims, seed=args.seed), 0)
    theorem6 = _theorem6_for_report(spec, r0, tol) if report.count.overall else None
    return report, theorem6


def _cmd_check(args) -> int:
    tol = _tolerance(args)
    try:
        report, theorem6 = _run_check(args, tol)
    except (OSError, ValueError, SvarIdentError) as exc:
        return _fail(str(exc))
    if args.format == "json":
        payload = check_report_dict(report, args.spec, "check", theorem6)
        sys.stdout.write(render_json(payload))
    else:
        sys.stdout.write("svar-ident check\n")
        sys.stdout.write(check_report_text(report, args.spec, theorem6))
    return verdict_exit_code(report.verdict)


def _cmd_explain(args) -> int:
    tol = _tolerance(args)
    try:
        report, _ = _run_check(args, tol)
    except (OSError, ValueError, SvarIdentError) as exc:
        return _fail(str(exc))
    verdict = report.verdict
    if args.format == "json":
        payload = {
            "command": "explain",
            "spec": args.spec,
            "verdict": verdict.value,
            "implicated": [
                {"cell": c.cell, "column": c.column, "implied_by": list(c.implied_by)}
                for c in report.implicated
            ],
        }
        sys.stdout.write(render_json(payload))
    else:
        sys.stdout.write("svar-ident explain\n")
        sys.stdout.write(f"spec: {args.spec}\n")
        if verdict is Verdict.NOT_IDENTIFIED_REDUNDANCY:
            for cell in report.implicated:
                implied = ", ".join(cell.implied_by)
                sys.stdout.write(
                    f"{cell.cell} is implied by other restrictions: {implied}\n"
                )
            if not report.implicated:
                sys.stdout.write(
                    "redundancy detected but no selection cells to name\n"
                )
        elif verdict is Verdict.EXACTLY_IDENTIFIED:
            sys.stdout.write("model is exactly identified; nothing to explain\n")
        elif verdict is Verdict.NOT_IDENTIFIED_COUNT_FAILURE:
            sys.stdout.write(
                "counting condition fails; run 'svar-ident check' for the "
                "per-column table\n"
            )
        else:
            sys.stdout.write("draws disagree; verdict is inconclusive\n")
    if verdict is Verdict.NOT_IDENTIFIED_REDUNDANCY:
        return 0
    if verdict is Verdict.INCONCLUSIVE_DRAW_DISAGREEMENT:
        return 3
    return 2


def _cmd_rotate(args) -> int:
    tol = _tolerance(args)
    try:
        spec = _load_spec(args)
        explicit = args.sigma is not None or args.b is not None
        if explicit:
            r = _explicit_point(args, spec.dims)
            source = "files"
        else:
            r = draw_reduced_form(SamplerConfig(dims=spec.dims, seed=args.seed), 0)
            source = f"sampled (seed {args.seed}, draw 0)"
    except (OSError, ValueError, SvarIdentError) as exc:
        return _fail(str(exc))

    c = compile_spec(spec)
    try:
        rot = construct_rotation(
            r, c, spec, OnRedundancy.PICK_ARBITRARY, pick_seed=0, tol=tol
        )
    except InfeasibleRestrictionsError as exc:
        print(f"svar-ident: infeasible: {exc}", file=sys.stderr)
        return 2
    except SvarIdentError as exc:
        return _fail(str(exc))

    s0 = baseline_structural(r)
    s_rot = StructuralParams(spec.dims, s0.A0 @ rot.P, s0.Aplus @ rot.P)
    residual = restriction_residual(s_rot, c, spec, tol)
    rotated = (s_rot.A0, s_rot.Aplus)
    if args.format == "json":
        payload = rotation_report_dict(
            rot, args.spec, source, residual, rotated,
            spec.dims.n, spec.dims.p, c.q, c.permutation,
        )
        sys.stdout.write(render_json(payload))
    else:
        sys.stdout.write("svar-ident rotate\n")
        sys.stdout.write(
            rotation_report_text(
                rot, args.spec, source, residual, rotated, spec.dims.n, spec.dims.p
            )
        )
    return 0


def _cmd_demo(args) -> int:
    out = sys.stdout
    spec = parse_spec(fixtures.COUNTEREXAMPLE)
    c = compile_spec(spec)
    dims = spec.dims
    r = ReducedFormParams(dims, np.zeros((dims.m, dims.n)), np.eye(dims.n))
    s0 = baseline_structural(r)
    f_val = assemble_f(s0, spec)

    out.write("svar-ident demo: counting restrictions is not enough\n")
    out.write("\nrestriction document (built-in):\n")
    for line in fixtures.COUNTEREXAMPLE.splitlines():
        out.write(f"  {line}\n")
    out.write(f"\nq = ({', '.join(str(x) for x in c.q)})  ")
    out.write(f"total = {c.total} = n(n-1)/2 = {dims.n * (dims.n - 1) // 2}\n")
    cc = count_condition(c)
    out.write(f"count condition: {'PASS' if cc.overall else 'FAIL'}\n")

    out.write("\nat Sigma = I, B = 0 the baseline point has f = stack(A0; IR0):\n")
    out.write(format_matrix(f_val) + "\n")

    qt1 = q_tilde(1, c, f_val, [])
    rank1, null1, _ = svd_rank_null(qt1)
    out.write("\nQtilde_1 (rows of f restricted in column 1):\n")
    out.write(format_matrix(qt1) + "\n")
    p1, _ = sign_normalize(null1[0], c.permutation[0] + 1, s0.A0)
    out.write(f"rank {rank1} (required {dims.n - 1}) -> unique up to sign; ")
    out.write(f"p1 = {format_vector(p1)}\n")

    qt2 = q_tilde(2, c, f_val, [p1])
    rank2, _, _ = svd_rank_null(qt2)
    out.write("\nQtilde_2 (restricted rows for column 2, then p1'):\n")
    out.write(format_matrix(qt2) + "\n")
    out.write(
        f"rank {rank2} (required {dims.n - 1}) -> Redundant({dims.n - rank2}): "
        "the impact restriction is implied by the A0 zeros\n"
    )

    s_rot = restricted_point(r, c, spec, pick_seed=0)
    t6 = theorem6_check(s_rot, c, spec)
    out.write("\nrank cross-check at a restricted point:\n")
    for t, rank in enumerate(t6.ranks):
        mark = "" if rank == dims.n else f"  < {dims.n}"
        out.write(f"  rank(M{t + 1}) = {rank}{mark}\n")
    out.write(
        f"counting total {t6.total} matches {t6.required}, but the rank test fails\n"
    )

    report = check_exact_identification(spec, draws=10, seed=0)
    out.write(f"\nverdict over M = 10 sampled draws: {report.verdict.value}\n")
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "check": _cmd_check,
        "rotate": _cmd_rotate,
        "demo": _cmd_demo,
        "explain": _cmd_explain,
    }
    return handlers[args.command](args)


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
