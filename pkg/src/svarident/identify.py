"""Exact-identification checks for zero-restricted SVARs.

The counting condition (column j of the permuted system carrying n - j
restrictions) is necessary but not sufficient for global identification:
restrictions on transformations of A0 can be implied by restrictions on
other columns, in which case they pin down nothing.  The decisive test is a
sequential rank condition evaluated at randomly drawn reduced-form points:
for each column, stack the restriction rows applied to f with the
previously determined columns and require rank n - 1, which leaves exactly
one admissible unit vector.  Failure at almost one point means failure at
almost every point, so a handful of draws settles the verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CountConditionError, InfeasibleRestrictionsError, UnrestrictedPointError
from .linalg import DEFAULT_TOL, RankTolerance, svd_rank_null
from .model import ReducedFormParams, StructuralParams, baseline_structural
from .restrictions import (
    CompiledRestrictions,
    RestrictionSpec,
    assemble_f,
    compile_spec,
    restriction_residual,
)
from .sampler import SamplerConfig, draw_reduced_form, stream_key

_SIGN_EPS = 1e-12


class ColumnStatus(Enum):
    UNIQUE = "Unique"
    REDUNDANT = "Redundant"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class ColumnDiagnostic:
    """Rank outcome for one processed column.

    j is the 1-based position in the permuted (most-restricted-first) order;
    original_column is the 1-based column of the document it refers to.
    null_dim = n - rank; a Unique column has null_dim 1.
    """

    j: int
    original_column: int
    qtilde_rows: int
    rank: int
    required_rank: int
    status: ColumnStatus
    null_dim: int
    singular_values: tuple[float, ...]

    @property
    def status_label(self) -> str:
        if self.status is ColumnStatus.REDUNDANT:
            return f"Redundant({self.null_dim})"
        return self.status.value


@dataclass(frozen=True)
class CountCondition:
    """Per-column q_j == n - j outcomes in permuted order, plus the overall verdict."""

    per_column: tuple[bool, ...]
    overall: bool


@dataclass(frozen=True)
class RotationResult:
    """Outcome of the sequential column construction at one reduced-form point.

    P is None when the construction aborted on a rank-deficient column;
    sign_flips records the +-1 applied to each accepted column, in processing
    order.  unique is True only if every column had a one-dimensional null
    space.
    """

    P: np.ndarray | None
    per_column: tuple[ColumnDiagnostic, ...]
    sign_flips: tuple[int, ...]
    unique: bool


class OnRedundancy(Enum):
    ABORT = "abort"
    PICK_ARBITRARY = "pick-arbitrary"


class Verdict(Enum):
    EXACTLY_IDENTIFIED = "ExactlyIdentified"
    NOT_IDENTIFIED_COUNT_FAILURE = "NotIdentified_CountFailure"
    NOT_IDENTIFIED_REDUNDANCY = "NotIdentified_Redundancy"
    INCONCLUSIVE_DRAW_DISAGREEMENT = "Inconclusive_DrawDisagreement"


@dataclass(frozen=True)
class DrawRecord:
    """One reduced-form draw: its reproducible seed, diagnostics, pass flag."""

    seed: int | None
    per_column: tuple[ColumnDiagnostic, ...]
    passed: bool


@dataclass(frozen=True)
class ImplicatedCell:
    """A restriction cell that is linearly implied by the others."""

    cell: str
    column: int  # 1-based original column
    implied_by: tuple[str, ...]


@dataclass(frozen=True)
class Theorem6Result:
    """Stacked-identity rank cross-check at one restricted structural point."""

    ranks: tuple[int, ...]
    total: int
    required: int
    count_ok: bool
    rank_ok: bool
    passed: bool


@dataclass(frozen=True)
class IdentificationReport:
    """Aggregate verdict over draws for one restriction document."""

    dims_n: int
    dims_p: int
    q: tuple[int, ...]
    permutation: tuple[int, ...]
    count: CountCondition
    total_restrictions: int
    total_required: int
    draws: tuple[DrawRecord, ...]
    verdict: Verdict
    implicated: tuple[ImplicatedCell, ...] = ()


def count_condition(c: CompiledRestrictions) -> CountCondition:
    """Check q_j = n - j for every column of the permuted system."""
    n = c.dims.n
    per = tuple(c.q[t] == n - 1 - t for t in range(n))
    return CountCondition(per, all(per))


def _restriction_rows(c: CompiledRestrictions, t: int, f_val: np.ndarray) -> np.ndarray:
    """Restriction rows for permuted column t applied to f.

    Selection-form restrictions return the q_j selected rows of f directly;
    general matrices return Q_j f with the padding rows (all-zero rows of
    Q_j) dropped, so both paths yield only the informative rows.
    """
    if c.rows is not None:
        idx = c.rows[t]
        if not idx:
            return np.zeros((0, c.dims.n))
        return f_val[list(idx), :]
    keep = np.any(c.Q[t] != 0.0, axis=1)
    return (c.Q[t] @ f_val)[keep]


def q_tilde(j: int, c: CompiledRestrictions, f_val, prior) -> np.ndarray:
    """Stacked rank-test matrix for permuted column j (1-based).

    Rows are the column's restriction rows applied to f followed by the
    transposed columns determined at earlier steps.  With the counting
    condition in force this is an (n-1) x n matrix whose rank decides
    whether column j is pinned down uniquely.
    """
    if not 1 <= j <= c.dims.n:
        raise ValueError(f"column index must be 1..{c.dims.n}")
    f_val = np.asarray(f_val, dtype=float)
    parts = [_restriction_rows(c, j - 1, f_val)]
    parts.extend(np.asarray(p, dtype=float).reshape(1, -1) for p in prior)
    return np.vstack(parts)


def sign_normalize(p, j: int, a0) -> tuple[np.ndarray, int]:
    """Flip p so that entry j (1-based) of A0 p is positive.

    When that entry is numerically zero the first entry of p exceeding
    tolerance is made positive instead, so the choice stays deterministic.
    Returns the normalized vector and the flip (+1 or -1) applied.
    """
    p = np.asarray(p, dtype=float)
    v = np.asarray(a0, dtype=float) @ p
    pivot = float(v[j - 1])
    thresh = _SIGN_EPS * max(1.0, float(np.abs(v).max()))
    if abs(pivot) > thresh:
        flip = 1 if pivot > 0 else -1
    else:
        flip = 1
        for entry in p:
            if abs(entry) > _SIGN_EPS:
                flip = 1 if entry > 0 else -1
                break
    return p * flip, flip


def _build_columns(
    f_val: np.ndarray,
    c: CompiledRestrictions,
    a0: np.ndarray,
    tol: RankTolerance,
    on_redundancy: OnRedundancy,
    pick_rng: np.random.Generator | None,
    null_solver,
) -> RotationResult:
    """Sequential core shared by nonredundancy_at and construct_rotation."""
    n = c.dims.n
    prior: list[np.ndarray] = []
    diags: list[ColumnDiagnostic] = []
    flips: list[int] = []
    columns: dict[int, np.ndarray] = {}
    unique = True
    # The prior columns carry rounding error on the order of eps times the
    # norm of the full stack they were extracted from, so rank decisions on
    # the small per-column stacks must be cut off at that scale, not their own.
    scale = max(1.0, float(np.linalg.norm(f_val, 2))) if f_val.size else 1.0

    for t, orig in enumerate(c.permutation):
        jj = t + 1
        qt = q_tilde(jj, c, f_val, prior)
        rank, null_rows, svals = svd_rank_null(qt, tol, sigma_floor=scale)
        null_dim = n - rank

        if rank >= n:
            diags.append(
                ColumnDiagnostic(
                    jj, orig + 1, qt.shape[0], rank, n - 1,
                    ColumnStatus.INFEASIBLE, 0, tuple(float(x) for x in svals),
                )
            )
            err = InfeasibleRestrictionsError(
                f"restrictions on column {orig + 1} admit no unit vector "
                f"(rank {rank} = n at processing step {jj})"
            )
            err.diagnostics = tuple(diags)
            raise err

        if rank == n - 1:
            status = ColumnStatus.UNIQUE
            if null_solver is not None:
                vec = np.asarray(null_solver(qt), dtype=float)
                vec = vec / float(np.linalg.norm(vec))
            else:
                vec = null_rows[0]
        else:
            status = ColumnStatus.REDUNDANT
            unique = False
            if on_redundancy is OnRedundancy.ABORT:
                diags.append(
                    ColumnDiagnostic(
                        jj, orig + 1, qt.shape[0], rank, n - 1,
                        status, null_dim, tuple(float(x) for x in svals),
                    )
                )
                return RotationResult(None, tuple(diags), tuple(flips), False)
            rng = pick_rng if pick_rng is not None else np.random.default_rng(0)
            w = rng.standard_normal(null_dim)
            while float(np.linalg.norm(w)) < 1e-8:
                w = rng.standard_normal(null_dim)
            vec = null_rows.T @ w
            vec = vec / float(np.linalg.norm(vec))

        vec, flip = sign_normalize(vec, orig + 1, a0)
        diags.append(
            ColumnDiagnostic(
                jj, orig + 1, qt.shape[0], rank, n - 1,
                status, null_dim, tuple(float(x) for x in svals),
            )
        )
        prior.append(vec)
        flips.append(flip)
        columns[orig] = vec

    p_mat = np.column_stack([columns[j] for j in range(n)])
    return RotationResult(p_mat, tuple(diags), tuple(flips), unique)


def nonredundancy_at(
    r: ReducedFormParams,
    c: CompiledRestrictions,
    spec: RestrictionSpec,
    tol: RankTolerance = DEFAULT_TOL,
) -> RotationResult:
    """Sequential rank check at one reduced-form point, aborting on failure.

    Requires the counting condition; evaluates f at the triangular baseline
    point for r and walks the permuted columns, recording rank diagnostics.
    A Redundant column ends the walk immediately (P is None).
    """
    cc = count_condition(c)
    if not cc.overall:
        bad = [t + 1 for t, ok in enumerate(cc.per_column) if not ok]
        raise CountConditionError(
            f"counting condition fails at permuted column(s) {bad}; "
            f"q = {tuple(c.q)}"
        )
    s0 = baseline_structural(r)
    f_val = assemble_f(s0, spec, tol)
    return _build_columns(f_val, c, s0.A0, tol, OnRedundancy.ABORT, None, None)


def construct_rotation(
    r: ReducedFormParams,
    c: CompiledRestrictions,
    spec: RestrictionSpec,
    on_redundancy: OnRedundancy = OnRedundancy.ABORT,
    pick_seed: int = 0,
    tol: RankTolerance = DEFAULT_TOL,
    null_solver=None,
) -> RotationResult:
    """Build an orthonormal P whose columns satisfy the restrictions at r.

    Under ABORT behaves like nonredundancy_at (minus the counting-condition
    gate).  Under PICK_ARBITRARY a rank-deficient column gets a random unit
    vector from its null space, seeded by pick_seed, and the result is
    flagged non-unique; distinct pick seeds generally give distinct but
    observationally equivalent rotations.  Raises
    InfeasibleRestrictionsError when a column's stack reaches full rank.
    null_solver optionally overrides how the unique null vector is computed
    (testing hook); it receives the stacked matrix and returns a vector.
    """
    s0 = baseline_structural(r)
    f_val = assemble_f(s0, spec, tol)
    rng = np.random.default_rng(pick_seed) if on_redundancy is OnRedundancy.PICK_ARBITRARY else None
    return _build_columns(f_val, c, s0.A0, tol, on_redundancy, rng, null_solver)


def theorem6_check(
    s_restricted: StructuralParams,
    c: CompiledRestrictions,
    spec: RestrictionSpec,
    tol: RankTolerance = DEFAULT_TOL,
    residual_tol: float = 1e-8,
) -> Theorem6Result:
    """Rank cross-check at a structural point satisfying the restrictions.

    For each permuted column j stacks Q_j f with unit rows marking the j
    columns processed so far and reports the numerical ranks.  Exact
    identification requires every rank to equal n and the restriction total
    to equal n(n-1)/2.  The point must actually satisfy the restrictions:
    at unrestricted points the rank test is vacuous, which is exactly how
    redundant schemes evade it.
    """
    residual = restriction_residual(s_restricted, c, spec, tol)
    if residual > residual_tol:
        raise UnrestrictedPointError(
            f"restriction residual {residual:.3e} exceeds {residual_tol:.1e}; "
            "evaluate at a restricted point (see construct_rotation)"
        )
    n = c.dims.n
    f_val = assemble_f(s_restricted, spec, tol)
    ranks = []
    for t in range(n):
        jj = t + 1
        # unit rows for the columns handled at steps 1..j, in original
        # coordinates; with an identity permutation this is [I_j 0]
        ident = np.zeros((jj, n))
        for u in range(jj):
            ident[u, c.permutation[u]] = 1.0
        stacked = np.vstack([c.Q[t] @ f_val, ident])
        rank, _, _ = svd_rank_null(stacked, tol)
        ranks.append(rank)
    required = n * (n - 1) // 2
    count_ok = c.total == required
    rank_ok = all(r == n for r in ranks)
    return Theorem6Result(
        ranks=tuple(ranks),
        total=c.total,
        required=required,
        count_ok=count_ok,
        rank_ok=rank_ok,
        passed=count_ok and rank_ok,
    )


def redundancy_explanation(
    r: ReducedFormParams,
    c: CompiledRestrictions,
    spec: RestrictionSpec,
    tol: RankTolerance = DEFAULT_TOL,
) -> tuple[ImplicatedCell, ...]:
    """Name the restriction cells that carry no independent information at r.

    Walks columns like nonredundancy_at; at the first rank-deficient column
    each restriction row is tested for linear dependence on the span of the
    other rows plus the prior columns.  Dependent rows are reported with the
    cells that support them.  Reporting only; verdicts never depend on this.
    Returns () when every column is Unique or when the compiled restrictions
    lack selection structure (general Q_j have no cell names).
    """
    if c.rows is None:
        return ()
    cc = count_condition(c)
    if not cc.overall:
        raise CountConditionError("redundancy explanation requires the counting condition")
    s0 = baseline_structural(r)
    f_val = assemble_f(s0, spec, tol)
    n = c.dims.n
    prior: list[np.ndarray] = []
    scale = max(1.0, float(np.linalg.norm(f_val, 2))) if f_val.size else 1.0

    for t, orig in enumerate(c.permutation):
        qt = q_tilde(t + 1, c, f_val, prior)
        rank, null_rows, _ = svd_rank_null(qt, tol, sigma_floor=scale)
        if rank == n - 1:
            vec, _ = sign_normalize(null_rows[0], orig + 1, s0.A0)
            prior.append(vec)
            continue

        rows = _restriction_rows(c, t, f_val)
        prior_mat = (
            np.vstack([p.reshape(1, -1) for p in prior]) if prior else np.zeros((0, n))
        )
        labels = [c.cell_label(sr, orig) for sr in c.rows[t]]
        support_cells = [
            c.cell_label(sr, c.permutation[u])
            for u in range(t)
            for sr in c.rows[u]
        ]
        implicated = []
        dependent = []
        for i in range(rows.shape[0]):
            others = np.vstack([np.delete(rows, i, axis=0), prior_mat])
            with_row = np.vstack([rows, prior_mat])
            r_without, _, _ = svd_rank_null(others, tol, sigma_floor=scale)
            r_with, _, _ = svd_rank_null(with_row, tol, sigma_floor=scale)
            if r_without == r_with:
                dependent.append(i)
        independent_cells = [labels[i] for i in range(len(labels)) if i not in dependent]
        for i in dependent:
            implicated.append(
                ImplicatedCell(
                    cell=labels[i],
                    column=orig + 1,
                    implied_by=tuple(support_cells + independent_cells),
                )
            )
        return tuple(implicated)
    return ()


def restricted_point(
    r: ReducedFormParams,
    c: CompiledRestrictions,
    spec: RestrictionSpec,
    pick_seed: int = 0,
    tol: RankTolerance = DEFAULT_TOL,
) -> StructuralParams:
    """A structural point satisfying the restrictions at reduced form r.

    Rotates the baseline point by a PICK_ARBITRARY construction, so it works
    for redundant schemes too (the rotation is then one of infinitely many).
    """
    rot = construct_rotation(
        r, c, spec, OnRedundancy.PICK_ARBITRARY, pick_seed=pick_seed, tol=tol
    )
    s0 = baseline_structural(r)
    return StructuralParams(r.dims, s0.A0 @ rot.P, s0.Aplus @ rot.P)


def check_at_point(
    spec: RestrictionSpec,
    r: ReducedFormParams,
    tol: RankTolerance = DEFAULT_TOL,
) -> IdentificationReport:
    """check_exact_identification at one explicitly supplied reduced form.

    The single evaluation is recorded as a draw with seed None.  Meant for
    callers bringing their own estimated (B, Sigma).
    """
    c = compile_spec(spec)
    cc = count_condition(c)
    n = spec.dims.n
    required = n * (n - 1) // 2
    if not cc.overall:
        return IdentificationReport(
            dims_n=n,
            dims_p=spec.dims.p,
            q=c.q,
            permutation=c.permutation,
            count=cc,
            total_restrictions=c.total,
            total_required=required,
            draws=(),
            verdict=Verdict.NOT_IDENTIFIED_COUNT_FAILURE,
        )
    rot = nonredundancy_at(r, c, spec, tol)
    record = DrawRecord(None, rot.per_column, rot.unique)
    verdict = Verdict.EXACTLY_IDENTIFIED if rot.unique else Verdict.NOT_IDENTIFIED_REDUNDANCY
    implicated = () if rot.unique else redundancy_explanation(r, c, spec, tol)
    return IdentificationReport(
        dims_n=n,
        dims_p=spec.dims.p,
        q=c.q,
        permutation=c.permutation,
        count=cc,
        total_restrictions=c.total,
        total_required=required,
        draws=(record,),
        verdict=verdict,
        implicated=implicated,
    )


def check_exact_identification(
    spec: RestrictionSpec,
    config: SamplerConfig | None = None,
    draws: int = 5,
    seed: int = 0,
    tol: RankTolerance = DEFAULT_TOL,
) -> IdentificationReport:
    """Verdict on exact identification from M independent reduced-form draws.

    A counting-condition failure is decided without consuming any draw.
    Otherwise every draw runs the sequential rank check: unanimous passes
    mean ExactlyIdentified, unanimous failures mean
    NotIdentified_Redundancy, and disagreement is reported as
    Inconclusive_DrawDisagreement with per-column singular values kept in
    the diagnostics rather than resolved by majority vote.
    """
    if draws < 2:
        raise ValueError("at least 2 draws are required")
    c = compile_spec(spec)
    cc = count_condition(c)
    n = spec.dims.n
    required = n * (n - 1) // 2
    if not cc.overall:
        return IdentificationReport(
            dims_n=n,
            dims_p=spec.dims.p,
            q=c.q,
            permutation=c.permutation,
            count=cc,
            total_restrictions=c.total,
            total_required=required,
            draws=(),
            verdict=Verdict.NOT_IDENTIFIED_COUNT_FAILURE,
        )

    cfg = config if config is not None else SamplerConfig(dims=spec.dims, seed=seed)
    records: list[DrawRecord] = []
    first_failing: ReducedFormParams | None = None
    for index in range(draws):
        r = draw_reduced_form(cfg, index)
        s0 = baseline_structural(r)
        rot = _build_columns(
            assemble_f(s0, spec, tol), c, s0.A0, tol, OnRedundancy.ABORT, None, None,
        )
        if not rot.unique and first_failing is None:
            first_failing = r
        records.append(DrawRecord(stream_key(cfg.seed, index), rot.per_column, rot.unique))

    passes = [rec.passed for rec in records]
    if all(passes):
        verdict = Verdict.EXACTLY_IDENTIFIED
    elif not any(passes):
        verdict = Verdict.NOT_IDENTIFIED_REDUNDANCY
    else:
        verdict = Verdict.INCONCLUSIVE_DRAW_DISAGREEMENT

    implicated: tuple[ImplicatedCell, ...] = ()
    if verdict is Verdict.NOT_IDENTIFIED_REDUNDANCY and first_failing is not None:
        implicated = redundancy_explanation(first_failing, c, spec, tol)

    return IdentificationReport(
        dims_n=n,
        dims_p=spec.dims.p,
        q=c.q,
        permutation=c.permutation,
        count=cc,
        total_restrictions=c.total,
        total_required=required,
        draws=tuple(records),
        verdict=verdict,
        implicated=implicated,
    )
