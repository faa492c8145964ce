"""Ratio suprema over curve and arc families, inequality checks and randomized sweeps.

All checks are evaluated on batches of metric pairs: a batch produces one
array "column" per (inequality, subject, direction), with NaN where the
inequality does not apply to a pair. The single-pair functions run a batch of
one and pick out the relevant records.

Convention: a check passes when lhs <= rhs.
"""
import json
import math
import os
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .collar import EPS0_PRIME, EPS_STAR
from .decompose import batch_middles, batch_offsets
from .errors import DomainError
from .ledger import ConstantLedger, build_ledger
from .pants import (
    ARC_COLUMNS, CLASSES, CURVE_COLUMNS, LOOP_RESIDUAL_TOL, SEAM_PAIRS,
    ArcClass, CurveClass, PantsMetric, batch_spectrum, class_from_row, others, third,
)

CUSP_PATTERNS = {
    "none": (False, False, False),
    "one": (False, False, True),
    "two": (False, True, True),
}
SAMPLE_FLOOR = 1e-6
MIDDLE_SLACK = 1e-9
THREADS_ENV = "PANTS_SPECTRA_THREADS"
_CHUNK = 4096


@dataclass(frozen=True)
class MetricPair:
    P1: PantsMetric
    P2: PantsMetric

    def __post_init__(self):
        if self.P1.cusp_pattern() != self.P2.cusp_pattern():
            raise DomainError("the two metrics must have cusps at the same boundaries")

    def in_relative_part(self, eps0: float) -> bool:
        return max(self.P1.lengths + self.P2.lengths) <= eps0

    def in_thick_part(self, eps: float, eps0: float) -> bool:
        live = [l for l in self.P1.lengths + self.P2.lengths if l > 0]
        return all(eps <= l <= eps0 for l in live)

    def swapped(self) -> "MetricPair":
        return MetricPair(self.P2, self.P1)


@dataclass(frozen=True)
class CheckRecord:
    name: str
    subject: str
    direction: str
    bound_used: float
    lhs: float
    rhs: float
    passed: bool

    def to_dict(self):
        return asdict(self)


@dataclass
class RatioReport:
    per_class: list
    sup_curves: float
    sup_arcs: float
    sup_all: float
    checks: list = field(default_factory=list)
    pair_id: int | None = None
    error: str | None = None

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def failed_checks(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self):
        return {
            "pair_id": self.pair_id,
            "per_class": [
                {"class_kind": c.kind, "index_a": c.i, "index_b": c.j if c.kind == "seam" else None,
                 "l1": l1, "l2": l2, "ratio_max": r}
                for c, l1, l2, r in self.per_class
            ],
            "sup_curves": self.sup_curves,
            "sup_arcs": self.sup_arcs,
            "sup_all": self.sup_all,
            "checks": [c.to_dict() for c in self.checks],
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            per_class=[(class_from_row(r), r["l1"], r["l2"], r["ratio_max"]) for r in data["per_class"]],
            sup_curves=data["sup_curves"], sup_arcs=data["sup_arcs"], sup_all=data["sup_all"],
            checks=[CheckRecord(**c) for c in data["checks"]],
            pair_id=data["pair_id"], error=data["error"],
        )


@dataclass
class CheckColumn:
    name: str
    subject: str
    direction: str
    bound_used: float
    lhs: np.ndarray
    rhs: np.ndarray
    extra_ok: np.ndarray | None = None

    @property
    def applicable(self):
        return ~np.isnan(self.lhs)

    @property
    def passed(self):
        with np.errstate(invalid="ignore"):
            ok = self.lhs <= self.rhs
        if self.extra_ok is not None:
            ok &= self.extra_ok
        return ok

    def record(self, row: int) -> CheckRecord:
        return CheckRecord(self.name, self.subject, self.direction, float(self.bound_used),
                           float(self.lhs[row]), float(self.rhs[row]), bool(self.passed[row]))

    def take(self, rows) -> "CheckColumn":
        extra = None if self.extra_ok is None else self.extra_ok[rows]
        return CheckColumn(self.name, self.subject, self.direction, self.bound_used,
                           self.lhs[rows], self.rhs[rows], extra)


# --- ratio helpers -----------------------------------------------------------


def _ratio(x, y):
    """x / y with the cusp convention 0/0 = 1."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where((x == 0) & (y == 0), 1.0, x / y)


def _sym_ratio(x, y):
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.maximum(_ratio(x, y), _ratio(y, x))


def _nanmax_rows(a):
    out = np.full(a.shape[0], np.nan)
    has = ~np.all(np.isnan(a), axis=1)
    if np.any(has):
        out[has] = np.nanmax(a[has], axis=1)
    return out


# --- the batch kernel --------------------------------------------------------


@dataclass
class Batch:
    L1: np.ndarray
    L2: np.ndarray
    S1: np.ndarray
    S2: np.ndarray
    ratios: np.ndarray
    sup_curves: np.ndarray
    sup_arcs: np.ndarray
    sup_all: np.ndarray
    columns: list
    errors: list

    def __len__(self):
        return self.L1.shape[0]

    def report(self, row: int, pair_id: int | None = None) -> RatioReport:
        per_class = [
            (cls, float(self.S1[row, c]), float(self.S2[row, c]), float(self.ratios[row, c]))
            for c, cls in enumerate(CLASSES) if not np.isnan(self.S1[row, c])
        ]
        checks = [col.record(row) for col in self.columns if not np.isnan(col.lhs[row])]
        return RatioReport(per_class, float(self.sup_curves[row]), float(self.sup_arcs[row]),
                           float(self.sup_all[row]), checks, pair_id, self.errors[row])


def evaluate_batch(L1, L2, ledger: ConstantLedger) -> Batch:
    """Spectra, symmetrized ratio suprema and every applicable check for many pairs.

    L1, L2: (n, 3) boundary lengths with matching cusp patterns.
    """
    L1 = np.asarray(L1, dtype=float).reshape(-1, 3)
    L2 = np.asarray(L2, dtype=float).reshape(-1, 3)
    if L1.shape != L2.shape or np.any((L1 == 0) != (L2 == 0)):
        raise DomainError("metric pairs must share their cusp pattern")
    S1, res1 = batch_spectrum(L1)
    S2, res2 = batch_spectrum(L2)
    ratios = _sym_ratio(S1, S2)
    sup_curves = _nanmax_rows(ratios[:, CURVE_COLUMNS])
    sup_arcs = _nanmax_rows(ratios[:, ARC_COLUMNS])
    sup_all = np.fmax(sup_curves, sup_arcs)

    errors = [None] * L1.shape[0]
    bad_loop = (np.nan_to_num(res1, nan=0.0) > LOOP_RESIDUAL_TOL) | (np.nan_to_num(res2, nan=0.0) > LOOP_RESIDUAL_TOL)
    for row in np.flatnonzero(np.any(bad_loop, axis=1)):
        errors[row] = "loop pentagon residual above tolerance"
    for row in np.flatnonzero(np.isnan(sup_curves) | np.isnan(sup_arcs)):
        errors[row] = "empty curve or arc family"

    columns = _theorem_columns(sup_curves, sup_arcs, sup_all, ledger)
    columns += _proposition_columns(L1, L2, S1, S2, ledger)
    columns += _lemma_columns(L1, L2, S1, S2, ledger)
    return Batch(L1, L2, S1, S2, ratios, sup_curves, sup_arcs, sup_all, columns, errors)


def _theorem_columns(sup_curves, sup_arcs, sup_all, ledger):
    with np.errstate(divide="ignore", invalid="ignore"):
        log_c = np.log(sup_curves)
        log_a = np.log(sup_all)
    left_ok = log_c <= log_a
    return [
        CheckColumn("theorem_key", "all", "sym", ledger.K, sup_all, ledger.K * sup_curves),
        CheckColumn("theorem_main", "all", "sym", ledger.C, log_a, log_c + ledger.C, left_ok),
    ]


_ORIENTATIONS = (("X1/X2", 0), ("X2/X1", 1))


def _oriented(L1, L2, S1, S2, flip):
    return (L2, L1, S2, S1) if flip else (L1, L2, S1, S2)


def _proposition_columns(L1, L2, S1, S2, ledger):
    cols = []
    k_seam, k_loop = ledger.seam_constant, ledger.loop_constant
    for direction, flip in _ORIENTATIONS:
        A, B, SA, SB = _oriented(L1, L2, S1, S2, flip)
        with np.errstate(divide="ignore", invalid="ignore"):
            for col, (i, j) in enumerate(SEAM_PAIRS, start=3):
                k = third(i, j)
                lhs = SA[:, col] / SB[:, col]
                factor = np.maximum.reduce([
                    np.ones(len(A)), _ratio(A[:, k - 1], B[:, k - 1]),
                    B[:, i - 1] / A[:, i - 1], B[:, j - 1] / A[:, j - 1],
                ])
                cols.append(CheckColumn("diff_boundary", f"seam({i},{j})", direction, k_seam,
                                        lhs, k_seam * factor))
            for col, i in enumerate((1, 2, 3), start=6):
                alpha, alpha_p = _alpha_pair(A, i)
                rows = np.arange(len(A))
                lhs = SA[:, col] / SB[:, col]
                factor = np.maximum.reduce([
                    np.ones(len(A)),
                    _ratio(A[rows, alpha], B[rows, alpha]),
                    _ratio(A[rows, alpha_p], B[rows, alpha_p]),
                    B[:, i - 1] / A[:, i - 1],
                ])
                cols.append(CheckColumn("same_boundary", f"loop({i})", direction, k_loop,
                                        lhs, k_loop * factor))
    return cols


def _alpha_pair(A, i):
    """Column indices of (alpha, alpha') for the loop at i: the longer other boundary first."""
    j, k = others(i)
    j_first = A[:, j - 1] >= A[:, k - 1]
    return np.where(j_first, j - 1, k - 1), np.where(j_first, k - 1, j - 1)


def _lemma_columns(L1, L2, S1, S2, ledger):
    small = ledger.small_regime
    cols = []
    d1, d2 = batch_offsets(L1), batch_offsets(L2)
    m1, m2 = batch_middles(L1, S1), batch_middles(L2, S2)
    n = L1.shape[0]
    rows = np.arange(n)
    arcs = [ArcClass.seam(i, j) for i, j in SEAM_PAIRS] + [ArcClass.loop(i) for i in (1, 2, 3)]
    floor = ledger.M0_empirical - MIDDLE_SLACK
    seam_diff, loop_diff = (ledger.D1, ledger.D2) if small else (ledger.D, max(ledger.D2, ledger.D2prime))
    seam_name, loop_name = (("seam_middle_offset", "loop_middle_offset") if small
                            else ("seam_middle_offset_general", "loop_middle_offset_general"))

    # per-metric checks
    for direction, L, mid, d in (("X1", L1, m1, d1), ("X2", L2, m2, d2)):
        for c, arc in enumerate(arcs):
            label = arc.label()
            cols.append(CheckColumn("middle_lower_bound", label, direction, ledger.M0_empirical,
                                    np.where(np.isnan(mid[:, c]), np.nan, floor), mid[:, c]))
            if arc.kind == "seam":
                a = L[:, third(arc.i, arc.j) - 1] / 2.0
                gap = np.abs(a - mid[:, c])
                cols.append(CheckColumn(seam_name, label, direction, seam_diff, gap, np.full(n, seam_diff)))
            else:
                j, k = others(arc.i)
                a = np.maximum(L[:, j - 1], L[:, k - 1]) / 2.0
                gap = np.abs(mid[:, c] / 2.0 - a)
                cols.append(CheckColumn(loop_name, label, direction, loop_diff, gap, np.full(n, loop_diff)))
        for b in (1, 2, 3):
            l = L[:, b - 1]
            short = (l > 0) & (l < EPS_STAR)
            with np.errstate(divide="ignore", invalid="ignore"):
                log_ratio = np.where(short, np.log(EPS0_PRIME / np.where(short, l, 1.0)), np.nan)
            cols.append(CheckColumn("collar_sandwich_lower", f"boundary({b})", direction, 1.0,
                                    log_ratio, d[:, b - 1]))
            cols.append(CheckColumn("collar_sandwich_upper", f"boundary({b})", direction, 2.0,
                                    np.where(short, d[:, b - 1], np.nan), 2.0 * log_ratio))

    # ratio checks in both orientations
    for direction, flip in _ORIENTATIONS:
        A, B, SA, SB = _oriented(L1, L2, S1, S2, flip)
        mA, mB = (m2, m1) if flip else (m1, m2)
        dA, dB = (d2, d1) if flip else (d1, d2)
        with np.errstate(divide="ignore", invalid="ignore"):
            for c, (i, j) in enumerate(SEAM_PAIRS):
                label = f"seam({i},{j})"
                k = third(i, j)
                kp = ledger.K1prime if small else ledger.K3prime
                name = "seam_middle_ratio" if small else "seam_middle_ratio_general"
                lhs = mA[:, c] / mB[:, c]
                rhs = kp * np.maximum(1.0, _ratio(A[:, k - 1], B[:, k - 1]))
                cols.append(CheckColumn(name, label, direction, kp, lhs, rhs))
                for end, kd in ((i, ledger.K3dprime), (j, ledger.K3tprime)):
                    at_end = f"{label}@{end}"
                    both_short = (A[:, end - 1] < EPS_STAR) & (B[:, end - 1] < EPS_STAR)
                    lhs = np.where(both_short, dA[:, end - 1] / dB[:, end - 1], np.nan)
                    rhs = 2.0 * np.maximum(1.0, B[:, end - 1] / A[:, end - 1])
                    cols.append(CheckColumn("seam_collar_ratio", at_end, direction, 2.0, lhs, rhs))
                    if not small:
                        lhs = dA[:, end - 1] / (mB[:, c] + dB[:, end - 1])
                        rhs = kd * np.maximum(1.0, B[:, end - 1] / A[:, end - 1])
                        cols.append(CheckColumn("seam_collar_share", at_end, direction, kd, lhs, rhs))
            for c, i in enumerate((1, 2, 3), start=3):
                label = f"loop({i})"
                alpha, _ = _alpha_pair(A, i)
                kp = ledger.K2prime if small else ledger.K4prime
                name = "loop_middle_ratio" if small else "loop_middle_ratio_general"
                lhs = mA[:, c] / mB[:, c]
                rhs = kp * np.maximum(1.0, _ratio(A[rows, alpha], B[rows, alpha]))
                cols.append(CheckColumn(name, label, direction, kp, lhs, rhs))
                both_short = (A[:, i - 1] < EPS_STAR) & (B[:, i - 1] < EPS_STAR)
                lhs = np.where(both_short, dA[:, i - 1] / dB[:, i - 1], np.nan)
                rhs = 2.0 * np.maximum(1.0, B[:, i - 1] / A[:, i - 1])
                cols.append(CheckColumn("loop_collar_ratio", label, direction, 2.0, lhs, rhs))
                if not small:
                    half_b = mB[:, c] / 2.0
                    lhs = dA[:, i - 1] / (half_b + dB[:, i - 1])
                    rhs = ledger.K4dprime * np.maximum(1.0, B[:, i - 1] / A[:, i - 1])
                    cols.append(CheckColumn("loop_collar_share", label, direction, ledger.K4dprime, lhs, rhs))
    return cols


# --- single-pair API ---------------------------------------------------------


def _pair_batch(pair: MetricPair, ledger: ConstantLedger) -> Batch:
    return evaluate_batch([pair.P1.lengths], [pair.P2.lengths], ledger)


def _require_relative(pair: MetricPair, ledger: ConstantLedger):
    if not pair.in_relative_part(ledger.eps0):
        raise DomainError(f"pair is not in the eps0-relative part for eps0 = {ledger.eps0}")


def _select(batch, name, subject=None):
    return [c.record(0) for c in batch.columns
            if c.name == name and (subject is None or c.subject == subject) and not np.isnan(c.lhs[0])]


def ratio_sup_curves(pair: MetricPair) -> float:
    """Symmetrized sup of curve length ratios (the exponential of the length spectrum distance)."""
    lengths = [(a, b) for a, b in zip(pair.P1.lengths, pair.P2.lengths) if a > 0]
    if not lengths:
        raise DomainError("no essential closed curves: every boundary is a cusp")
    return max(max(a / b, b / a) for a, b in lengths)


def ratio_sup_arcs(pair: MetricPair) -> float:
    S1, _ = batch_spectrum([pair.P1.lengths])
    S2, _ = batch_spectrum([pair.P2.lengths])
    r = _sym_ratio(S1[0, ARC_COLUMNS], S2[0, ARC_COLUMNS])
    if np.all(np.isnan(r)):
        raise DomainError("no essential arcs on this pants")
    return float(np.nanmax(r))


def check_theorem_key(pair: MetricPair, ledger: ConstantLedger) -> CheckRecord:
    _require_relative(pair, ledger)
    ratio_sup_curves(pair), ratio_sup_arcs(pair)
    return _select(_pair_batch(pair, ledger), "theorem_key")[0]


def check_theorem_main(pair: MetricPair, ledger: ConstantLedger) -> CheckRecord:
    _require_relative(pair, ledger)
    ratio_sup_curves(pair), ratio_sup_arcs(pair)
    return _select(_pair_batch(pair, ledger), "theorem_main")[0]


def check_diff_boundary(pair: MetricPair, i: int, j: int, ledger: ConstantLedger) -> list[CheckRecord]:
    """Seam inequality in both orientations (X1/X2 and X2/X1)."""
    arc = ArcClass.seam(i, j)
    if any(P.is_cusp(arc.i) or P.is_cusp(arc.j) for P in (pair.P1, pair.P2)):
        raise DomainError(f"{arc.label()} ends on a cusp")
    return _select(_pair_batch(pair, ledger), "diff_boundary", arc.label())


def check_same_boundary(pair: MetricPair, i: int, ledger: ConstantLedger) -> list[CheckRecord]:
    """Loop inequality in both orientations (X1/X2 and X2/X1)."""
    arc = ArcClass.loop(i)
    if pair.P1.is_cusp(i):
        raise DomainError(f"{arc.label()} is based at a cusp")
    return _select(_pair_batch(pair, ledger), "same_boundary", arc.label())


PROPOSITION_NAMES = ("theorem_key", "theorem_main", "diff_boundary", "same_boundary")


def check_lemma_suite(pair: MetricPair, ledger: ConstantLedger) -> list[CheckRecord]:
    batch = _pair_batch(pair, ledger)
    return [c.record(0) for c in batch.columns
            if c.name not in PROPOSITION_NAMES and not np.isnan(c.lhs[0])]


def evaluate_pair(pair: MetricPair, ledger: ConstantLedger) -> RatioReport:
    """Full report for one pair: per-class ratios, suprema and every applicable check."""
    return _pair_batch(pair, ledger).report(0)


def one_sided_sups(L1, L2):
    """(sup over curves and arcs, sup over curves) of l_X2 / l_X1, row-wise."""
    S1, _ = batch_spectrum(L1)
    S2, _ = batch_spectrum(L2)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = S2 / S1
    return _nanmax_rows(r), _nanmax_rows(r[:, CURVE_COLUMNS])


def check_thick_part(pair: MetricPair, eps: float, ledger: ConstantLedger, K0: float | None = None) -> CheckRecord:
    """One-sided thick-part inequality sup_all(l2/l1) <= K0 * sup_curves(l2/l1).

    Without K0 the record reports the smallest K0 this pair needs as bound_used
    and passes whenever that is finite.
    """
    if not pair.in_thick_part(eps, ledger.eps0):
        raise DomainError(f"pair is not in the {eps}-thick {ledger.eps0}-relative part")
    all_sup, curve_sup = one_sided_sups([pair.P1.lengths], [pair.P2.lengths])
    lhs, curves = float(all_sup[0]), float(curve_sup[0])
    needed = lhs / curves
    if K0 is None:
        return CheckRecord("thick_part", "all", "X2/X1", needed, lhs, needed * curves, math.isfinite(needed))
    return CheckRecord("thick_part", "all", "X2/X1", K0, lhs, K0 * curves, lhs <= K0 * curves)


def log_uniform_lengths(u, lower, upper):
    return np.exp(math.log(lower) + u * (math.log(upper) - math.log(lower)))


def empirical_infimum_middle(eps0: float, samples: int, seed: int = 0) -> float:
    """Smallest middle segment over random cusp-free pants with log-uniform boundaries in [1e-6, eps0]."""
    if samples < 1:
        raise DomainError("need at least one sample")
    rng = np.random.default_rng(seed)
    L = log_uniform_lengths(rng.random((samples, 3)), SAMPLE_FLOOR, eps0)
    best = math.inf
    for start in range(0, samples, 1 << 15):
        best = min(best, float(np.nanmin(batch_middles(L[start:start + (1 << 15)]))))
    return best


# --- sweeps ------------------------------------------------------------------


@dataclass(frozen=True)
class SweepConfig:
    eps0: float
    n_pairs: int
    seed: int = 0
    thick_eps: float | None = None
    cusp_patterns: tuple = ("none", "one", "two")

    def __post_init__(self):
        if not self.eps0 > 0:
            raise DomainError("eps0 must be positive")
        if self.n_pairs < 0:
            raise DomainError("n_pairs must be nonnegative")
        if self.thick_eps is not None and not 0 < self.thick_eps <= self.eps0:
            raise DomainError("thick_eps must lie in (0, eps0]")
        for p in self.cusp_patterns:
            if p not in CUSP_PATTERNS:
                raise DomainError(f"unknown cusp pattern {p!r}")

    @property
    def lower(self) -> float:
        return SAMPLE_FLOOR if self.thick_eps is None else self.thick_eps


def sample_pair(config: SweepConfig, pattern_index: int, index: int):
    """Boundary lengths of one pair; its stream depends only on (seed, pattern, index)."""
    rng = np.random.default_rng([config.seed, pattern_index, index])
    L = log_uniform_lengths(rng.random(6), config.lower, config.eps0).reshape(2, 3)
    L[:, list(CUSP_PATTERNS[config.cusp_patterns[pattern_index]])] = 0.0
    return L[0], L[1]


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


class ReportView(Sequence):
    """RatioReport per pair, built on access from the batch arrays."""

    def __init__(self, batch: Batch, pair_ids):
        self._batch = batch
        self._ids = pair_ids

    def __len__(self):
        return len(self._batch)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        if index < 0:
            index += len(self)
        if not 0 <= index < len(self):
            raise IndexError(index)
        return self._batch.report(index, int(self._ids[index]))


@dataclass
class SweepResult:
    config: SweepConfig
    ledger: ConstantLedger
    batch: Batch
    pair_ids: np.ndarray
    patterns: np.ndarray
    summary: dict
    thick_ratio: np.ndarray | None = None

    @property
    def reports(self) -> ReportView:
        return ReportView(self.batch, self.pair_ids)

    def pair_passed(self) -> np.ndarray:
        ok = np.array([e is None for e in self.batch.errors], dtype=bool)
        for col in self.batch.columns:
            ok &= ~col.applicable | col.passed
        return ok


def _column_passed(batch, name):
    ok = np.ones(len(batch), dtype=bool)
    for col in batch.columns:
        if col.name == name:
            ok &= ~col.applicable | col.passed
    return ok


def _concat_batches(parts: list[Batch]) -> Batch:
    first = parts[0]
    columns = []
    for c, col in enumerate(first.columns):
        pieces = [p.columns[c] for p in parts]
        extra = None if col.extra_ok is None else np.concatenate([p.extra_ok for p in pieces])
        columns.append(CheckColumn(col.name, col.subject, col.direction, col.bound_used,
                                   np.concatenate([p.lhs for p in pieces]),
                                   np.concatenate([p.rhs for p in pieces]), extra))
    cat = lambda attr: np.concatenate([getattr(p, attr) for p in parts])  # noqa: E731
    return Batch(cat("L1"), cat("L2"), cat("S1"), cat("S2"), cat("ratios"), cat("sup_curves"),
                 cat("sup_arcs"), cat("sup_all"), columns, sum((p.errors for p in parts), []))


def sweep(config: SweepConfig) -> SweepResult:
    """Randomized verification over the eps0-relative part (or its thick part).

    n_pairs pairs are drawn for each cusp pattern; pair ids run over all of
    them. Output is a pure function of config regardless of thread count.
    """
    ledger = build_ledger(config.eps0)
    jobs = [(p, i) for p in range(len(config.cusp_patterns)) for i in range(config.n_pairs)]
    pair_ids = np.arange(len(jobs))
    patterns = np.array([config.cusp_patterns[p] for p, _ in jobs], dtype=object)
    L1 = np.zeros((len(jobs), 3))
    L2 = np.zeros((len(jobs), 3))
    for row, (p, i) in enumerate(jobs):
        L1[row], L2[row] = sample_pair(config, p, i)

    chunks = [slice(s, min(s + _CHUNK, len(jobs))) for s in range(0, len(jobs), _CHUNK)]
    if chunks:
        with ThreadPoolExecutor(max_workers=min(_thread_count(), len(chunks))) as pool:
            parts = list(pool.map(lambda sl: evaluate_batch(L1[sl], L2[sl], ledger), chunks))
        batch = _concat_batches(parts)
    else:
        batch = evaluate_batch(L1, L2, ledger)

    thick_ratio = None
    if config.thick_eps is not None and len(jobs):
        all_sup, curve_sup = one_sided_sups(L1, L2)
        thick_ratio = all_sup / curve_sup
    result = SweepResult(config, ledger, batch, pair_ids, patterns, {}, thick_ratio)
    result.summary = summarize(result)
    return result


def summarize(result: SweepResult) -> dict:
    batch, ledger, config = result.batch, result.ledger, result.config
    n = len(batch)
    errors = np.array([e is not None for e in batch.errors], dtype=bool)
    checks = {}
    for col in batch.columns:
        entry = checks.setdefault(col.name, {"applicable": 0, "passed": 0, "max_excess": -math.inf})
        app = col.applicable
        entry["applicable"] += int(app.sum())
        entry["passed"] += int((app & col.passed).sum())
        if app.any():
            with np.errstate(invalid="ignore"):
                entry["max_excess"] = max(entry["max_excess"], float(np.nanmax((col.lhs - col.rhs)[app])))
    for entry in checks.values():
        if entry["max_excess"] == -math.inf:
            entry["max_excess"] = None

    key_ok = _column_passed(batch, "theorem_key") & ~errors
    main_ok = _column_passed(batch, "theorem_main") & ~errors
    summary = {
        "eps0": config.eps0,
        "seed": config.seed,
        "n_pairs": n,
        "cusp_patterns": list(config.cusp_patterns),
        "sampling": {"law": "log-uniform", "lower": config.lower, "upper": config.eps0},
        "ledger_K": ledger.K,
        "ledger_C": ledger.C,
        "theorem_key_pass_rate": float(key_ok.mean()) if n else 1.0,
        "theorem_main_pass_rate": float(main_ok.mean()) if n else 1.0,
        "numeric_failures": int(errors.sum()),
        "checks": checks,
        "all_passed": bool(result.pair_passed().all()),
        "empirical_min_K": 1.0,
        "empirical_min_C": 0.0,
        "worst_case_inputs": None,
    }
    if n:
        # sup_all / sup_curves = max(1, sup_arcs / sup_curves); rank by the latter
        arc_over_curve = np.where(errors, np.nan, batch.sup_arcs / batch.sup_curves)
        if not np.all(np.isnan(arc_over_curve)):
            worst = int(np.nanargmax(arc_over_curve))
            k_emp = max(1.0, float(arc_over_curve[worst]))
            summary["max_arc_to_curve_ratio"] = float(arc_over_curve[worst])
            summary["empirical_min_K"] = k_emp
            summary["empirical_min_C"] = math.log(k_emp)
            summary["worst_case_inputs"] = {
                "pair_id": int(result.pair_ids[worst]),
                "P1": batch.L1[worst].tolist(),
                "P2": batch.L2[worst].tolist(),
                "sup_curves": float(batch.sup_curves[worst]),
                "sup_arcs": float(batch.sup_arcs[worst]),
            }
    if config.thick_eps is not None:
        thick = {"eps": config.thick_eps, "empirical_K0": None, "worst_case_inputs": None}
        if result.thick_ratio is not None and not np.all(np.isnan(result.thick_ratio)):
            worst = int(np.nanargmax(result.thick_ratio))
            thick["empirical_K0"] = float(result.thick_ratio[worst])
            thick["worst_case_inputs"] = {"pair_id": int(result.pair_ids[worst]),
                                          "P1": batch.L1[worst].tolist(), "P2": batch.L2[worst].tolist()}
        summary["thick_part"] = thick
    return summary


SWEEP_CSV_COLUMNS = ("pair_id", "l1a", "l2a", "l3a", "l1b", "l2b", "l3b", "sup_curves", "sup_arcs",
                     "theorem_key_pass", "theorem_main_pass", "empirical_K")


def sweep_rows(result: SweepResult):
    batch = result.batch
    key_ok = _column_passed(batch, "theorem_key")
    main_ok = _column_passed(batch, "theorem_main")
    for row in range(len(batch)):
        yield (int(result.pair_ids[row]), *batch.L1[row].tolist(), *batch.L2[row].tolist(),
               float(batch.sup_curves[row]), float(batch.sup_arcs[row]),
               bool(key_ok[row]), bool(main_ok[row]),
               float(batch.sup_all[row] / batch.sup_curves[row]))


def summary_to_json(summary: dict) -> str:
    return json.dumps(summary, indent=2)
