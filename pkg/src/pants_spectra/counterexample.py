"""Boundary-halving family: curve ratios shrink while arc ratios blow up.

member(n) has every boundary length divided by 2**n. This is a model of a
metric-decreasing extension, not the literal construction: on a pants the
only closed curves are the boundaries, so the one-sided curve ratio
l_n / l_0 is exactly 2**-n, while every arc has to cross a collar that widens
by about ln 2 at each end per halving.
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError
from .ledger import ConstantLedger
from .pants import (
    ARC_COLUMNS, CLASSES, CURVE_COLUMNS, ArcClass, PantsMetric, batch_spectrum, column_of,
)
from .verify import evaluate_batch

# The batch kernels agree with a 60-digit reference to ~1e-16 relative down to
# lengths of 1e-15; this floor keeps a wide margin while allowing N = 30 from 0.3.
FAMILY_MIN_LENGTH = 1e-12
INCREMENT_LIMIT = 2.0 * math.log(2.0)
INCREMENT_TOL = 0.01
ASYMPTOTIC_FROM = 10

TABLE_COLUMNS = ("n", "l", "curve_sup", "arc_sup", "seam_length", "loop_length")


@dataclass(frozen=True)
class HalvingFamily:
    base: PantsMetric

    def __post_init__(self):
        if any(self.base.is_cusp(i) for i in (1, 2, 3)):
            raise DomainError("the halving family needs a base without cusps")

    def member(self, n: int) -> PantsMetric:
        if n < 0:
            raise DomainError("member index must be nonnegative")
        return self.base.scaled(2.0 ** -n)

    def max_steps(self, floor: float = FAMILY_MIN_LENGTH) -> int:
        return math.floor(math.log2(min(self.base.lengths) / floor))

    def lengths(self, N: int) -> np.ndarray:
        """Boundary lengths of members 0..N, shape (N + 1, 3)."""
        self.require_steps(N)
        return np.array(self.base.lengths) * np.exp2(-np.arange(N + 1.0))[:, None]

    def require_steps(self, N: int):
        if N < 1:
            raise DomainError("need N >= 1")
        if N > self.max_steps():
            raise DomainError(
                f"boundary lengths fall below {FAMILY_MIN_LENGTH:g} after {N} halvings; "
                f"max feasible N for base {self.base} is {self.max_steps()}"
            )

    def first_thin_member(self, eps: float) -> int:
        """Smallest n whose member has a boundary shorter than eps."""
        shortest = min(self.base.lengths)
        return max(0, math.floor(math.log2(shortest / eps)) + 1)


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    l: float
    curve_sup: float
    arc_sup: float
    seam_length: float
    loop_length: float


def _family_spectra(family: HalvingFamily, N: int):
    L = family.lengths(N)
    S, _ = batch_spectrum(L)
    return L, S


def divergence_table(base: PantsMetric, N: int) -> list[DivergenceRow]:
    """One-sided sups of l_{X_n} / l_{X_0} over curves and over arcs for n = 0..N.

    l is the longest boundary of member n; seam_length and loop_length track
    Seam(1,2) and Loop(1).
    """
    family = HalvingFamily(base)
    L, S = _family_spectra(family, N)
    ratio = S / S[0]
    curve_sup = ratio[:, CURVE_COLUMNS].max(axis=1)
    arc_sup = ratio[:, ARC_COLUMNS].max(axis=1)
    seam_col = column_of(ArcClass.seam(1, 2))
    loop_col = column_of(ArcClass.loop(1))
    return [
        DivergenceRow(n, float(L[n].max()), float(curve_sup[n]), float(arc_sup[n]),
                      float(S[n, seam_col]), float(S[n, loop_col]))
        for n in range(N + 1)
    ]


@dataclass
class GrowthReport:
    base: tuple
    N: int
    insufficient_data: bool
    increments: dict
    max_deviation: float | None
    fitted_slope: float | None
    passed: bool | None

    def to_dict(self):
        return asdict(self)


def growth_rate_check(base: PantsMetric, N: int) -> GrowthReport:
    """Per-halving increments of all six arc lengths against 2 ln 2, from n = 10 on.

    With N <= 10 there is no increment in the asymptotic range; the report
    then carries insufficient_data and no verdict.
    """
    family = HalvingFamily(base)
    _, S = _family_spectra(family, N)
    arcs = S[:, ARC_COLUMNS]
    steps = np.diff(arcs, axis=0)
    increments = {cls.label(): steps[:, c].tolist() for c, cls in enumerate(CLASSES[3:])}
    if N <= ASYMPTOTIC_FROM:
        return GrowthReport(base.lengths, N, True, increments, None, None, None)
    tail = steps[ASYMPTOTIC_FROM:]
    deviation = float(np.abs(tail - INCREMENT_LIMIT).max())
    ns = np.arange(ASYMPTOTIC_FROM, N + 1)
    slope = float(np.polyfit(ns, arcs[ASYMPTOTIC_FROM:, 0], 1)[0])
    return GrowthReport(base.lengths, N, False, increments, deviation, slope, deviation <= INCREMENT_TOL)


def theorem_key_on_family(base: PantsMetric, N: int, ledger: ConstantLedger):
    """Symmetrized key inequality on every (member(n), member(0)) pair: list of (n, CheckRecord)."""
    family = HalvingFamily(base)
    L = family.lengths(N)
    if L[0].max() > ledger.eps0:
        raise DomainError(f"base {base} is not in the eps0-relative part for eps0 = {ledger.eps0}")
    batch = evaluate_batch(L, np.repeat(L[:1], N + 1, axis=0), ledger)
    key = next(c for c in batch.columns if c.name == "theorem_key")
    return [(n, key.record(n)) for n in range(N + 1)]


def table_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_COLUMNS)
    for r in rows:
        writer.writerow([r.n] + [f"{getattr(r, c):.17g}" for c in TABLE_COLUMNS[1:]])
    return buf.getvalue()


def table_to_json(base: PantsMetric, rows) -> str:
    return json.dumps({"base": list(base.lengths), "rows": [asdict(r) for r in rows]}, indent=2)


def table_from_json(text: str):
    data = json.loads(text)
    return PantsMetric(*data["base"]), [DivergenceRow(**r) for r in data["rows"]]
