"""Length spectrum of a hyperbolic pair of pants.

A pants is fixed by its three boundary lengths; a zero length is a cusp. The
essential simple closed curves are the non-cusp boundaries, and the essential
arcs are three seams (common perpendiculars between two boundaries) and three
loops (arcs from one boundary back to itself around another boundary).

Cutting along the seams gives two congruent right-angled hexagons with
alternate sides l1/2, l2/2, l3/2. Seam lengths come from the hexagon
identity. The loop at boundary i cuts one hexagon into two right-angled
pentagons, which split the half-boundary l_i/2 into pieces t_j + t_k with

    cosh(l_j/2) = sinh(t_j) sinh(h),    cosh(l_k/2) = sinh(t_k) sinh(h),

where h is half the loop length. The split is found by bisection plus Newton.
"""
import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConvergenceError, CuspError, DomainError
from .hyptrig import asinh_of_exp, hexagon_side, log_cosh, log_sinh

MIN_LENGTH = 1e-9
MAX_LENGTH = 700.0
LOOP_RESIDUAL_TOL = 1e-9

_BISECT_STEPS = 64
_NEWTON_STEPS = 5
# lower end of the log-space bracket for the short piece: x = (l_i/2) * e**-460
_BRACKET_DEPTH = 460.0


@dataclass(frozen=True)
class PantsMetric:
    l1: float
    l2: float
    l3: float

    def __post_init__(self):
        for name in ("l1", "l2", "l3"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0:
                raise DomainError(f"{name} must be finite and >= 0, got {value!r}")
            object.__setattr__(self, name, value)

    @classmethod
    def parse(cls, text: str) -> "PantsMetric":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise DomainError(f"expected 'l1,l2,l3', got {text!r}")
        try:
            return cls(*(float(p) for p in parts))
        except ValueError as exc:
            raise DomainError(f"bad boundary length in {text!r}") from exc

    @property
    def lengths(self) -> tuple[float, float, float]:
        return (self.l1, self.l2, self.l3)

    def length(self, i: int) -> float:
        return self.lengths[_index(i)]

    def is_cusp(self, i: int) -> bool:
        return self.length(i) == 0.0

    def cusp_pattern(self) -> tuple[bool, bool, bool]:
        return tuple(l == 0.0 for l in self.lengths)

    def permuted(self, perm) -> "PantsMetric":
        """Relabel boundaries: new boundary n is old boundary perm[n-1]."""
        return PantsMetric(*(self.length(p) for p in perm))

    def scaled(self, factor: float) -> "PantsMetric":
        return PantsMetric(*(l * factor for l in self.lengths))

    def __str__(self):
        return ",".join(repr(l) for l in self.lengths)


@dataclass(frozen=True, order=True)
class CurveClass:
    i: int

    def __post_init__(self):
        _index(self.i)

    @property
    def kind(self):
        return "curve"

    def label(self):
        return f"curve({self.i})"


@dataclass(frozen=True, order=True)
class ArcClass:
    """Seam(i, j) for i != j, stored with i < j; Loop(i) has j == 0."""

    kind: str
    i: int
    j: int = 0

    def __post_init__(self):
        _index(self.i)
        if self.kind == "seam":
            _index(self.j)
            if self.i == self.j:
                raise DomainError("a seam joins two distinct boundaries")
            if self.i > self.j:
                i, j = self.j, self.i
                object.__setattr__(self, "i", i)
                object.__setattr__(self, "j", j)
        elif self.kind == "loop":
            if self.j != 0:
                raise DomainError("a loop has a single boundary index")
        else:
            raise DomainError(f"unknown arc kind {self.kind!r}")

    @classmethod
    def seam(cls, i, j):
        return cls("seam", i, j)

    @classmethod
    def loop(cls, i):
        return cls("loop", i)

    def label(self):
        return f"seam({self.i},{self.j})" if self.kind == "seam" else f"loop({self.i})"


def _index(i) -> int:
    if i not in (1, 2, 3):
        raise DomainError(f"boundary index must be 1, 2 or 3, got {i!r}")
    return i - 1


def third(i: int, j: int) -> int:
    return 6 - i - j


def others(i: int) -> tuple[int, int]:
    return tuple(k for k in (1, 2, 3) if k != i)


# canonical spectrum order: curves 1..3, seams (1,2),(1,3),(2,3), loops 1..3
CLASSES = (
    CurveClass(1), CurveClass(2), CurveClass(3),
    ArcClass.seam(1, 2), ArcClass.seam(1, 3), ArcClass.seam(2, 3),
    ArcClass.loop(1), ArcClass.loop(2), ArcClass.loop(3),
)
CURVE_COLUMNS = slice(0, 3)
SEAM_COLUMNS = slice(3, 6)
LOOP_COLUMNS = slice(6, 9)
ARC_COLUMNS = slice(3, 9)
SEAM_PAIRS = ((1, 2), (1, 3), (2, 3))


def column_of(cls) -> int:
    return CLASSES.index(cls)


# --- array kernels ---------------------------------------------------------


def seam_lengths(li, lj, lk):
    """Seam length between boundaries of lengths li, lj (both > 0), third boundary lk."""
    return hexagon_side(np.asarray(li, float) / 2, np.asarray(lj, float) / 2, np.asarray(lk, float) / 2)


def loop_solve(li, lj, lk):
    """Solve the pentagon pair for the loop at a boundary of length li.

    Returns (t_j, t_k, h, residual): the pieces of li/2 facing boundaries j
    and k, half the loop length, and the larger relative residual of the two
    pentagon equations. Arrays in, arrays out.
    """
    li, lj, lk = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (li, lj, lk)))
    half = li / 2.0
    log_a = log_cosh(lj / 2.0)
    log_b = log_cosh(lk / 2.0)
    lo_log = np.minimum(log_a, log_b)
    hi_log = np.maximum(log_a, log_b)
    gap = lo_log - hi_log  # <= 0

    # the piece facing the shorter boundary is the short one, x in (0, half/2]
    def f(x):
        return log_sinh(x) - log_sinh(half - x) - gap

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        u_lo = np.log(half) - _BRACKET_DEPTH
        u_hi = np.log(half / 2.0)
        for _ in range(_BISECT_STEPS):
            u_mid = 0.5 * (u_lo + u_hi)
            positive = f(np.exp(u_mid)) > 0
            u_hi = np.where(positive, u_mid, u_hi)
            u_lo = np.where(positive, u_lo, u_mid)
        x = np.exp(0.5 * (u_lo + u_hi))
        for _ in range(_NEWTON_STEPS):
            slope = 1.0 / np.tanh(x) + 1.0 / np.tanh(half - x)
            step = f(x) / slope
            x_new = np.clip(x - step, 0.5 * x, half / 2.0)
            x = np.where(np.isfinite(x_new), x_new, x)
        y = half - x
        log_sinh_h = lo_log - log_sinh(x)
        h = asinh_of_exp(log_sinh_h)
        log_sh = log_sinh(h)
        res_short = np.abs(np.expm1(log_sinh(x) + log_sh - lo_log))
        res_long = np.abs(np.expm1(log_sinh(y) + log_sh - hi_log))
    j_short = log_a <= log_b
    t_j = np.where(j_short, x, y)
    t_k = np.where(j_short, y, x)
    return t_j, t_k, h, np.maximum(res_short, res_long)


def loop_lengths(li, lj, lk):
    """Loop arc lengths (arrays) and the pentagon residuals at the solved split."""
    _, _, h, residual = loop_solve(li, lj, lk)
    return 2.0 * h, residual


def batch_spectrum(lengths):
    """Spectrum of many pants at once.

    lengths: (n, 3) array of boundary lengths. Returns (spectrum, residual):
    spectrum is (n, 9) in CLASSES order with NaN for classes that do not exist
    (cusps); residual is (n, 3), the loop pentagon residuals (NaN if no loop).
    """
    L = np.asarray(lengths, dtype=float).reshape(-1, 3)
    n = L.shape[0]
    out = np.full((n, 9), np.nan)
    residual = np.full((n, 3), np.nan)
    live = L > 0
    out[:, CURVE_COLUMNS] = np.where(live, L, np.nan)
    for col, (i, j) in enumerate(SEAM_PAIRS, start=3):
        k = third(i, j)
        ok = live[:, i - 1] & live[:, j - 1]
        if np.any(ok):
            out[ok, col] = seam_lengths(L[ok, i - 1], L[ok, j - 1], L[ok, k - 1])
    for col, i in enumerate((1, 2, 3), start=6):
        j, k = others(i)
        ok = live[:, i - 1]
        if np.any(ok):
            length, res = loop_lengths(L[ok, i - 1], L[ok, j - 1], L[ok, k - 1])
            out[ok, col] = length
            residual[ok, i - 1] = res
    return out, residual


# --- scalar operations -----------------------------------------------------


def _check_range(P: PantsMetric):
    for n, l in enumerate(P.lengths, start=1):
        if l != 0.0 and not (MIN_LENGTH <= l <= MAX_LENGTH):
            raise DomainError(
                f"boundary {n} has length {l!r}; supported range is 0 (cusp) or [{MIN_LENGTH}, {MAX_LENGTH}]"
            )


def curve_length(P: PantsMetric, c) -> float:
    i = c.i if isinstance(c, CurveClass) else c
    if P.is_cusp(i):
        raise CuspError(f"boundary {i} is a cusp; its peripheral curve is not essential")
    return P.length(i)


def seam_length(P: PantsMetric, i: int, j: int) -> float:
    if i == j:
        raise DomainError("a seam joins two distinct boundaries")
    _index(i), _index(j)
    if P.is_cusp(i) or P.is_cusp(j):
        raise CuspError("a seam cannot end on a cusp")
    _check_range(P)
    return float(seam_lengths(P.length(i), P.length(j), P.length(third(i, j))))


def loop_pieces(P: PantsMetric, i: int):
    """(t_j, t_k, h) for the loop at boundary i, with j < k the other two."""
    if P.is_cusp(i):
        raise CuspError("a loop cannot be based at a cusp")
    _check_range(P)
    j, k = others(i)
    t_j, t_k, h, residual = loop_solve(P.length(i), P.length(j), P.length(k))
    if not residual <= LOOP_RESIDUAL_TOL:
        raise ConvergenceError(
            f"loop at boundary {i} of {P}: pentagon residual {float(residual):.3g} exceeds {LOOP_RESIDUAL_TOL}"
        )
    return float(t_j), float(t_k), float(h)


def loop_arc_length(P: PantsMetric, i: int) -> float:
    return 2.0 * loop_pieces(P, i)[2]


def arc_length(P: PantsMetric, a: ArcClass) -> float:
    if a.kind == "seam":
        return seam_length(P, a.i, a.j)
    return loop_arc_length(P, a.i)


def class_length(P: PantsMetric, cls) -> float:
    if isinstance(cls, CurveClass):
        return curve_length(P, cls)
    return arc_length(P, cls)


def valid_classes(P: PantsMetric) -> list:
    cusp = P.cusp_pattern()
    keep = []
    for cls in CLASSES:
        if isinstance(cls, CurveClass) or cls.kind == "loop":
            ok = not cusp[cls.i - 1]
        else:
            ok = not cusp[cls.i - 1] and not cusp[cls.j - 1]
        if ok:
            keep.append(cls)
    return keep


def spectrum(P: PantsMetric) -> list:
    """All essential curve and arc classes of P with their lengths, canonical order."""
    classes = valid_classes(P)
    if not classes:
        return []
    _check_range(P)
    values, residual = batch_spectrum([P.lengths])
    bad = residual[0] > LOOP_RESIDUAL_TOL
    if np.any(bad):
        raise ConvergenceError(f"loop pentagon residual too large for {P}")
    return [(cls, float(values[0, column_of(cls)])) for cls in classes]


# --- serialization ---------------------------------------------------------

SPECTRUM_CSV_COLUMNS = ("class_kind", "index_a", "index_b", "length")


def spectrum_rows(entries: Iterable) -> list[dict]:
    rows = []
    for cls, length in entries:
        rows.append({
            "class_kind": cls.kind,
            "index_a": cls.i,
            "index_b": cls.j if cls.kind == "seam" else None,
            "length": length,
        })
    return rows


def class_from_row(row: dict):
    kind = row["class_kind"]
    a = int(row["index_a"])
    if kind == "curve":
        return CurveClass(a)
    if kind == "seam":
        return ArcClass.seam(a, int(row["index_b"]))
    return ArcClass.loop(a)


def spectrum_to_json(P: PantsMetric, entries) -> str:
    return json.dumps({"metric": list(P.lengths), "spectrum": spectrum_rows(entries)}, indent=2)


def spectrum_from_json(text: str):
    data = json.loads(text)
    P = PantsMetric(*data["metric"])
    return P, [(class_from_row(r), float(r["length"])) for r in data["spectrum"]]


def spectrum_to_csv(entries) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SPECTRUM_CSV_COLUMNS)
    for row in spectrum_rows(entries):
        writer.writerow([
            row["class_kind"], row["index_a"],
            "" if row["index_b"] is None else row["index_b"],
            format(row["length"], ".17g"),
        ])
    return buf.getvalue()
