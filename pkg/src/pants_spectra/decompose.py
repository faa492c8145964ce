"""Split arcs into collar segments and a middle segment.

An arc leaves each endpoint boundary perpendicularly, so the piece inside the
collar cut off by the inner boundary has length equal to the collar width
(inner_boundary_offset). What is left over is the middle segment.
"""
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .collar import C0_PRIME, EPS_STAR, inner_boundary_offset
from .errors import DomainError
from .pants import (
    ArcClass, PantsMetric, SEAM_PAIRS, arc_length, batch_spectrum,
)

SEAM_CASES = {(True, True): "A", (False, True): "B", (True, False): "C", (False, False): "D"}


@dataclass(frozen=True)
class Decomposition:
    """Collar segments at the two ends of an arc and the middle segment.

    For a seam, middle is the segment between the two inner boundaries. For a
    loop both collar segments have the same length and middle is the full
    segment between them (twice the half-middle used in the hexagon picture).
    """

    arc: ArcClass
    total: float
    d_start: float
    d_end: float
    middle: float
    case_tag: str

    def to_dict(self):
        data = asdict(self)
        data["arc"] = {"kind": self.arc.kind, "i": self.arc.i, "j": self.arc.j}
        return data

    @classmethod
    def from_dict(cls, data):
        arc = data["arc"]
        return cls(ArcClass(arc["kind"], arc["i"], arc["j"]), data["total"], data["d_start"],
                   data["d_end"], data["middle"], data["case_tag"])

    def to_json(self):
        return json.dumps(self.to_dict())


def decompose_seam(P: PantsMetric, i: int, j: int, ledger=None) -> Decomposition:
    arc = ArcClass.seam(i, j)
    total = arc_length(P, arc)
    d_start = inner_boundary_offset(P.length(arc.i), ledger)
    d_end = inner_boundary_offset(P.length(arc.j), ledger)
    tag = SEAM_CASES[(d_start > 0, d_end > 0)]
    return Decomposition(arc, total, d_start, d_end, total - d_start - d_end, tag)


def decompose_loop(P: PantsMetric, i: int, ledger=None) -> Decomposition:
    arc = ArcClass.loop(i)
    total = arc_length(P, arc)
    d = inner_boundary_offset(P.length(i), ledger)
    return Decomposition(arc, total, d, d, total - 2.0 * d, "A" if d > 0 else "B")


def decompose(P: PantsMetric, arc: ArcClass, ledger=None) -> Decomposition:
    if arc.kind == "seam":
        return decompose_seam(P, arc.i, arc.j, ledger)
    return decompose_loop(P, arc.i, ledger)


def collar_segment_bounds(l: float) -> tuple[float, float]:
    """(ln(c0'/c), 2 ln(c0'/c)) with c = l/2: brackets the collar segment acosh(eps0'/l)."""
    if not 0 < l < EPS_STAR:
        raise DomainError(f"collar segment bounds need 0 < l < {EPS_STAR}, got {l!r}")
    lower = math.log(C0_PRIME) - math.log(l / 2.0)
    return lower, 2.0 * lower


def batch_offsets(lengths):
    """Collar segment length at every boundary, shape (n, 3); 0 for cusps and long boundaries."""
    return inner_boundary_offset(np.asarray(lengths, dtype=float).reshape(-1, 3))


def batch_middles(lengths, spectrum=None):
    """Middle segments of all six arcs, shape (n, 6) in seam-then-loop order (NaN if absent)."""
    L = np.asarray(lengths, dtype=float).reshape(-1, 3)
    if spectrum is None:
        spectrum, _ = batch_spectrum(L)
    d = batch_offsets(L)
    mid = np.empty((L.shape[0], 6))
    for col, (i, j) in enumerate(SEAM_PAIRS):
        mid[:, col] = spectrum[:, 3 + col] - d[:, i - 1] - d[:, j - 1]
    for col, i in enumerate((1, 2, 3)):
        mid[:, 3 + col] = spectrum[:, 6 + col] - 2.0 * d[:, i - 1]
    return mid


def middle_infimum_grid(eps0: float, lower: float = 1e-9, points: int = 40) -> float:
    """Smallest middle segment over a log grid of boundary lengths in [lower, eps0], cusps included."""
    grid = np.concatenate([[0.0], np.geomspace(lower, eps0, points)])
    a, b, c = np.meshgrid(grid, grid, grid, indexing="ij")
    L = np.stack([a.ravel(), b.ravel(), c.ravel()], axis=1)
    L = L[np.any(L > 0, axis=1)]
    return float(np.nanmin(batch_middles(L)))

