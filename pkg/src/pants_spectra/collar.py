"""Collars around boundary geodesics and the inner-boundary rule.

An equidistant curve at distance d from a boundary geodesic of length l has
length l*cosh(d). Boundaries shorter than EPS_STAR get an inner boundary of
length EPS0_PRIME; longer ones are their own inner boundary.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .hyptrig import LN2, _finish, _prepare, acosh_stable, asinh_stable

EPS0_PRIME = math.log(1.0 + math.sqrt(2.0))
EPS_STAR = EPS0_PRIME / math.e
C0_PRIME = EPS0_PRIME / 2.0


@dataclass(frozen=True)
class CollarSpec:
    base_length: float
    offset: float
    inner_length: float

    def __post_init__(self):
        if not self.base_length > 0 or not math.isfinite(self.base_length):
            raise DomainError("collar base length must be positive and finite")
        if not self.offset >= 0:
            raise DomainError("collar offset must be nonnegative")
        expected = self.base_length * math.cosh(self.offset)
        if abs(self.inner_length - expected) > 1e-12 * expected:
            raise DomainError("inner length must equal base_length * cosh(offset)")

    @classmethod
    def at_offset(cls, base_length, offset):
        return cls(base_length, offset, offset_length(base_length, offset))

    @classmethod
    def with_inner_length(cls, base_length, inner_length):
        return cls(base_length, offset_for_target(base_length, inner_length), inner_length)


def eta(x):
    """Collar width asinh(1/sinh(x/2)) certified by the Collar Lemma."""
    (x,), scalar = _prepare(x)
    if not np.all(x > 0):
        raise DomainError("eta needs a positive length")
    return _finish(asinh_stable(1.0 / np.sinh(x / 2.0)), scalar)


collar_admissible_width = eta


def offset_length(l, d):
    (l, d), scalar = _prepare(l, d)
    if not np.all(l > 0):
        raise DomainError("base length must be positive")
    if not np.all(d >= 0):
        raise DomainError("offset must be nonnegative")
    return _finish(l * np.cosh(d), scalar)


def offset_for_target(l, target):
    """Distance from a geodesic of length l to its equidistant curve of length target."""
    (l, target), scalar = _prepare(l, target)
    if not np.all(l > 0):
        raise DomainError("base length must be positive")
    if not np.all(target >= l):
        raise DomainError("target length must be at least the base length")
    return _finish(acosh_stable(target / l), scalar)


def inner_boundary_offset(l, ledger=None):
    """Width of the collar cut off by the inner boundary C for a boundary of length l.

    Strictly below eps_star the inner boundary has length eps0_prime; at or
    above it the boundary itself is used and the offset is 0. Cusps
    (l == 0) are accepted by the array path and get offset 0.
    """
    eps_star = EPS_STAR if ledger is None else ledger.eps_star
    eps0_prime = EPS0_PRIME if ledger is None else ledger.eps0_prime
    (l,), scalar = _prepare(l)
    if scalar and not l > 0:
        raise DomainError("boundary length must be positive")
    if not np.all(l >= 0):
        raise DomainError("boundary length must be nonnegative")
    short = (l > 0) & (l < eps_star)
    safe = np.where(short, l, 1.0)
    with np.errstate(over="ignore"):
        ratio = np.where(short, eps0_prime / safe, 1.0)
    # acosh(x) = ln(2x) to double precision once x > 1e8; also avoids overflow of the ratio
    huge = ratio > 1e8
    offset = np.where(huge, LN2 + math.log(eps0_prime) - np.log(safe), acosh_stable(np.where(huge, 1.0, ratio)))
    return _finish(np.where(short, offset, 0.0), scalar)
