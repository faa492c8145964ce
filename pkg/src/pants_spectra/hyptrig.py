"""Right-angled pentagon/hexagon identities and stable inverse hyperbolic functions.

Every function accepts Python floats or numpy arrays (broadcast together) and
returns a float for scalar input, an ndarray otherwise.
"""
import math

import numpy as np

from .errors import DomainError

LN2 = math.log(2.0)

# cosh/sinh arguments above this go through logarithms (exp overflows near 709)
LOG_DOMAIN_ARG = 350.0
# sinh arguments below this go through logarithms as well
SMALL_SINH_ARG = 1e-8
# acosh(x) = ln(2x) beyond this point, to double precision
ACOSH_LARGE = 1e8
# |sinh a sinh b - 1| below this is a degenerate (zero-length) pentagon side
PENTAGON_DEGENERATE_TOL = 1e-14


def _prepare(*values):
    arrays = [np.asarray(v, dtype=float) for v in values]
    scalar = all(a.ndim == 0 for a in arrays)
    return arrays, scalar


def _finish(x, scalar):
    return float(x) if scalar else x


def _require_finite(x, name):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"{name} must be finite")


def asinh_stable(x):
    """Inverse hyperbolic sine, odd and accurate for tiny and huge |x|."""
    (x,), scalar = _prepare(x)
    ax = np.abs(x)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        moderate = np.log1p(ax + ax * ax / (1.0 + np.sqrt(1.0 + ax * ax)))
        large = np.log(ax) + LN2
    out = np.copysign(np.where(ax > ACOSH_LARGE, large, moderate), x)
    return _finish(out, scalar)


def acosh_stable(x):
    """Inverse hyperbolic cosine on [1, inf); ln(2x) branch for x > 1e8."""
    (x,), scalar = _prepare(x)
    if not np.all(x >= 1.0):
        raise DomainError("acosh requires x >= 1")
    with np.errstate(over="ignore", invalid="ignore"):
        t = x - 1.0
        moderate = np.log1p(t + np.sqrt(t * (x + 1.0)))
        large = np.log(x) + LN2
    return _finish(np.where(x > ACOSH_LARGE, large, moderate), scalar)


def log_sinh(x):
    """ln sinh(x) for x > 0 without overflow."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x - LN2 + np.log(-np.expm1(-2.0 * x))


def log_cosh(x):
    """ln cosh(x) without overflow."""
    ax = np.abs(np.asarray(x, dtype=float))
    return ax - LN2 + np.log1p(np.exp(-2.0 * ax))


def acosh_of_exp(u):
    """acosh(e**u) for u >= 0."""
    u = np.asarray(u, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        t = np.expm1(np.minimum(u, 30.0))
        near = np.log1p(t + np.sqrt(t * (t + 2.0)))
        far = u + np.log1p(np.sqrt(-np.expm1(-2.0 * u)))
    return np.where(u > 30.0, far, near)


def asinh_of_exp(q):
    """asinh(e**q) for any real q."""
    q = np.asarray(q, dtype=float)
    with np.errstate(over="ignore"):
        low = np.arcsinh(np.exp(np.minimum(q, 0.0)))
        high = q + np.log1p(np.sqrt(1.0 + np.exp(-2.0 * np.maximum(q, 0.0))))
    return np.where(q > 0.0, high, low)


def acosh1p_of_exp(lw):
    """acosh(1 + e**lw): the hexagon side from the log of cosh(side) - 1."""
    lw = np.asarray(lw, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        w = np.exp(np.minimum(lw, 30.0))
        near = np.log1p(w + np.sqrt(w * (w + 2.0)))
        log_y = lw + np.log1p(np.exp(-lw))
        far = log_y + np.log1p(np.sqrt(-np.expm1(-2.0 * log_y)))
    return np.where(lw > 30.0, far, near)


def pentagon_side(a, b):
    """Side c of a right-angled pentagon opposite the vertex between sides a and b.

    cosh c = sinh a * sinh b. Raises DomainError when that product is below 1,
    i.e. when no pentagon with these adjacent sides exists.
    """
    (a, b), scalar = _prepare(a, b)
    _require_finite(a, "a")
    _require_finite(b, "b")
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("pentagon sides must be nonnegative")
    a, b = np.broadcast_arrays(a, b)
    big = np.maximum(a, b) > LOG_DOMAIN_ARG
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        s = np.sinh(np.minimum(a, LOG_DOMAIN_ARG)) * np.sinh(np.minimum(b, LOG_DOMAIN_ARG))
        log_s = log_sinh(a) + log_sinh(b)
    too_short = np.where(big, log_s < 0.0, s < 1.0 - PENTAGON_DEGENERATE_TOL)
    if np.any(too_short):
        raise DomainError("sinh(a)*sinh(b) < 1: no right-angled pentagon with these sides")
    degenerate = ~big & (np.abs(s - 1.0) <= PENTAGON_DEGENERATE_TOL)
    with np.errstate(invalid="ignore"):
        t = np.maximum(s - 1.0, 0.0)
        plain = np.log1p(t + np.sqrt(t * (s + 1.0)))
        plain = np.where(s > ACOSH_LARGE, np.log(s) + LN2, plain)
    out = np.where(big, acosh_of_exp(np.maximum(log_s, 0.0)), plain)
    out = np.where(degenerate, 0.0, out)
    return _finish(out, scalar)


def _hexagon_args(a, b, c):
    (a, b, c), scalar = _prepare(a, b, c)
    for x, name in ((a, "a"), (b, "b"), (c, "c")):
        _require_finite(x, name)
    if np.any(a <= 0) or np.any(b <= 0):
        raise DomainError("hexagon sides a and b must be positive")
    if np.any(c < 0):
        raise DomainError("hexagon side c must be nonnegative")
    a, b, c = np.broadcast_arrays(a, b, c)
    return a, b, c, scalar


def _hexagon_log(a, b, c):
    # cosh(gamma) - 1 = (cosh c + cosh(a - b)) / (sinh a sinh b), no cancellation
    lw = np.logaddexp(log_cosh(c), log_cosh(a - b)) - log_sinh(a) - log_sinh(b)
    return acosh1p_of_exp(lw)


def hexagon_side_log_domain(a, b, c):
    """Same contract as hexagon_side, evaluated entirely through logarithms."""
    a, b, c, scalar = _hexagon_args(a, b, c)
    return _finish(_hexagon_log(a, b, c), scalar)


def hexagon_side(a, b, c):
    """Side gamma of a right-angled hexagon opposite c, between sides a and b.

    cosh c + cosh a cosh b = sinh a sinh b cosh gamma, with a, b > 0 and
    c >= 0 (c = 0 is the degenerate cusp side). Inputs with huge or tiny
    arguments are routed to hexagon_side_log_domain.
    """
    a, b, c, scalar = _hexagon_args(a, b, c)
    use_log = (np.maximum(np.maximum(a, b), c) > LOG_DOMAIN_ARG) | (np.minimum(a, b) < SMALL_SINH_ARG)
    with np.errstate(over="ignore", invalid="ignore"):
        w = (np.cosh(c) + np.cosh(a - b)) / (np.sinh(a) * np.sinh(b))
        plain = np.log1p(w + np.sqrt(w * (w + 2.0)))
    if np.any(use_log):
        plain = np.where(use_log, _hexagon_log(a, b, c), plain)
    return _finish(plain, scalar)
