"""Every named constant of the arc/curve comparison argument as a function of eps0.

Primes are spelled out: K3dprime is K3'' and K3tprime is K3'''. Wherever the
argument needs a lower bound for a middle segment the ledger uses
M0_empirical, the brute-force infimum, rather than the closed form
8/ln(1+sqrt 2), which overstates the true infimum by roughly a factor of five.
"""
import json
import math
from dataclasses import asdict, dataclass, fields
from functools import lru_cache

from .collar import C0_PRIME, EPS0_PRIME, EPS_STAR
from .decompose import middle_infimum_grid
from .errors import DomainError


@dataclass(frozen=True)
class ConstantLedger:
    eps0: float
    eps0_prime: float
    eps_star: float
    c0_prime: float
    M0_closed_form: float
    M0_empirical: float
    k1: float
    M1: float
    D1: float
    M: float
    Mprime: float
    M0prime: float
    D2: float
    D2prime: float
    K1prime: float
    K1: float
    K2prime: float
    K2: float
    K3prime: float
    K3dprime: float
    K3tprime: float
    K3: float
    K4prime: float
    K4dprime: float
    K4: float
    K: float
    C: float
    # intermediate constants the chain uses without naming
    k2: float
    D: float

    @property
    def small_regime(self) -> bool:
        """True when eps0 < eps_star, where every boundary gets a collar."""
        return self.eps0 < self.eps_star

    @property
    def seam_constant(self) -> float:
        return self.K1 if self.small_regime else self.K3

    @property
    def loop_constant(self) -> float:
        return self.K2 if self.small_regime else self.K4

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ConstantLedger":
        return cls(**{f.name: float(data[f.name]) for f in fields(cls)})


def _difference_bound(m1: float, eps0: float) -> float:
    # from M1^-1 e^b <= sinh c sinh c' cosh(total) <= M1 e^b and the hexagon identity
    return max(abs(math.log(2.0 * m1)), abs(math.log(m1 * (1.0 + math.cosh(eps0)))))


def _ratio_constant(m0: float, diff: float, eps0: float) -> float:
    """Constant of the seven-case middle-segment ratio argument.

    m0 is a lower bound for the middle segment, diff a bound on
    |half opposite curve - middle|, and the threshold is M = 2*diff + 1.
    """
    m = 2.0 * diff + 1.0
    return max(3.0, 3.0 * m * m / (2.0 * m0 * eps0), 3.0 * m / m0, 2.0 * eps0 / m0)


@lru_cache(maxsize=64)
def _build(eps0: float) -> ConstantLedger:
    e = math.e
    half = eps0 / 2.0
    m0_emp = middle_infimum_grid(eps0)
    k1 = math.sinh(half) / half

    # boundaries shorter than eps_star: both ends carry a collar
    m1 = max(2.0 / C0_PRIME**2, 4.0 * k1**2 * C0_PRIME**2)
    d1 = _difference_bound(m1, eps0)
    m = 2.0 * d1 + 1.0

    # one end without collar, then no collar at all
    m1_one = max(8.0 * e / EPS0_PRIME**2, k1**2 * eps0 * EPS0_PRIME / 2.0)
    m1_none = max(8.0 * e**2 / EPS0_PRIME**2, k1**2 * eps0**2 / 4.0)
    d_general = max(d1, _difference_bound(m1_one, eps0), _difference_bound(m1_none, eps0))

    m_prime = min(m0_emp, math.acosh(math.sinh(half) ** -2 + 1.0))
    m0_prime = min(m0_emp / 2.0, math.asinh(1.0 / math.sinh(half)))

    # sinh x <= k2 x for x <= eps0/2 and sinh y >= e^y / k2 for y >= m0_prime
    k2 = max(k1, 2.0 / -math.expm1(-2.0 * m0_prime))
    d2 = max(abs(math.log(EPS0_PRIME / k2) - math.log(4.0)), abs(math.log(k2 * EPS0_PRIME)))
    d2_prime = max(abs(math.log(EPS0_PRIME / k2) - math.log(4.0 * e)),
                   abs(math.log(k2 * eps0) - math.log(2.0)))

    k1_prime = _ratio_constant(m0_emp, d1, eps0)
    k1_const = max(k1_prime, 2.0)
    k2_prime = _ratio_constant(m0_emp / 2.0, d2, eps0)
    k2_const = max(k2_prime, 2.0)
    k3_prime = _ratio_constant(m_prime, d_general, eps0)
    k3_dprime = max(2.0, 2.0 * e / m_prime)
    k3_tprime = k3_dprime
    k3_const = 3.0 * max(k3_prime, k3_dprime, k3_tprime)
    k4_prime = _ratio_constant(m0_prime, max(d2, d2_prime), eps0)
    k4_dprime = max(2.0, 2.0 * e / m0_prime)
    k4_const = 2.0 * max(k4_prime, k4_dprime)
    k_const = max(k1_const, k2_const, k3_const, k4_const)

    return ConstantLedger(
        eps0=eps0, eps0_prime=EPS0_PRIME, eps_star=EPS_STAR, c0_prime=C0_PRIME,
        M0_closed_form=8.0 / EPS0_PRIME, M0_empirical=m0_emp, k1=k1, M1=m1, D1=d1, M=m,
        Mprime=m_prime, M0prime=m0_prime, D2=d2, D2prime=d2_prime,
        K1prime=k1_prime, K1=k1_const, K2prime=k2_prime, K2=k2_const,
        K3prime=k3_prime, K3dprime=k3_dprime, K3tprime=k3_tprime, K3=k3_const,
        K4prime=k4_prime, K4dprime=k4_dprime, K4=k4_const,
        K=k_const, C=math.log(k_const), k2=k2, D=d_general,
    )


def build_ledger(eps0: float) -> ConstantLedger:
    eps0 = float(eps0)
    if not (eps0 > 0 and math.isfinite(eps0)):
        raise DomainError(f"eps0 must be positive and finite, got {eps0!r}")
    return _build(eps0)
