import json
import math

import mpmath as mp
import pytest

from pants_spectra.errors import DomainError
from pants_spectra.ledger import ConstantLedger, _build, build_ledger

mp.mp.dps = 50
GRID = (0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 6.0)

# regression values of the chain at eps0 = 0.3 (frozen from the first build)
K_AT_03 = 1126.7226691892004
K1_AT_03 = 153.58562702452483
D1_AT_03 = 3.047552238254742


def test_explicit_constants_against_oracle():
    ledger = build_ledger(0.3)
    silver = mp.log(1 + mp.sqrt(2))
    assert abs(ledger.eps0_prime - float(silver)) <= 1e-12
    assert abs(ledger.eps_star - float(silver / mp.e)) <= 1e-12
    assert abs(ledger.c0_prime - float(silver / 2)) <= 1e-12
    assert ledger.M0_closed_form == pytest.approx(float(8 / silver), rel=1e-14)
    assert ledger.k1 == pytest.approx(float(mp.sinh(0.15) / 0.15), rel=1e-14)


def test_regression_values():
    ledger = build_ledger(0.3)
    assert ledger.K == pytest.approx(K_AT_03, rel=1e-9)
    assert ledger.K1 == pytest.approx(K1_AT_03, rel=1e-9)
    assert ledger.D1 == pytest.approx(D1_AT_03, rel=1e-12)


@pytest.mark.parametrize("eps0", GRID)
def test_chain_shape(eps0):
    ledger = build_ledger(eps0)
    values = ledger.to_dict()
    assert all(math.isfinite(v) and v > 0 for v in values.values())
    assert ledger.C == math.log(ledger.K)
    assert ledger.K >= 2
    assert ledger.K == max(ledger.K1, ledger.K2, ledger.K3, ledger.K4)
    assert ledger.M == 2 * ledger.D1 + 1
    assert ledger.K1 == max(ledger.K1prime, 2.0)
    assert ledger.Mprime <= ledger.M0_empirical
    assert ledger.M0prime <= ledger.M0_empirical / 2
    assert ledger.D >= ledger.D1
    assert ledger.small_regime == (eps0 < ledger.eps_star)


def test_empirical_infimum_well_below_closed_form():
    ledger = build_ledger(0.3)
    assert 0 < ledger.M0_empirical < ledger.M0_closed_form / 5


def test_deterministic():
    first = build_ledger(0.7).to_dict()
    _build.cache_clear()
    assert build_ledger(0.7).to_dict() == first


def test_json_round_trip():
    ledger = build_ledger(1.0)
    assert ConstantLedger.from_dict(json.loads(ledger.to_json())) == ledger


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_rejects_bad_eps0(bad):
    with pytest.raises(DomainError):
        build_ledger(bad)


def test_monotonicity_report():
    # report only: nothing guarantees K(eps0) is monotone
    ks = [build_ledger(e).K for e in GRID]
    drops = [(a, b) for a, b, ka, kb in zip(GRID, GRID[1:], ks, ks[1:]) if kb < ka]
    print(f"K over {GRID}: {ks}; decreasing steps: {drops}")
    assert all(math.isfinite(k) for k in ks)
