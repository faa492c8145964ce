import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pants_spectra.collar import (
    C0_PRIME, EPS0_PRIME, EPS_STAR, CollarSpec, collar_admissible_width, eta, inner_boundary_offset,
    offset_for_target, offset_length,
)
from pants_spectra.errors import DomainError

mp.mp.dps = 50
ETA_02 = 2.9965651211176616
ETA_01 = 3.6890877570706633
OFFSET_03_1 = 0.4629241904445731
OFFSET_TO_INNER_01 = 2.8662246804459137


def test_constants_against_oracle():
    silver = mp.log(1 + mp.sqrt(2))
    assert EPS0_PRIME == pytest.approx(float(silver), abs=1e-15)
    assert EPS_STAR == pytest.approx(float(silver / mp.e), abs=1e-15)
    assert C0_PRIME == pytest.approx(float(silver / 2), abs=1e-15)


def test_eta_values():
    assert eta(2.0 * EPS0_PRIME) == pytest.approx(EPS0_PRIME, rel=1e-15)
    assert eta(0.2) == pytest.approx(ETA_02, rel=1e-14)
    assert collar_admissible_width(0.1) == pytest.approx(ETA_01, rel=1e-14)
    assert abs(eta(1e-6) - math.log(4e6)) <= 1e-6


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_eta_rejects_nonpositive(bad):
    with pytest.raises(DomainError):
        eta(bad)


def test_eta_decreasing_and_above_envelope():
    xs = np.linspace(1e-3, 1.0, 500)
    ys = eta(xs)
    assert np.all(np.diff(ys) < 0)
    assert np.all(ys >= np.log(4.0 / xs) - xs**2 / 24.0)


def test_offset_length_and_inverse():
    assert offset_length(0.7, 0.0) == 0.7
    assert offset_length(0.1, math.acosh(10.0)) == pytest.approx(1.0, rel=1e-14)
    assert offset_length(0.3, 1.0) == pytest.approx(OFFSET_03_1, rel=1e-14)
    assert offset_for_target(0.4, 0.4) == 0.0
    assert offset_for_target(0.1, EPS0_PRIME) == pytest.approx(OFFSET_TO_INNER_01, rel=1e-14)
    with pytest.raises(DomainError):
        offset_for_target(0.5, 0.4)
    with pytest.raises(DomainError):
        offset_length(0.5, -0.1)


@settings(max_examples=300, deadline=None)
@given(st.floats(1e-6, 10.0), st.floats(0.0, 30.0))
def test_offset_round_trip(l, d):
    back = offset_for_target(l, offset_length(l, d))
    assert back == pytest.approx(d, rel=1e-12, abs=1e-7)


def test_inner_boundary_rule():
    assert inner_boundary_offset(0.1) == pytest.approx(OFFSET_TO_INNER_01, rel=1e-14)
    assert inner_boundary_offset(0.5) == 0.0
    assert inner_boundary_offset(EPS_STAR) == 0.0
    assert inner_boundary_offset(math.nextafter(EPS_STAR, 0.0)) > 0.0
    with pytest.raises(DomainError):
        inner_boundary_offset(0.0)
    np.testing.assert_array_equal(inner_boundary_offset(np.array([0.0, 0.5])), [0.0, 0.0])


def test_collar_spec_validation():
    spec = CollarSpec.at_offset(0.2, 1.5)
    assert spec.inner_length == pytest.approx(0.2 * math.cosh(1.5))
    again = CollarSpec.with_inner_length(0.2, spec.inner_length)
    assert again.offset == pytest.approx(1.5, rel=1e-12)
    with pytest.raises(DomainError):
        CollarSpec(0.2, 1.0, 0.2)
    with pytest.raises(DomainError):
        CollarSpec(0.0, 0.0, 0.0)
