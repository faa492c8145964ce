import json
import math
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pants_spectra.collar import EPS_STAR
from pants_spectra.counterexample import HalvingFamily
from pants_spectra.errors import DomainError
from pants_spectra.ledger import build_ledger
from pants_spectra.pants import PantsMetric
from pants_spectra.verify import (
    CUSP_PATTERNS, MetricPair, RatioReport, SweepConfig, check_diff_boundary, check_lemma_suite,
    check_same_boundary, check_theorem_key, check_theorem_main, check_thick_part,
    empirical_infimum_middle, evaluate_batch, evaluate_pair, ratio_sup_arcs, ratio_sup_curves,
    sweep, sweep_rows,
)

LEDGER = build_ledger(0.3)
# empirical_infimum_middle(0.3, 10**5, seed=42), frozen from the first run
INFIMUM_AT_03 = 1.6388417493184981


def short_length(upper=0.3):
    return st.floats(1e-6, upper)


@st.composite
def relative_pairs(draw, eps0=0.3):
    pattern = draw(st.sampled_from(sorted(CUSP_PATTERNS)))
    cusp = CUSP_PATTERNS[pattern]
    a = [0.0 if c else draw(short_length(eps0)) for c in cusp]
    b = [0.0 if c else draw(short_length(eps0)) for c in cusp]
    return MetricPair(PantsMetric(*a), PantsMetric(*b))


def pair(a, b):
    return MetricPair(PantsMetric(*a), PantsMetric(*b))


def test_pair_requires_matching_cusps():
    with pytest.raises(DomainError):
        pair((0.1, 0.0, 0.1), (0.1, 0.1, 0.1))


def test_curve_sup_examples():
    same = pair((0.1, 0.2, 0.3), (0.1, 0.2, 0.3))
    assert ratio_sup_curves(same) == 1.0
    assert ratio_sup_curves(pair((0.1, 0.2, 0.3), (0.2, 0.2, 0.3))) == 2.0
    assert ratio_sup_curves(pair((0.3, 0.0, 0.1), (0.1, 0.0, 0.2))) == pytest.approx(3.0)
    with pytest.raises(DomainError):
        ratio_sup_curves(pair((0, 0, 0), (0, 0, 0)))


def test_arc_sup_examples():
    assert ratio_sup_arcs(pair((0.1, 0.2, 0.3), (0.1, 0.2, 0.3))) == 1.0
    p = pair((0.3, 0.3, 0.3), (0.15, 0.15, 0.15))
    report = evaluate_pair(p, LEDGER)
    assert ratio_sup_arcs(p) == max(l2 / l1 for c, l1, l2, _ in report.per_class if c.kind != "curve")
    with pytest.raises(DomainError):
        ratio_sup_arcs(pair((0, 0, 0), (0, 0, 0)))


def test_arc_sup_on_halving_family():
    # seam ratio at n = 10 by 50-digit mpmath; the early increments sit just under 2 ln 2,
    # so the value lands slightly below the asymptotic estimate 1 + 20 ln 2 / L0
    family = HalvingFamily(PantsMetric(0.3, 0.3, 0.3))
    value = ratio_sup_arcs(MetricPair(family.member(10), family.base))
    assert value == pytest.approx(3.6693790365755623, rel=1e-12)
    assert value >= 1 + 10 * 1.379 / 5.189836689317201


def test_identity_pair_passes_everything():
    p = pair((0.1, 0.2, 0.05), (0.1, 0.2, 0.05))
    key = check_theorem_key(p, LEDGER)
    assert key.passed and key.lhs == 1.0
    main = check_theorem_main(p, LEDGER)
    assert main.passed and main.lhs == 0.0
    assert all(r.passed for r in check_lemma_suite(p, LEDGER))
    assert evaluate_pair(p, LEDGER).passed


def test_theorems_require_relative_part():
    with pytest.raises(DomainError):
        check_theorem_key(pair((0.5, 0.1, 0.1), (0.1, 0.1, 0.1)), LEDGER)


def test_diff_boundary_example():
    records = check_diff_boundary(pair((0.1, 0.1, 0.3), (0.05, 0.2, 0.15)), 1, 2, LEDGER)
    assert {r.direction for r in records} == {"X1/X2", "X2/X1"}
    assert all(r.passed and r.bound_used == LEDGER.K1 for r in records)


def test_diff_boundary_with_cusp_opposite():
    records = check_diff_boundary(pair((0.1, 0.1, 0.0), (0.2, 0.05, 0.0)), 1, 2, LEDGER)
    assert len(records) == 2 and all(r.passed for r in records)
    with pytest.raises(DomainError):
        check_diff_boundary(pair((0.1, 0.1, 0.0), (0.2, 0.05, 0.0)), 1, 3, LEDGER)


def test_same_boundary_examples():
    records = check_same_boundary(pair((0.1, 0.2, 0.05), (0.2, 0.1, 0.1)), 1, LEDGER)
    assert len(records) == 2 and all(r.passed and r.bound_used == LEDGER.K2 for r in records)
    records = check_same_boundary(pair((0.1, 0.2, 0.0), (0.15, 0.05, 0.0)), 1, LEDGER)
    assert all(r.passed for r in records)


def test_general_regime_uses_general_constants():
    ledger = build_ledger(1.0)
    p = pair((0.9, 0.1, 0.5), (0.2, 0.6, 0.05))
    assert all(r.bound_used == ledger.K3 for r in check_diff_boundary(p, 1, 2, ledger))
    names = {r.name for r in check_lemma_suite(p, ledger)}
    assert {"seam_middle_ratio_general", "seam_collar_share", "loop_collar_share"} <= names
    assert all(r.passed for r in check_lemma_suite(p, ledger))


def test_difference_grid_below_bound():
    l3 = np.linspace(1e-6, 0.3, 300)
    L = np.column_stack([np.full_like(l3, 0.1), np.full_like(l3, 0.1), l3])
    batch = evaluate_batch(L, L, LEDGER)
    gaps = [c for c in batch.columns if c.name == "seam_middle_offset" and c.subject == "seam(1,2)"]
    worst = max(float(np.nanmax(c.lhs)) for c in gaps)
    print(f"max |a - b'| over the l3 grid: {worst} (bound {LEDGER.D1})")
    assert worst <= LEDGER.D1


def test_report_round_trip():
    report = evaluate_pair(pair((0.1, 0.0, 0.2), (0.05, 0.0, 0.25)), LEDGER)
    back = RatioReport.from_dict(json.loads(json.dumps(report.to_dict())))
    assert back.to_dict() == report.to_dict()


@settings(max_examples=150, deadline=None)
@given(relative_pairs())
def test_symmetry_and_structure(p):
    flipped = p.swapped()
    assert ratio_sup_curves(p) == ratio_sup_curves(flipped)
    assert ratio_sup_arcs(p) == ratio_sup_arcs(flipped)
    report = evaluate_pair(p, LEDGER)
    assert report.sup_all == max(report.sup_curves, report.sup_arcs)
    assert all(r >= 1.0 for _, _, _, r in report.per_class)
    assert math.log(report.sup_curves) <= math.log(report.sup_all)


@settings(max_examples=150, deadline=None)
@given(relative_pairs())
def test_all_checks_pass_on_relative_pairs(p):
    report = evaluate_pair(p, LEDGER)
    assert report.error is None
    assert report.passed, report.failed_checks()


@settings(max_examples=150, deadline=None)
@given(st.floats(1e-9, EPS_STAR, exclude_max=True), st.floats(1e-9, EPS_STAR, exclude_max=True))
def test_collar_ratio_factor_two(c1, c2):
    records = [r for r in check_lemma_suite(pair((c1, 0.2, 0.2), (c2, 0.2, 0.2)), LEDGER)
               if r.name == "seam_collar_ratio" and r.subject.endswith("@1")]
    assert records and all(r.passed for r in records)


def test_thick_part():
    p = pair((0.2, 0.15, 0.3), (0.1, 0.25, 0.12))
    free = check_thick_part(p, 0.1, LEDGER)
    assert free.passed and math.isfinite(free.bound_used)
    assert check_thick_part(p, 0.1, LEDGER, K0=free.bound_used * 1.0001).passed
    same = pair((0.2, 0.2, 0.2), (0.2, 0.2, 0.2))
    assert check_thick_part(same, 0.1, LEDGER, K0=1.0).lhs == 1.0
    family = HalvingFamily(PantsMetric(0.3, 0.3, 0.3))
    with pytest.raises(DomainError):
        check_thick_part(MetricPair(family.member(2), family.base), 0.1, LEDGER)


def test_empirical_infimum():
    value = empirical_infimum_middle(0.3, 10**5, seed=42)
    assert value > 0
    assert value >= INFIMUM_AT_03 - 1e-6
    assert empirical_infimum_middle(0.1, 10**5, seed=42) >= value - 1e-9
    assert empirical_infimum_middle(0.3, 1000, seed=3) == empirical_infimum_middle(0.3, 1000, seed=3)


def test_sweep_empty():
    result = sweep(SweepConfig(0.3, 0, 1))
    assert len(result.reports) == 0
    assert result.summary["empirical_min_K"] == 1.0


def test_sweep_deterministic_across_thread_counts(monkeypatch):
    monkeypatch.setenv("PANTS_SPECTRA_THREADS", "1")
    one = sweep(SweepConfig(0.3, 3000, 7))
    monkeypatch.setenv("PANTS_SPECTRA_THREADS", "4")
    four = sweep(SweepConfig(0.3, 3000, 7))
    assert json.dumps(one.summary) == json.dumps(four.summary)
    assert list(sweep_rows(one)) == list(sweep_rows(four))


def test_sweep_reports_are_lazy_views():
    result = sweep(SweepConfig(1.0, 50, 5))
    assert len(result.reports) == 150
    report = result.reports[-1]
    assert report.pair_id == 149
    assert report.passed
    assert result.summary["all_passed"]


def test_sweep_rejects_bad_config():
    with pytest.raises(DomainError):
        SweepConfig(0.3, 10, 0, thick_eps=0.5)
    with pytest.raises(DomainError):
        SweepConfig(0.0, 10)


def test_bad_thread_env(monkeypatch):
    monkeypatch.setenv("PANTS_SPECTRA_THREADS", "many")
    with pytest.raises(DomainError):
        sweep(SweepConfig(0.3, 10, 0))
    monkeypatch.delenv("PANTS_SPECTRA_THREADS")
    assert os.environ.get("PANTS_SPECTRA_THREADS") is None
