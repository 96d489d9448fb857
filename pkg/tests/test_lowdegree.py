"""Degree-capped polynomial signal-to-noise enumeration and its closed-form cap."""

import math

import pytest

from corrdetect.errors import CapacityError, ParameterError
from corrdetect.lowdegree import low_degree_snr, snr_closed_form_bound


def test_snr_two_vertex_window():
    # empty motif plus one edge: sqrt(1 + (2*1/(4*3))^2)
    got = low_degree_snr(4, 2, 1.0, 2)
    assert got.snr == pytest.approx(math.sqrt(1 + 1 / 36), rel=1e-12)


def test_snr_three_vertex_window():
    # degree 4 admits the single edge and the 2-edge path; the two disjoint
    # edges need 4 vertices and vanish at s=3
    got = low_degree_snr(6, 3, 1.0, 4)
    assert got.snr == pytest.approx(math.sqrt(1 + 0.04 + 0.0025), rel=1e-12)
    assert all(t.vertices <= 3 for t in got.terms)


def test_snr_terms_decompose_value():
    rep = low_degree_snr(10, 6, 0.8, 6)
    assert math.fsum(t.contribution for t in rep.terms) == pytest.approx(
        rep.snr ** 2, rel=1e-12)
    assert (0, 0, 1.0) in {(t.vertices, t.edges, t.contribution) for t in rep.terms}


def test_snr_uncorrelated_is_one():
    assert low_degree_snr(50, 20, 0.0, 8).snr == 1.0


def test_snr_degree_zero_is_one():
    assert low_degree_snr(50, 20, 0.9, 0).snr == 1.0


def test_snr_monotone_in_degree():
    vals = [low_degree_snr(30, 20, 0.9, d).snr for d in range(0, 11, 2)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > vals[0]


def test_snr_monotone_in_rho():
    vals = [low_degree_snr(30, 20, r, 6).snr for r in (0.0, 0.3, 0.6, 0.9, 1.0)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_snr_monotone_in_s():
    vals = [low_degree_snr(40, s, 0.9, 6).snr for s in (10, 20, 30, 40)]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_snr_below_closed_form_cap():
    # the cap is only claimed while x = e*rho*D/(2 log(n/s)) stays below 1
    checked = 0
    for n, s in ((100, 10), (1000, 50), (10000, 100), (200, 20), (5000, 500)):
        for rho in (0.05, 0.1, 0.2):
            for degree in (2, 4, 6, 8):
                x = math.e * rho * degree / (2 * math.log(n / s))
                if x >= 1:
                    continue
                cap = snr_closed_form_bound(n, s, rho, degree)
                assert low_degree_snr(n, s, rho, degree).snr <= cap
                checked += 1
    assert checked >= 20


def test_snr_hardness_regime_is_flat():
    assert low_degree_snr(10 ** 6, 10, 1.0, 4).snr - 1 < 1e-8


def test_snr_degree_capacity():
    with pytest.raises(CapacityError):
        low_degree_snr(100, 50, 0.5, 11)
    assert low_degree_snr(100, 50, 0.5, 10).snr >= 1.0


def test_snr_parameter_validation():
    with pytest.raises(ParameterError):
        low_degree_snr(10, 0, 0.5, 4)
    with pytest.raises(ParameterError):
        low_degree_snr(10, 11, 0.5, 4)
    with pytest.raises(ParameterError):
        low_degree_snr(10, 5, 1.5, 4)
    with pytest.raises(ParameterError):
        low_degree_snr(10, 5, 0.5, -1)


def test_bound_needs_strict_window():
    with pytest.raises(ParameterError):
        snr_closed_form_bound(10, 10, 0.5, 4)


def test_report_to_dict():
    d = low_degree_snr(6, 3, 1.0, 4).to_dict()
    assert d["n"] == 6 and d["s"] == 3 and d["degree"] == 4
    assert d["snr"] == pytest.approx(math.sqrt(1.0425), rel=1e-12)
    assert {"vertices", "edges", "contribution"} <= set(d["terms"][0])
