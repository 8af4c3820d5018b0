"""Quantitative tracing: travel tables, refutation certificates, and the
exact cylinder search."""

from fractions import Fraction

import pytest

from plcert.errors import InvariantViolated, NotApplicable
from plcert.exact import CompactInterval, interval
from plcert.families import make_F, make_G, make_H, make_fbar
from plcert.maps import as_exact_map
from plcert.plmap import plmap
from plcert.specification import (
    NotFound,
    NotRefuted,
    RefutationCertificate,
    SpecInstance,
    Target,
    periodic_points,
    refute_specification,
    trace_search,
    travel_time_table,
)

LAM = Fraction(16, 5)


@pytest.fixture(scope="module")
def Fm():
    return as_exact_map(make_F(LAM), "F[16/5]")


@pytest.fixture(scope="module")
def Hm():
    return as_exact_map(make_H(LAM), "H[16/5]")


@pytest.fixture(scope="module")
def tent():
    return plmap([(0, 0), ("1/2", 1), (1, 0)])


def test_periodic_points_F_period_two(Fm):
    pts = {c.lo for c in periodic_points(Fm, 2, interval(-10, 10))}
    assert all(c.is_point() for c in periodic_points(Fm, 2, interval(-10, 10)))
    expected = {Fraction(n) for n in range(-9, 10)}
    assert expected <= pts


def test_periodic_points_F_period_one(Fm):
    assert periodic_points(Fm, 1, interval(-10, 10)) == (interval(0, 0),)


def test_periodic_points_tent(tent):
    pts = periodic_points(tent, 2, interval(0, 1))
    assert pts == (
        interval(0, 0), interval("2/5", "2/5"), interval("2/3", "2/3"),
        interval("4/5", "4/5"),
    )


def test_travel_table_linear(Fm):
    cert = travel_time_table(Fm, Fraction(1, 2), range(2, 9))
    assert isinstance(cert, RefutationCertificate)
    assert cert.scale == "linear" and cert.growth_ok
    steps = [(e.n, e.steps) for e in cert.table]
    assert steps == [(2, 15), (3, 23), (4, 31), (5, 39), (6, 47), (7, 55),
                     (8, 63)]
    assert all(s >= n - 1 for n, s in steps)
    assert len(cert.displacement) == 16
    assert all(c.ok for c in cert.displacement)


def test_travel_table_dyadic(Hm):
    cert = travel_time_table(Hm, Fraction(1, 2), range(2, 9))
    assert cert.scale == "dyadic" and cert.growth_ok
    steps = [(e.n, e.steps) for e in cert.table]
    assert steps == [(2, 8), (3, 12), (4, 16), (5, 20), (6, 24), (7, 28),
                     (8, 32)]
    assert all(c.ok for c in cert.displacement)


def test_refute_specification_dispatch(Fm, Hm):
    assert refute_specification(Fm, Fraction(1, 2)).growth_ok
    assert refute_specification(Hm).growth_ok
    fbar = as_exact_map(make_fbar(LAM), "fbar[16/5]")
    assert isinstance(refute_specification(fbar, Fraction(1, 2)), NotRefuted)
    with pytest.raises(NotApplicable):
        refute_specification(as_exact_map(make_G(LAM), "G[16/5]"))


def test_travel_table_rejects_plmap(tent):
    with pytest.raises(NotApplicable):
        travel_time_table(tent)


def test_spec_instance_validation():
    inst = SpecInstance((Target(Fraction(2, 5), 0, 3),), Fraction(1, 100), 0)
    assert inst.horizon == 3
    with pytest.raises(InvariantViolated):
        SpecInstance((Target(Fraction(1, 2), 1, 2),), Fraction(1, 100), 0)
    with pytest.raises(InvariantViolated):
        SpecInstance(
            (Target(Fraction(1, 2), 0, 3), Target(Fraction(1, 4), 5, 6)),
            Fraction(1, 100), 4,
        )


def test_trace_search_periodic_point(tent):
    inst = SpecInstance((Target(Fraction(2, 5), 0, 3),), Fraction(1, 100), 0)
    res = trace_search(tent, inst, 3)
    assert isinstance(res, CompactInterval)
    assert Fraction(2, 5) in res
    assert res == interval("326657/819200", "328703/819200")


def test_trace_search_parity_obstruction():
    swap = plmap([(0, 1), (1, 0)])
    inst = SpecInstance(
        (Target(Fraction(1, 10), 0, 0), Target(Fraction(3, 10), 1, 1)),
        Fraction(1, 100), 1,
    )
    res = trace_search(swap, inst, 2)
    assert isinstance(res, NotFound)
    assert "time 1" in res.reason


def test_trace_search_on_compactification():
    fbar = as_exact_map(make_fbar(LAM), "fbar[16/5]")
    inst = SpecInstance(
        (Target(Fraction(1, 2), 0, 1), Target(Fraction(15, 16), 13, 14)),
        Fraction(1, 10), 12,
    )
    res = trace_search(fbar, inst, 14)
    assert isinstance(res, CompactInterval)
    assert res == interval("9020968117/17179869184", "9024641867/17179869184")


def test_trace_search_depth_must_cover_horizon(tent):
    inst = SpecInstance((Target(Fraction(2, 5), 0, 3),), Fraction(1, 100), 0)
    with pytest.raises(InvariantViolated):
        trace_search(tent, inst, 2)
