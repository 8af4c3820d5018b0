"""Template families phi and psi and their tiled extensions."""

from fractions import Fraction

import pytest

from plcert.errors import LambdaTooSmall
from plcert.exact import interval
from plcert.families import (
    FamilyParams,
    make_F,
    make_G,
    make_H,
    make_fbar,
    make_phi,
    make_psi,
)

LAM = Fraction(16, 5)


def test_breakpoints_at_16_5():
    p = FamilyParams(LAM)
    assert (p.p1, p.q1, p.p2, p.p3, p.q2, p.p4) == (
        Fraction(5, 16), Fraction(21, 64), Fraction(11, 32),
        Fraction(21, 32), Fraction(43, 64), Fraction(11, 16),
    )


def test_phi_nodes_at_16_5():
    phi = make_phi(LAM)
    assert phi.nodes == (
        (0, 1),
        (Fraction(5, 16), 0),
        (Fraction(21, 64), Fraction(-1, 64)),
        (Fraction(11, 32), 0),
        (Fraction(21, 32), 1),
        (Fraction(43, 64), Fraction(65, 64)),
        (Fraction(11, 16), 1),
        (1, 0),
    )
    assert phi.piece_count() == 7
    assert phi.lipschitz_const() == LAM


def test_psi_nodes_at_16_5():
    psi = make_psi(LAM)
    assert psi.nodes == (
        (0, 1),
        (Fraction(21, 64), Fraction(-1, 20)),
        (Fraction(43, 64), Fraction(21, 20)),
        (1, 0),
    )
    assert psi.lipschitz_const() == LAM


def test_ranges_at_16_5():
    assert make_phi(LAM).range_on() == interval("-1/64", "65/64")
    assert make_psi(LAM).range_on() == interval("-1/20", "21/20")


@pytest.mark.parametrize("lam", [4, Fraction(7, 2), "17/5"])
def test_range_formulas(lam):
    lam = Fraction(lam)
    phi = make_phi(lam)
    psi = make_psi(lam)
    assert phi.range_on() == interval(
        (3 - lam) / (4 * lam), (5 * lam - 3) / (4 * lam)
    )
    assert psi.range_on() == interval((3 - lam) / 4, (lam + 1) / 4)


@pytest.mark.parametrize("lam", [4, "16/5", "100/33"])
def test_templates_glue(lam):
    phi = make_phi(lam)
    psi = make_psi(lam)
    assert phi(0) == 1 and phi(1) == 0
    assert psi(0) == 1 and psi(1) == 0


@pytest.mark.parametrize("maker", [make_phi, make_psi, make_F, make_G, make_H,
                                   make_fbar])
@pytest.mark.parametrize("lam", [3, "3/1", 2, "5/2", 0, -1])
def test_lambda_at_most_3_rejected(maker, lam):
    with pytest.raises(LambdaTooSmall):
        maker(lam)


def test_family_params_reused():
    p = FamilyParams(LAM)
    assert make_phi(p).nodes == make_phi(LAM).nodes
    assert make_psi(p).nodes == make_psi(LAM).nodes
