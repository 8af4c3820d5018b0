"""Tiled line maps and the dyadic compactification.

Hand-derived oracle values at lambda = 16/5:
  F(x) = -x for x >= 0 and F(x) = phi(x + n + 1) + n on [-n-1, -n], so
  F(-n) = n at integers and F(-3/2) = phi(1/2) + 1 = 3/2.
  G(x) = -x for x >= 0, dyadically self-similar on the negatives with
  G(-2^k) = 2^k at tile ends, so H = G^2 on [0, oo) fixes the powers of 2.
"""

import random
from fractions import Fraction

import pytest

from plcert.errors import AccumulationPoint, OutOfDomain
from plcert.exact import interval
from plcert.families import make_F, make_G, make_H, make_fbar
from plcert.linemap import (
    compactify,
    eval_line,
    fixed_points_line,
    global_lipschitz,
    image_interval,
    restrict_window,
    solve_line,
)

LAM = Fraction(16, 5)


def iv(a, b):
    return interval(a, b)


@pytest.fixture(scope="module")
def F():
    return make_F(LAM)


@pytest.fixture(scope="module")
def G():
    return make_G(LAM)


@pytest.fixture(scope="module")
def H():
    return make_H(LAM)


@pytest.fixture(scope="module")
def fbar():
    return make_fbar(LAM)


@pytest.mark.parametrize("x, fx", [
    (0, 0),
    (2, -2),
    ("7/3", "-7/3"),
    (-1, 1),
    (-2, 2),
    ("-1/2", "1/2"),
    ("-3/2", "3/2"),
])
def test_F_evaluation(F, x, fx):
    assert eval_line(F, x) == Fraction(fx)


def test_F_restriction_structure(F):
    g = restrict_window(F, iv(-1, 0))
    assert g.piece_count() == 7
    assert g.lipschitz_const() == LAM
    rng = random.Random(1)
    for _ in range(20):
        x = -Fraction(rng.randint(0, 2**20), 2**20)
        assert g(x) == eval_line(F, x)


def test_F_image_iteration(F):
    k = iv(0, 1)
    expected = [
        iv(-1, 0),
        iv("-1/64", "65/64"),
        iv("-65/64", "1/20"),
        iv("-1/20", "21/20"),
        iv("-21/20", "4/25"),
    ]
    for m, want in enumerate(expected, start=1):
        assert image_interval(F, k, m) == want


def test_F_census_and_lipschitz(F):
    assert global_lipschitz(F) == LAM
    assert fixed_points_line(F, iv(-10, 10)) == (iv(0, 0),)


def test_F_solve_in_one_tile(F):
    # phi crosses 1/2 three times, so F = 3/2 has three solutions in [-2,-1]
    sols = solve_line(F, Fraction(3, 2), iv(-2, -1))
    assert sols == (iv("-59/32", "-59/32"), iv("-3/2", "-3/2"),
                    iv("-37/32", "-37/32"))


@pytest.mark.parametrize("x, gx", [
    (1, -1),
    ("1/2", "-1/2"),
    (0, 0),
    (-1, 1),
    ("-1/2", "1/2"),
    ("-1/4", "1/4"),
    ("-3/4", "3/4"),   # psi(1/2) = 1/2 lifts to the tile [-1, -1/2]
    ("-3/8", "3/8"),
])
def test_G_evaluation(G, x, gx):
    assert eval_line(G, x) == Fraction(gx)


def test_G_homogeneity(G):
    rng = random.Random(2)
    for _ in range(40):
        x = -Fraction(rng.randint(1, 2**16), 2**16)
        assert eval_line(G, x / 2) == eval_line(G, x) / 2


def test_G_window_rules(G):
    g = restrict_window(G, iv(0, 3))
    assert g.nodes == ((0, 0), (3, -3))
    neg = restrict_window(G, iv(-1, "-1/4"))
    assert neg(Fraction(-3, 4)) == Fraction(3, 4)
    with pytest.raises(AccumulationPoint):
        restrict_window(G, iv(-1, 1))


@pytest.mark.parametrize("k", range(-3, 4))
def test_H_fixes_powers_of_two(H, k):
    x = Fraction(2) ** k
    assert eval_line(H, x) == x


def test_H_window_rules(H):
    with pytest.raises(OutOfDomain):
        eval_line(H, -1)
    with pytest.raises(OutOfDomain):
        restrict_window(H, iv(-1, 1))
    with pytest.raises(AccumulationPoint):
        restrict_window(H, iv(0, 1))
    g = restrict_window(H, iv("1/8", "1/4"))
    assert g.lipschitz_const() == LAM


def test_H_is_G_squared(G, H):
    rng = random.Random(3)
    for _ in range(40):
        x = Fraction(rng.randint(1, 2**16), 2**12)
        assert eval_line(H, x) == eval_line(G, eval_line(G, x))


@pytest.mark.parametrize("x, hx", [
    (0, "1/2"),
    (1, "3/4"),
    (2, "7/8"),
    (-1, "1/4"),
    (-2, "1/8"),
    ("1/2", "5/8"),
])
def test_h_values(fbar, x, hx):
    assert fbar.h(Fraction(x) if isinstance(x, int) else Fraction(x)) == Fraction(hx)


def test_h_inverse_round_trip(fbar):
    rng = random.Random(4)
    assert fbar.h_inv(Fraction(1, 2)) == 0
    for _ in range(40):
        x = Fraction(rng.randint(-6 * 64, 6 * 64), 64)
        assert fbar.h_inv(fbar.h(x)) == x
    for y in (Fraction(0), Fraction(1), Fraction(2), Fraction(-1, 2)):
        with pytest.raises(OutOfDomain):
            fbar.h_inv(y)


def test_fbar_edges_and_conjugacy(F, fbar):
    assert eval_line(fbar, 0) == 1
    assert eval_line(fbar, 1) == 0
    rng = random.Random(5)
    for _ in range(60):
        x = Fraction(rng.randint(-8 * 32, 8 * 32), 32)
        assert fbar.h(eval_line(F, x)) == eval_line(fbar, fbar.h(x))


def test_fbar_window_rules(fbar):
    g = restrict_window(fbar, iv("1/4", "3/4"))
    rng = random.Random(6)
    for _ in range(20):
        x = Fraction(1, 4) + Fraction(rng.randint(0, 2**20), 2**21)
        assert g(x) == eval_line(fbar, x)
    with pytest.raises(AccumulationPoint):
        restrict_window(fbar, iv(0, "1/2"))
    with pytest.raises(AccumulationPoint):
        restrict_window(fbar, iv("1/2", 1))


def test_compactify_matches_family(F, fbar):
    built = compactify(F)
    rng = random.Random(7)
    for _ in range(20):
        y = Fraction(rng.randint(1, 2**10 - 1), 2**10)
        assert eval_line(built, y) == eval_line(fbar, y)


def test_fbar_lipschitz_is_certified_upper_bound(fbar):
    bound = fbar.lipschitz()
    g = restrict_window(fbar, iv("1/64", "63/64"))
    assert g.lipschitz_const() <= bound
