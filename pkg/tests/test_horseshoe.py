"""Horseshoe certificates: verify, loosen, finders, dichotomy, amplify.

All expected intervals below were computed by hand from the defining
formulas (branch pullbacks of the base under one monotone lap) before the
finders existed; the finders must reproduce them exactly.
"""

import random
from fractions import Fraction

import pytest

from plcert.errors import ConstructionFailed, NotApplicable, NotLoose
from plcert.exact import interval
from plcert.families import make_F, make_G, make_H, make_psi
from plcert.horseshoe import (
    BitransitiveEvidence,
    QuasiHorseshoe,
    SwapStructure,
    TightReport,
    Unknown,
    amplify,
    dichotomy,
    find_halfline,
    find_two_fixed,
    find_unique_fixed,
    loosen,
    quasihorseshoe,
    verify,
)
from plcert.linemap import MirrorTranslationTiled
from plcert.maps import as_exact_map
from plcert.plmap import plmap

LAM = Fraction(16, 5)


def iv(a, b):
    return interval(a, b)


@pytest.fixture(scope="module")
def psi():
    return as_exact_map(make_psi(LAM), "psi")


@pytest.fixture(scope="module")
def F():
    return as_exact_map(make_F(LAM), "F")


@pytest.fixture(scope="module")
def G():
    return as_exact_map(make_G(LAM), "G")


@pytest.fixture(scope="module")
def H():
    return as_exact_map(make_H(LAM), "H")


@pytest.fixture(scope="module")
def tent():
    return as_exact_map(plmap([(0, 0), ("1/2", 1), (1, 0)]), "tent")


@pytest.fixture(scope="module")
def toy():
    return as_exact_map(
        plmap([(0, 0), ("1/2", "3/4"), (1, 1), ("3/2", 3), (2, 0)]), "toy"
    )


def test_verify_psi_branches(psi):
    cert = quasihorseshoe(
        iv(0, 1), (iv(0, "21/64"), iv("21/64", "43/64"), iv("43/64", 1)), 1
    )
    rep = verify(cert, psi)
    assert rep.ok and rep.kind == "neither"


def test_loosen_psi_branches(psi):
    cert = quasihorseshoe(
        iv(0, 1), (iv(0, "21/64"), iv("21/64", "43/64"), iv("43/64", 1)), 1
    )
    got = loosen(cert, psi)
    assert isinstance(got, QuasiHorseshoe) and got.kind == "loose"
    assert got.pieces == (
        (iv(0, "5/16"),), (iv("11/32", "21/32"),), (iv("11/16", 1),)
    )
    assert verify(got, psi).ok


def test_verify_tent_is_tight(tent):
    cert = quasihorseshoe(iv(0, 1), (iv(0, "1/2"), iv("1/2", 1)), 1)
    rep = verify(cert, tent)
    assert rep.ok and rep.kind == "tight"
    assert isinstance(loosen(cert, tent), TightReport)


def test_verify_failure_carries_witness(tent):
    bad = quasihorseshoe(iv(0, 1), (iv(0, "1/2"), iv("1/4", 1)), 1)
    rep = verify(bad, tent)
    assert not rep.ok
    assert rep.witness == iv("1/4", "1/2")


def test_loosen_toy(toy):
    cert = quasihorseshoe(iv(0, 2), (iv(0, "3/2"), iv("3/2", 2)), 1)
    assert verify(cert, toy).ok
    got = loosen(cert, toy)
    assert got.pieces == ((iv(0, "5/4"),), (iv("5/3", 2),))


def test_find_two_fixed_toy(toy):
    got = find_two_fixed(toy)
    assert isinstance(got, QuasiHorseshoe)
    assert got.kind == "loose" and got.iterate == 1
    assert got.base == iv(0, 2)
    assert got.pieces == ((iv(0, "5/4"),), (iv("5/3", 2),))


def test_find_two_fixed_reflected(toy):
    refl = as_exact_map(toy.obj.reflect(), "toy-reflected")
    got = find_two_fixed(refl)
    assert got.base == iv("-11/6", -1)
    assert got.pieces == ((iv("-11/6", "-61/36"),), (iv("-29/24", -1),))
    assert verify(got, refl).ok


def test_find_two_fixed_tent_reports_tight(tent):
    got = find_two_fixed(tent)
    assert isinstance(got, TightReport)
    assert got.pieces == ((iv(0, "1/2"),), (iv("1/2", 1),))


def test_find_two_fixed_psi(psi):
    got = find_two_fixed(psi)
    assert got.base == iv("5/32", "1/2")
    assert got.pieces == ((iv("5/32", "135/512"),), (iv("201/512", "1/2"),))
    assert verify(got, psi).ok


def test_find_two_fixed_needs_two_fixed_points(F):
    with pytest.raises(NotApplicable):
        find_two_fixed(F)


def test_find_halfline_H(H):
    got = find_halfline(H)
    assert isinstance(got, QuasiHorseshoe)
    assert got.kind == "loose" and got.iterate == 1
    assert got.base == iv("1/8", "1/4")
    assert got.pieces == (
        (iv("1/8", "21/128"),), (iv("43/256", "53/256"),), (iv("27/128", "1/4"),)
    )
    assert find_halfline(H) == got  # deterministic


def test_find_halfline_plmap_oracle():
    htoy = as_exact_map(plmap([
        (0, 0), ("2/3", "5/4"), (1, 1), ("85/64", "41/20"),
        ("107/64", "19/20"), (2, 2), (3, 0),
    ]), "htoy")
    got = find_halfline(htoy)
    assert got.base == iv(1, 2)
    assert got.pieces == (
        (iv(1, "21/16"),), (iv("43/32", "53/32"),), (iv("27/16", 2),)
    )
    assert verify(got, htoy).ok


def test_find_halfline_reports_failing_step():
    fixing = as_exact_map(plmap([(0, 0), (1, 1), (2, "1/2"), (3, 3)]), "fixing")
    with pytest.raises(ConstructionFailed) as exc_info:
        find_halfline(fixing)
    assert exc_info.value.step == "a>z1"


def test_find_unique_fixed_F(F):
    got = find_unique_fixed(F)
    assert isinstance(got, QuasiHorseshoe)
    assert got.kind == "loose" and got.iterate == 2
    assert got.base == iv(0, "65/64")
    assert got.pieces == (
        (iv(0, "21/64"),), (iv("21/64", "21/32"),), (iv("11/16", "1029/1024"),)
    )


def test_find_unique_fixed_G_delegates(G):
    got = find_unique_fixed(G)
    assert got.kind == "loose" and got.iterate == 2
    assert got.base == iv("1/8", "1/4")
    assert got.pieces == (
        (iv("1/8", "21/128"),), (iv("43/256", "53/256"),), (iv("27/128", "1/4"),)
    )
    assert verify(got, G).ok


def test_find_unique_fixed_reflected_window(F):
    gwin = as_exact_map(F.materialize(iv(-8, 8), 1).reflect(), "F-reflected")
    got = find_unique_fixed(gwin)
    assert got.iterate == 2 and got.base == iv("-65/64", 0)
    assert got.pieces == (
        (iv("-1029/1024", "-11/16"),), (iv("-21/32", "-21/64"),),
        (iv("-21/64", 0),),
    )


def test_find_unique_fixed_rejects_two_fixed(toy):
    with pytest.raises(NotApplicable):
        find_unique_fixed(toy)


@pytest.mark.parametrize("seed", [20260817])
def test_find_unique_fixed_random_lambdas(seed):
    rng = random.Random(seed)
    for _ in range(10):
        den = rng.randint(2, 40)
        lam = Fraction(rng.randint(3 * den + 1, 5 * den - 1), den)
        em = as_exact_map(make_F(lam), f"F[{lam}]")
        got = find_unique_fixed(em)
        assert isinstance(got, QuasiHorseshoe) and got.kind == "loose"
        assert verify(got, em).ok


def test_dichotomy_G_swaps(G):
    got = dichotomy(G)
    assert isinstance(got, SwapStructure) and got.c == 0


def test_dichotomy_F_bitransitive(F):
    got = dichotomy(F)
    assert isinstance(got, BitransitiveEvidence)
    assert got.side == "left"
    assert got.witness == iv(-1, 0)
    assert got.image == iv("-1/64", "65/64")


def test_dichotomy_pure_mirror_swaps():
    mirror = as_exact_map(MirrorTranslationTiled(plmap([(0, 1), (1, 0)])), "m")
    got = dichotomy(mirror)
    assert isinstance(got, SwapStructure) and got.c == 0


def test_dichotomy_rejects_plmap(toy):
    with pytest.raises(NotApplicable):
        dichotomy(toy)


def test_amplify_requires_loose(tent):
    cert = quasihorseshoe(iv(0, 1), (iv(0, "1/2"), iv("1/2", 1)), 1)
    with pytest.raises(NotLoose):
        amplify(cert, tent, 3)


def test_amplify_psi_hits_domain_edge(psi):
    cert = quasihorseshoe(
        iv(0, 1), (iv(0, "21/64"), iv("21/64", "43/64"), iv("43/64", 1)), 1
    )
    loose = loosen(cert, psi)
    assert isinstance(amplify(loose, psi, 2), Unknown)


def test_amplify_w_map_to_five_pieces():
    w5 = as_exact_map(
        plmap([(0, 0), ("1/5", 1), ("2/5", 0), ("3/5", 1), ("4/5", 0), (1, 1)]),
        "w5",
    )
    cert = quasihorseshoe(iv(0, 1), (iv(0, "1/5"), iv("2/5", "3/5")), 1)
    assert verify(cert, w5).kind == "loose"
    got = amplify(cert, w5, 3)
    assert isinstance(got, QuasiHorseshoe)
    assert got.iterate == 2 and got.s == 5
    assert got.pieces == tuple(
        (iv(Fraction(k, 25), Fraction(k + 1, 25)),) for k in range(5)
    )
    assert verify(got, w5).ok
