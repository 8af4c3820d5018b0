"""Certified entropy machinery: covering matrices, Perron enclosures,
lap growth, and the exact log-value sandwich."""

import math
from fractions import Fraction

import pytest

from plcert.entropy import (
    CoveringMatrix,
    LogValue,
    compare_log_values,
    covering_matrix,
    cr_bounds,
    lap_entropy_sequence,
    markov_partition,
    mixing_matrix_check,
    perron_root,
)
from plcert.errors import InvariantViolated, SelfMapRequired, UncertifiedInput
from plcert.exact import interval
from plcert.families import make_F, make_H, make_phi, make_psi
from plcert.horseshoe import amplify, find_halfline, find_unique_fixed, quasihorseshoe, verify
from plcert.maps import as_exact_map
from plcert.plmap import plmap

LAM = Fraction(16, 5)
TOL = Fraction(1, 10**9)


def mat(rows):
    return CoveringMatrix(
        pieces=tuple((interval(i, i + 1),) for i in range(len(rows))),
        entries=tuple(tuple(r) for r in rows),
    )


@pytest.fixture(scope="module")
def tent():
    return plmap([(0, 0), ("1/2", 1), (1, 0)])


@pytest.fixture(scope="module")
def certF():
    return find_unique_fixed(as_exact_map(make_F(LAM), "F[16/5]"))


def test_covering_matrix_tent(tent):
    cm = covering_matrix(tent, [interval(0, "1/2"), interval("1/2", 1)], 1)
    assert cm.entries == ((1, 1), (1, 1))
    assert cm.size == 2


def test_covering_matrix_psi_loosened():
    pieces = [interval(0, "5/16"), interval("11/32", "21/32"),
              interval("11/16", 1)]
    cm = covering_matrix(make_psi(LAM), pieces, 1)
    assert cm.entries == ((1, 1, 1),) * 3


def test_covering_matrix_verified_cert_is_all_ones(certF):
    cm = covering_matrix(as_exact_map(make_F(LAM)), certF.pieces, 2)
    assert cm.entries == ((1, 1, 1),) * 3


def test_covering_matrix_rejects_empty(tent):
    with pytest.raises(InvariantViolated):
        covering_matrix(tent, [], 1)


def test_perron_all_ones():
    enc = perron_root(mat([[1, 1, 1]] * 3), 1e-9)
    assert enc.lo <= 3 <= enc.hi
    assert enc.hi - enc.lo <= TOL


def test_perron_fibonacci():
    enc = perron_root(mat([[1, 1], [1, 0]]), 1e-9)
    # golden ratio: the positive root of x^2 - x - 1
    assert enc.lo**2 - enc.lo - 1 <= 0 <= enc.hi**2 - enc.hi - 1
    assert enc.hi - enc.lo <= TOL
    assert abs(float(enc.lo) - 1.618033988749895) < 1e-8


def test_perron_permutation_and_degenerate():
    perm = perron_root(mat([[0, 1], [1, 0]]), 1e-9)
    assert perm.lo <= 1 <= perm.hi and perm.hi - perm.lo <= TOL
    red = perron_root(mat([[1, 1], [0, 1]]), 1e-9)
    assert red.lo == red.hi == 1
    zero = perron_root(mat([[0]]), 1e-9)
    assert zero.lo == zero.hi == 0


@pytest.mark.parametrize("rows, label", [
    ([[1, 1, 1]] * 3, "primitive"),
    ([[0, 1], [1, 0]], "irreducible-periodic(2)"),
    ([[1, 1], [0, 1]], "reducible"),
    ([[1]], "primitive"),
    ([[0]], "reducible"),
])
def test_mixing_matrix_check(rows, label):
    assert mixing_matrix_check(mat(rows)) == label


def test_markov_partition_tent(tent):
    assert markov_partition(tent, 10) == (0, Fraction(1, 2), 1)


def test_markov_partition_threefold():
    tent3 = plmap([(0, 0), ("1/3", 1), ("2/3", 0), (1, 1)])
    assert markov_partition(tent3, 10) == (0, Fraction(1, 3), Fraction(2, 3), 1)


def test_markov_partition_requires_self_map():
    with pytest.raises(SelfMapRequired):
        markov_partition(make_phi(LAM), 10)


def test_markov_partition_growing_orbit_returns_none():
    halver = plmap([(0, 0), ("1/3", "1/6"), (1, "1/2")])
    assert markov_partition(halver, 10) is None


def test_lap_entropy_tent(tent):
    rows = lap_entropy_sequence(tent, 6)
    assert [lap for _, lap, _ in rows] == [2**n for n in range(1, 7)]
    assert all(abs(val - math.log(2)) < 1e-12 for _, _, val in rows)


def test_lap_entropy_threefold():
    tent3 = plmap([(0, 0), ("1/3", 1), ("2/3", 0), (1, 1)])
    rows = lap_entropy_sequence(tent3, 5)
    assert [lap for _, lap, _ in rows] == [3**n for n in range(1, 6)]
    assert all(abs(val - math.log(3)) < 1e-12 for _, _, val in rows)


def test_lap_entropy_rate_nonincreasing():
    toy_self = plmap([(0, 0), ("1/2", "3/4"), (1, "1/4"), ("3/2", "3/2")])
    rows = lap_entropy_sequence(toy_self, 5)
    vals = [val for _, _, val in rows]
    assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


def test_log_value_ordering_and_witnesses():
    a = LogValue(Fraction(3), 2)
    b = LogValue(Fraction(16, 5), 2)
    assert a < b and not b < a
    assert compare_log_values(a, b) == ("<", "15 < 16")
    assert compare_log_values(LogValue(Fraction(9), 2), LogValue(Fraction(3), 1)) \
        == ("=", "9 = 9")
    assert compare_log_values(LogValue(Fraction(16, 5), 1), LogValue(Fraction(4), 1)) \
        == ("<", "16 < 20")


def test_log_value_symbolic_and_enclosure():
    assert LogValue(Fraction(3), 2).symbolic == "log(3)/2"
    assert LogValue(Fraction(16, 5), 1).symbolic == "log(16/5)"
    assert LogValue(Fraction(1), 1).symbolic == "0"
    lo, hi = LogValue(Fraction(3), 2).float_enclosure()
    assert lo <= 0.5493061443340549 <= hi
    assert hi - lo <= 1e-12


def test_log_value_rejects_contracting_arguments():
    with pytest.raises(InvariantViolated):
        LogValue(Fraction(1, 2), 1)
    with pytest.raises(InvariantViolated):
        LogValue(Fraction(2), 0)


def test_cr_bounds_F(certF):
    bounds = cr_bounds(as_exact_map(make_F(LAM)), [certF], LAM)
    assert bounds.lower == LogValue(Fraction(3), 2)
    assert bounds.upper == LogValue(LAM, 2)
    assert bounds.relation == "<" and bounds.comparison == "15 < 16"
    assert abs(bounds.lower_enclosure[0] - 0.5493061443340549) < 1e-9
    assert abs(bounds.upper_enclosure[0] - 0.5815754049028404) < 1e-9


def test_cr_bounds_H():
    H = as_exact_map(make_H(LAM), "H[16/5]")
    bounds = cr_bounds(H, [find_halfline(H)], LAM)
    assert bounds.lower == LogValue(Fraction(3), 1)
    assert bounds.upper == LogValue(LAM, 1)
    assert abs(bounds.lower_enclosure[0] - 1.0986122886681098) < 1e-9
    assert abs(bounds.upper_enclosure[0] - 1.1631508098056809) < 1e-9


def test_cr_bounds_without_certificates(tent):
    bounds = cr_bounds(tent, [], 1)
    assert bounds.lower.symbolic == "0" and bounds.upper.symbolic == "0"
    assert bounds.lower_enclosure == (0.0, 0.0)
    assert bounds.upper_enclosure == (0.0, 0.0)
    assert bounds.relation == "="


def test_cr_bounds_rejects_bad_certificate(tent):
    bad = quasihorseshoe(
        interval(0, 1), [interval(0, "1/2"), interval("1/4", 1)], 1
    )
    with pytest.raises(UncertifiedInput):
        cr_bounds(tent, [bad], 2)


def test_cr_bounds_uses_best_certificate():
    w5 = plmap([(0, 0), ("1/5", 1), ("2/5", 0), ("3/5", 1), ("4/5", 0), (1, 1)])
    em = as_exact_map(w5, "w5")
    base = quasihorseshoe(
        interval(0, 1), [interval(0, "1/5"), interval("2/5", "3/5")], 1,
        kind="loose",
    )
    assert verify(base, em).kind == "loose"
    amp = amplify(base, em, 3)
    assert amp.s == 5 and amp.iterate == 2
    bounds = cr_bounds(em, [base, amp], Fraction(5))
    assert bounds.lower == LogValue(Fraction(5), 2)
    assert bounds.lower.symbolic == "log(5)/2"
    cm = covering_matrix(em, amp.pieces, amp.iterate)
    assert all(e == 1 for row in cm.entries for e in row)
