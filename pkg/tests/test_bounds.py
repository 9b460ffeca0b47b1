from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpecc.bounds import (
    Status,
    admissible_bibd,
    admissible_frame3,
    admissible_frame4,
    binom,
    bounds_summary,
    cpecc_ub,
    estimate_xi,
    exact_e_eq_w_minus_1,
    johnson_ub,
    known_exact,
    lb_frame3,
    lb_frame4,
    qary_ub,
    triangle_transversal_check,
    turan_edges,
    ub_large_w,
    ub_w3_e1,
    weight_condition,
)
from lpecc.core import CPECC
from lpecc.errors import ParameterError


def test_binom_out_of_range_is_zero():
    assert binom(3, 5) == 0
    assert binom(-2, 1) == 0
    assert binom(5, -1) == 0
    assert binom(6, 2) == 15


@pytest.mark.parametrize("n,t,w,value", [(10, 2, 3, 2), (3, 1, 3, 1), (9, 4, 6, 1), (5, 1, 2, 2)])
def test_exact_e_eq_w_minus_1(n, t, w, value):
    assert exact_e_eq_w_minus_1(n, t, w) == value


def test_exact_e_eq_w_minus_1_precondition():
    with pytest.raises(ParameterError):
        exact_e_eq_w_minus_1(3, 4, 1)


def test_ub_large_w():
    e = ub_large_w(30, 1, 5)
    assert e.applicable and e.floor_value == 31 and e.value == Fraction(465, 15)
    assert not ub_large_w(8, 1, 3).applicable
    assert "w >= t^2+2t+2" in ub_large_w(8, 1, 3).clause
    e = ub_large_w(5, 1, 5)
    assert e.applicable and e.floor_value == 1
    assert ub_large_w(48, 1, 6).floor_value == 56


def test_ub_w3_e1():
    assert ub_w3_e1(8, 1).floor_value == 6
    assert ub_w3_e1(9, 2).floor_value == 5
    assert not ub_w3_e1(6, 2).applicable
    for n in range(6, 80):
        assert ub_w3_e1(n, 1).floor_value == n * (n + 1) // 12


def test_frame_lower_bounds():
    assert lb_frame3(8, 1).floor_value == 6
    assert lb_frame3(14, 1).floor_value == 17
    assert lb_frame3(14, 2).floor_value == 9
    assert not lb_frame3(9, 1).applicable
    assert lb_frame4(15, 1).floor_value == 7
    # direct evaluation: floor(24/8)*9 + floor(27/6) = 27 + 4
    assert lb_frame4(27, 1).floor_value == 31
    assert not lb_frame4(16, 1).applicable


def test_johnson():
    assert johnson_ub(2, 7, 1, 3) == 7
    assert johnson_ub(3, 10, 1, 3) == 60
    for q, n, w in [(2, 5, 3), (3, 6, 4), (2, 4, 4)]:
        assert johnson_ub(q, n, w, w) == 1
    with pytest.raises(ParameterError):
        johnson_ub(2, 3, 2, 4)


def test_weight_condition_examples():
    assert weight_condition(1, 3, 1)
    assert not weight_condition(2, 3, 1)
    assert weight_condition(1, 5, 3)
    with pytest.raises(ParameterError):
        weight_condition(1, 3, 3)


@pytest.mark.parametrize("t", [1, 2, 3, 4])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_weight_condition_eventually_true(t, d):
    truth = [weight_condition(t, w, w - d) for w in range(d, 201)]
    assert truth[-1]
    first_true_forever = max(i for i, v in enumerate(truth) if not v) + 1 if not all(truth) else 0
    assert all(truth[first_true_forever:])
    assert first_true_forever < 100


def test_qary_ub():
    e = qary_ub(2, 8, 1, 3, 1)
    assert e.value == Fraction(58, 6) and e.floor_value == 9 and e.applicable
    assert not qary_ub(2, 9, 2, 3, 1).applicable
    # leading term C(30,2)/C(6,2) = 29, then 1 + 30/4
    e = qary_ub(2, 30, 1, 5, 3)
    assert e.value == Fraction(75, 2) and e.floor_value == 37


def test_cpecc_ub():
    assert cpecc_ub(2, 30, 1, 5, 3).value == Fraction(435, 15)
    e = cpecc_ub(2, 48, 1, 6, 4)
    assert e.value == Fraction(1128, 21) and e.floor_value == 53
    assert not cpecc_ub(2, 9, 2, 3, 1).applicable


def test_turan_examples():
    assert turan_edges(5, 2) == 6
    assert turan_edges(6, 3) == 12
    assert turan_edges(4, 4) == 6
    assert turan_edges(3, 7) == 3


def test_turan_complement_identity():
    for v in range(0, 41):
        for r in range(1, max(v, 1) + 1):
            lam = v % r
            assert binom(v, 2) - turan_edges(v, r) == (
                lam * binom(-(-v // r), 2) + (r - lam) * binom(v // r, 2))


def test_estimate_xi_examples_and_lemma():
    assert estimate_xi(5, 3) == 9
    assert estimate_xi(7, 3) == 10
    assert estimate_xi(4, 3) == 10
    for v in range(2, 61):
        for m in range(1, v):
            assert estimate_xi(v, m) >= 3 * m
    with pytest.raises(ParameterError):
        estimate_xi(3, 3)


def test_triangle_transversal_examples():
    tri = [(1, 2), (2, 3), (1, 3)]
    assert triangle_transversal_check(tri, 5, 0)
    two = tri + [(4, 5), (5, 6), (4, 6)]
    assert triangle_transversal_check(two, 6, 1)
    assert not triangle_transversal_check(tri, 6, 1)
    with pytest.raises(ParameterError):
        triangle_transversal_check(tri, 3, 3)


@st.composite
def graphs(draw):
    v = draw(st.integers(3, 7))
    pairs = list(combinations(range(1, v + 1), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True))
    t = draw(st.integers(0, v - 3))
    return v, edges, t


@given(graphs())
def test_triangle_transversal_implies_edge_count(g):
    v, edges, t = g
    if triangle_transversal_check(edges, v, t):
        assert len(edges) >= 3 * (t + 1)


def test_admissible_bibd():
    assert admissible_bibd(7, 3)
    assert not admissible_bibd(8, 3)
    assert admissible_bibd(49, 7)
    assert admissible_bibd(31, 6)


def test_admissible_frame3():
    assert admissible_frame3(2, 4)
    assert not admissible_frame3(2, 5)
    assert not admissible_frame3(1, 7)
    assert admissible_frame3(2, 7)


@pytest.mark.parametrize("g,m,status", [
    (3, 5, Status.EXISTS),
    (36, 12, Status.POSSIBLE_EXCEPTION),
    (6, 7, Status.POSSIBLE_EXCEPTION),
    (6, 11, Status.EXISTS),
    (30, 47, Status.POSSIBLE_EXCEPTION),
    (66, 23, Status.POSSIBLE_EXCEPTION),
    (2190, 7, Status.POSSIBLE_EXCEPTION),
    (2202, 7, Status.EXISTS),
    (42, 27, Status.POSSIBLE_EXCEPTION),
    (11238, 23, Status.POSSIBLE_EXCEPTION),
    (18, 15, Status.POSSIBLE_EXCEPTION),
    (18, 7, Status.EXISTS),
    (3, 4, Status.NOT_ADMISSIBLE),
    (4, 5, Status.NOT_ADMISSIBLE),
    (3, 6, Status.NOT_ADMISSIBLE),
])
def test_admissible_frame4(g, m, status):
    assert admissible_frame4(g, m).status is status


def test_known_exact_entries():
    assert known_exact(2, 6, 1, 3, 1).floor_value == 2
    assert known_exact(2, 6, 2, 3, 1).floor_value == 1
    assert known_exact(2, 8, 2, 3, 1).floor_value == 4
    assert known_exact(2, 7, 2, 3, 1) is None
    assert known_exact(2, 20, 1, 4, 2).floor_value == 21
    assert known_exact(2, 10, 2, 3, 2).floor_value == 2
    assert known_exact(2, 5, 2, 1, 0) is None


def test_bounds_summary():
    rep = bounds_summary(2, 6, 1, 3, 1)
    assert rep["known_exact"].floor_value == 2
    assert bounds_summary(2, 6, 2, 3, 1)["known_exact"].floor_value == 1
    rep = bounds_summary(2, 30, 1, 5, 3)
    assert rep["ub_large_w"].applicable and rep["ub_large_w"].floor_value == 31
    assert rep.best_upper() == 31
    for entry in rep.entries:
        if not entry.applicable:
            assert entry.clause
    doc = rep.to_dict()
    assert {"name", "value", "floor", "applicable", "clause"} <= set(doc["entries"][0])
    cp = bounds_summary(2, 48, 1, 6, 4, CPECC)
    assert cp["cpecc_ub"].applicable
    assert "known_exact" not in [e.name for e in cp.entries]


@given(st.integers(2, 3), st.integers(1, 30), st.integers(1, 6), st.integers(1, 6), st.integers(0, 5))
def test_floor_matches_value(q, n, t, w, e):
    if t > n or w > n:
        return
    for entry in bounds_summary(q, n, t, w, e).entries:
        if entry.value is not None:
            assert entry.floor_value == entry.value.numerator // entry.value.denominator


@given(st.integers(1, 40), st.integers(1, 5), st.integers(1, 8))
def test_upper_bounds_monotone_in_n(n, t, w):
    if w > n:
        return
    assert ub_large_w(n + 1, t, w).value >= ub_large_w(n, t, w).value
    assert ub_w3_e1(n + 1, t).value >= ub_w3_e1(n, t).value
    if w >= 2:
        assert qary_ub(2, n + 1, t, w, w - 1).value >= qary_ub(2, n, t, w, w - 1).value
