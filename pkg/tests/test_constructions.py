from __future__ import annotations

import random
from math import comb

import pytest

from lpecc.bounds import lb_frame3, lb_frame4
from lpecc.constructions import (
    extract_bibd,
    lpecc_from_frame3,
    lpecc_from_frame4,
    lpecc_from_packing,
    pi,
    qary_from_cwc,
)
from lpecc.core import CPECC, LpeccCode, QaryCodeword, check_w_minus_2_structure, hamming_distance, tau, verify_code
from lpecc.designs import ConstantWeightCode, Packing, affine_plane, develop, planar_difference_set, search_frame
from lpecc.errors import ParameterError


@pytest.fixture(scope="module")
def affine_code() -> LpeccCode:
    return lpecc_from_packing(affine_plane(7), 1, 6, 4)


# ------------------------------------------------------------- packings


def test_fano_pairs_code():
    code = lpecc_from_packing(develop([1, 2, 4], 7), 1, 2, 0)
    assert code.b == 7 and code.params.n == 6
    assert verify_code(code)
    assert code.provenance["codesets"][0].startswith(("block:", "infinity-block:"))


def test_planar_code_is_pair_tight():
    _, plane = planar_difference_set(5)
    code = lpecc_from_packing(plane, 1, 5, 3)
    assert code.b == 31
    assert sorted(tau(cs, 2) for cs in code.codesets) == [10] * 6 + [15] * 25
    rep = check_w_minus_2_structure(code)
    assert rep.ok and rep.stats == {"tau_sum": comb(30, 2), "pair_count": comb(30, 2)}


def test_affine_code(affine_code):
    assert affine_code.b == 56 and affine_code.params.n == 48
    assert verify_code(affine_code, characterization=True)


def test_infinity_choice_changes_labels_not_size():
    plane = develop([1, 2, 4], 7)
    codes = [lpecc_from_packing(plane, 1, 2, 0, infinity=x) for x in (1, 4, 7)]
    assert {c.b for c in codes} == {7}
    assert "infinity=4" in codes[1].provenance["source"]


@pytest.mark.parametrize("args", [
    (1, 3, 0),     # block size mismatch: w+t = 4 != 3
    (1, 2, 1),     # r = 2 but w-e = 1
    (3, 2, 0),     # t > w
])
def test_packing_parameter_errors(args):
    with pytest.raises(ParameterError):
        lpecc_from_packing(develop([1, 2, 4], 7), *args)


def test_packing_input_checks():
    fano = develop([1, 2, 4], 7)
    with pytest.raises(ParameterError):
        lpecc_from_packing(fano, 1, 2, 0, infinity=8)
    bad = Packing(7, 3, 2, fano.blocks + (fano.blocks[0],))
    with pytest.raises(ParameterError):
        lpecc_from_packing(bad, 1, 2, 0)


# ------------------------------------------------------------- frames


@pytest.mark.parametrize("m,t,size", [(4, 1, 6), (7, 1, 17), (7, 2, 9), (7, 3, 8), (4, 2, 1), (4, 3, 1)])
def test_frame3_sizes(m, t, size):
    code = lpecc_from_frame3(search_frame(3, 2, m), t)
    assert code.b == size
    assert verify_code(code)
    if t == 1 or m == 7:
        assert size >= lb_frame3(2 * m, t).floor_value


def test_frame3_discards_are_recorded():
    code = lpecc_from_frame3(search_frame(3, 2, 7), 2)
    groups = [d for d in code.provenance["discarded"] if d.startswith("groups")]
    assert len(groups) == 7 % 3


def test_frame4_size():
    code = lpecc_from_frame4(search_frame(4, 3, 5), 1)
    assert code.b == 7 == lb_frame4(15, 1).floor_value
    assert verify_code(code, characterization=True)


def test_frame_kind_errors():
    with pytest.raises(ParameterError):
        lpecc_from_frame3(search_frame(4, 3, 5), 1)
    with pytest.raises(ParameterError):
        lpecc_from_frame4(search_frame(3, 2, 4), 1)


# ------------------------------------------------------------- q-ary


def qword(*entries):
    return QaryCodeword(tuple(entries), 3)


def test_qary_example():
    c = ConstantWeightCode(3, 5, 5, 3, (qword(1, 1, 1, 0, 0), qword(0, 0, 2, 2, 2)))
    code = qary_from_cwc(c, 1, 2, 1)
    assert code.b == 2 and all(len(cs) == 3 for cs in code.codesets)
    assert verify_code(code)
    assert verify_code(qary_from_cwc(c, 1, 2, 1, CPECC))


def test_qary_rejects_close_or_wrong_weight_words():
    close = ConstantWeightCode(3, 5, 3, 3, (qword(1, 1, 1, 0, 0), qword(0, 1, 2, 2, 0)))
    with pytest.raises(ParameterError):
        qary_from_cwc(close, 1, 2, 1)
    light = ConstantWeightCode(3, 5, 3, 2, (qword(1, 1, 0, 0, 0),))
    with pytest.raises(ParameterError):
        qary_from_cwc(light, 1, 2, 1)


def restriction_samples(rng: random.Random, count: int):
    """Random (x, y, S1, S2, w, t): words of weight w+t and w-subsets of their supports."""
    for _ in range(count):
        q = rng.choice((2, 3))
        n = rng.randint(3, 9)
        w = rng.randint(1, n - 1)
        t = rng.randint(1, n - w)
        x, y = (QaryCodeword.from_pairs(n, [(i, rng.randint(1, q - 1)) for i in rng.sample(range(1, n + 1), w + t)], q)
                for _ in range(2))
        s1 = rng.sample(sorted(x.support), w)
        s2 = rng.sample(sorted(y.support), w)
        yield x, y, s1, s2, w, t


def test_distance_identity_on_samples():
    """d(x^S1, y^S2) = 2w - |supp meet| - |pi meet|, and the construction's distance follows."""
    rng = random.Random(20261015)
    checked = 0
    for x, y, s1, s2, w, t in restriction_samples(rng, 10_000):
        a, b = x.restrict(s1), y.restrict(s2)
        assert hamming_distance(a, b) == 2 * w - len(a.support & b.support) - len(pi(a) & pi(b))
        for e in range(w + 1):
            if hamming_distance(x, y) >= 2 * (e + t) + 1:
                assert hamming_distance(a, b) >= 2 * e + 1
                checked += 1
    assert checked > 1000


# ------------------------------------------------------------- reverse map


def test_extract_bibd_round_trip(affine_code):
    design = extract_bibd(affine_code)
    assert design.n == 49 and design.k == 7
    assert set(design.blocks) == set(affine_plane(7).blocks)


def test_extract_bibd_rejects_non_extremal(affine_code):
    with pytest.raises(ParameterError):
        extract_bibd(affine_code.without_codeset(0))
    _, plane = planar_difference_set(5)
    with pytest.raises(ParameterError):
        extract_bibd(lpecc_from_packing(plane, 1, 5, 3))
    with pytest.raises(ParameterError):
        extract_bibd(lpecc_from_frame3(search_frame(3, 2, 4), 1))
