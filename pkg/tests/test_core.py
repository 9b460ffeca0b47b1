from __future__ import annotations

import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpecc.core import (
    CPECC,
    LPECC,
    Codeset,
    LpeccCode,
    LpeccParams,
    QaryCodeword,
    check_w_minus_2_structure,
    dumps_canonical,
    hamming_distance,
    load_code,
    loads_document,
    save_code,
    tau,
    verify_code,
    verify_property_A,
    verify_property_B,
    verify_property_C,
)
from lpecc.errors import DimensionError, ParameterError, ParseError


def binary_code(n, t, w, e, *codesets, mode=LPECC):
    return LpeccCode(LpeccParams(2, n, t, w, e, mode),
                     tuple(Codeset.from_supports(n, cs) for cs in codesets))


def word(*entries, q=2):
    return QaryCodeword(tuple(entries), q)


# ------------------------------------------------------------- codewords


def test_support_weight_and_encoding():
    x = QaryCodeword.from_support(6, [3, 1, 2])
    assert x.support == frozenset({1, 2, 3})
    assert x.weight == 3
    assert x.encode() == [1, 2, 3]
    y = QaryCodeword.from_pairs(5, [(2, 2), (4, 1)], 3)
    assert y.entries == (0, 2, 0, 1, 0)
    assert y.encode() == [[2, 2], [4, 1]]


@pytest.mark.parametrize("entries,q", [((0, 3), 3), ((-1, 0), 2), ((), 2), ((0, 1), 1)])
def test_codeword_rejects_bad_symbols(entries, q):
    with pytest.raises(ParameterError):
        QaryCodeword(entries, q)


def test_from_support_rejects_out_of_range():
    with pytest.raises(ParameterError):
        QaryCodeword.from_support(4, [0])
    with pytest.raises(ParameterError):
        QaryCodeword.from_support(4, [5])


def test_hamming_examples():
    x = QaryCodeword.from_support(6, [1, 2, 3])
    assert hamming_distance(x, x) == 0
    assert hamming_distance(x, QaryCodeword.from_support(6, [1, 2, 4])) == 2
    assert hamming_distance(word(1, 1, 1, 0, q=3), word(0, 2, 2, 2, q=3)) == 4


def test_hamming_dimension_mismatch():
    with pytest.raises(DimensionError):
        hamming_distance(word(0, 1), word(0, 1, 1))
    with pytest.raises(DimensionError):
        hamming_distance(word(0, 1), word(0, 1, q=3))


words3 = st.lists(st.integers(0, 2), min_size=5, max_size=5).map(lambda v: word(*v, q=3))


@given(words3, words3, words3)
def test_hamming_is_a_metric(x, y, z):
    assert (hamming_distance(x, y) == 0) == (x == y)
    assert hamming_distance(x, y) == hamming_distance(y, x)
    assert hamming_distance(x, z) <= hamming_distance(x, y) + hamming_distance(y, z)


def test_restrict():
    x = word(2, 0, 1, 1, q=3)
    assert x.restrict([1, 2, 4]).entries == (2, 0, 0, 1)


# ------------------------------------------------------------- containers


def test_codeset_canonical_and_validation():
    cs = Codeset.from_supports(5, [[3, 4], [1, 2]])
    assert cs.encode() == [[1, 2], [3, 4]]
    assert cs.union() == frozenset({1, 2, 3, 4})
    with pytest.raises(ParameterError):
        Codeset(())
    with pytest.raises(ParameterError):
        Codeset.from_supports(4, [[1], [1]])
    with pytest.raises(DimensionError):
        Codeset((word(1, 0), word(1, 0, 0)))


@pytest.mark.parametrize("args", [(1, 4, 1, 2, 0), (2, 0, 1, 1, 0), (2, 4, 0, 2, 0), (2, 4, 5, 2, 0),
                                  (2, 4, 1, 5, 0), (2, 4, 1, 2, -1)])
def test_params_validation(args):
    with pytest.raises(ParameterError):
        LpeccParams(*args)
    with pytest.raises(ParameterError):
        LpeccParams(2, 4, 1, 2, 0, mode="bogus")


def test_code_rejects_wrong_length():
    with pytest.raises(DimensionError):
        LpeccCode(LpeccParams(2, 5, 1, 2, 0), (Codeset.from_supports(4, [[1]]),))


def test_file_round_trip(tmp_path):
    code = binary_code(6, 1, 3, 1, [[4, 5, 6], [1, 2]], [[3]])
    path = tmp_path / "c.json"
    save_code(code, str(path))
    back = load_code(str(path))
    assert back == code
    text = path.read_text()
    assert text == dumps_canonical(back.to_dict())
    assert json.loads(text)["codesets"] == [[[1, 2], [4, 5, 6]], [[3]]]


def test_qary_file_round_trip(tmp_path):
    cs = Codeset((word(1, 1, 1, 0, 0, q=3),))
    code = LpeccCode(LpeccParams(3, 5, 1, 3, 1), (cs,))
    path = tmp_path / "q.json"
    save_code(code, str(path))
    assert load_code(str(path)) == code


@pytest.mark.parametrize("text", ['{"q": 2', "[]", '{"q":2,"n":4,"t":1,"w":2}',
                                  '{"q":2,"n":4,"t":1,"w":2,"e":0,"codesets":[[[9]]]}'])
def test_malformed_documents(text):
    with pytest.raises(ParseError):
        LpeccCode.from_dict(loads_document(text))


# ------------------------------------------------------------- verifiers


def test_property_A_examples():
    assert verify_property_A(binary_code(4, 1, 2, 0, [[1, 2], [3, 4]])).ok
    rep = verify_property_A(binary_code(4, 2, 2, 0, [[1, 2], [3, 4]]))
    assert not rep.ok
    assert rep.violations[0].witness == [1, 3]
    assert rep.violations[0].codesets == (0,)
    zero = LpeccCode(LpeccParams(2, 4, 4, 2, 0), (Codeset((word(0, 0, 0, 0),)),))
    assert verify_property_A(zero).ok


def test_property_B_examples():
    assert verify_property_B(binary_code(5, 1, 3, 1, [[1, 2, 3], [4]])).ok
    rep = verify_property_B(binary_code(5, 1, 3, 1, [[1, 2, 3, 4], [5]]))
    assert [v.witness for v in rep.violations] == [[1, 2, 3, 4]]
    lp = binary_code(5, 1, 3, 1, [[1, 2], [3, 4, 5]])
    assert verify_property_B(lp).ok
    assert not verify_property_B(lp.with_mode(CPECC)).ok


def test_property_C_examples():
    rep = verify_property_C(binary_code(6, 1, 3, 1, [[1, 2, 3]], [[1, 2, 4]]))
    assert not rep.ok and rep.violations[0].witness["distance"] == 2
    assert verify_property_C(binary_code(6, 1, 3, 1, [[1, 2, 3]], [[4, 5, 6]])).ok
    assert verify_property_C(binary_code(6, 1, 3, 9, [[1, 2, 3]])).ok


def test_verify_code_degenerate_and_moved_word():
    from lpecc.constructions import lpecc_from_frame3
    from lpecc.designs import search_frame

    assert verify_code(LpeccCode(LpeccParams(2, 4, 1, 2, 0))).ok
    code = lpecc_from_frame3(search_frame(3, 2, 4), 1)
    assert verify_code(code).ok
    # a codeword of one codeset also placed in another sits at distance 0
    sets = list(code.codesets)
    sets[1] = Codeset(sets[1].words + (sets[0].words[0],))
    rep = verify_code(LpeccCode(code.params, tuple(sets)))
    assert not rep.passed["C"] and not rep.passed["disjoint"]
    assert rep.violations_of("C")[0].witness["distance"] == 0
    dup = binary_code(4, 1, 2, 0, [[1], [2]], [[1], [3]])
    rep = verify_code(dup)
    assert not rep.passed["disjoint"] and not rep.passed["C"]


def test_tau_examples():
    assert tau(Codeset.from_supports(5, [[1, 2, 3], [3, 4, 5]]), 2) == 6
    assert tau(Codeset.from_supports(7, [[2, 3, 5, 7]]), 3) == 4
    assert tau(Codeset.from_supports(5, [[1, 2], [3]]), 3) == 0


def test_structure_check_on_frame_code():
    from lpecc.constructions import lpecc_from_frame3
    from lpecc.designs import search_frame

    code = lpecc_from_frame3(search_frame(3, 2, 4), 1)
    rep = check_w_minus_2_structure(code)
    assert rep.ok
    assert rep.stats == {"tau_sum": 28, "pair_count": 28}


def test_structure_check_failures():
    rep = check_w_minus_2_structure(binary_code(6, 1, 3, 1, [[1, 2, 3]], [[1, 2, 4]]))
    assert not rep.passed["3''-i"]
    assert rep.violations_of("3''-i")[0].witness == [1, 2]
    code = LpeccCode(LpeccParams(2, 8, 1, 6, 4),
                     (Codeset.from_supports(8, [[1]]), Codeset.from_supports(8, [[2, 3, 4, 5, 6, 7]])))
    assert not check_w_minus_2_structure(code).passed["2''"]


@pytest.mark.parametrize("code", [
    binary_code(6, 1, 3, 0, [[1]], [[2]]),
    binary_code(6, 1, 3, 1, [[1]]),
    LpeccCode(LpeccParams(3, 6, 1, 3, 1), (Codeset((word(1, 0, 0, 0, 0, 0, q=3),)),
                                          Codeset((word(0, 2, 0, 0, 0, 0, q=3),)))),
])
def test_structure_check_preconditions(code):
    with pytest.raises(ParameterError):
        check_w_minus_2_structure(code)


# ------------------------------------------------------------- deletion invariants


@st.composite
def small_codes(draw):
    n = draw(st.integers(3, 6))
    t = draw(st.integers(1, 2))
    w = draw(st.integers(1, 3))
    e = draw(st.integers(0, 1))
    pool = [frozenset(s) for k in range(1, w + 1) for s in combinations(range(1, n + 1), k)]
    chosen = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=8, unique=True))
    b = draw(st.integers(1, min(3, len(chosen))))
    parts = [chosen[i::b] for i in range(b)]
    return binary_code(n, t, w, e, *[[sorted(s) for s in p] for p in parts])


def brute_valid(code):
    p = code.params
    for cs in code.codesets:
        for T in combinations(range(1, p.n + 1), p.t):
            if not any(not (x.support & set(T)) for x in cs):
                return False
        if any(x.weight > p.w for x in cs):
            return False
    for a, b in combinations(code.codesets, 2):
        if any(hamming_distance(x, y) < p.min_distance for x in a for y in b):
            return False
    return True


@settings(max_examples=200)
@given(small_codes())
def test_verifier_matches_brute_force(code):
    assert verify_code(code).ok == brute_valid(code)


@settings(max_examples=200)
@given(small_codes(), st.data())
def test_deletion_invariants(code, data):
    rep = verify_code(code)
    if not rep.ok:
        return
    i = data.draw(st.integers(0, code.b - 1))
    assert verify_code(code.without_codeset(i)).ok
    cs = code.codesets[i]
    if len(cs) > 1:
        j = data.draw(st.integers(0, len(cs) - 1))
        shrunk_cs = Codeset(cs.words[:j] + cs.words[j + 1:])
        shrunk = LpeccCode(code.params, code.codesets[:i] + (shrunk_cs,) + code.codesets[i + 1:])
        r2 = verify_code(shrunk)
        assert r2.passed["B"] and r2.passed["C"] and r2.passed["disjoint"]
        assert r2.passed["A"] == brute_valid(shrunk)


@settings(max_examples=100)
@given(small_codes())
def test_passing_w_minus_2_codes_satisfy_structure(code):
    p = code.params
    if p.e != p.w - 2 or code.b < 2 or not verify_code(code):
        return
    rep = check_w_minus_2_structure(code)
    assert rep.ok
    assert rep.stats["tau_sum"] <= rep.stats["pair_count"]
