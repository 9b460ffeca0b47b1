"""Codes built from packings, frames and constant-weight codes, and the reverse map
from an extremal e = w-2 code back to its (n+1, w+t, 1)-BIBD.

Every builder verifies its output and raises ``InternalError`` if the result
is not a valid code.  Codesets come out in canonical order, each tagged with
the design element it was built from under ``code.provenance``.
"""

from __future__ import annotations

from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from .core import (
    LPECC,
    Codeset,
    LpeccCode,
    LpeccParams,
    QaryCodeword,
    hamming_distance,
    verify_code,
)
from .designs import ConstantWeightCode, Frame, Packing, verify_frame, verify_packing
from .errors import InternalError, ParameterError, StructureError


def _assemble(params: LpeccParams, tagged: list[tuple[Codeset, str]], source: str,
              discarded: Sequence[str] = ()) -> LpeccCode:
    tagged = sorted(tagged, key=lambda pair: pair[0].encode())
    record = {
        "source": source,
        "params": {"q": params.q, "n": params.n, "t": params.t, "w": params.w, "e": params.e,
                   "mode": params.mode},
        "codesets": [tag for _, tag in tagged],
        "discarded": list(discarded),
    }
    code = LpeccCode(params, tuple(cs for cs, _ in tagged), record)
    report = verify_code(code)
    if not report:
        raise InternalError(f"{source} produced an invalid code: {report.to_dict()['violations'][:3]}")
    return code


def _fmt(block: Iterable[int]) -> str:
    return ",".join(map(str, block))


def lpecc_from_packing(p: Packing, t: int, w: int, e: int,
                       infinity: Optional[int] = None) -> LpeccCode:
    """Binary (n, t, w, e) code from a (w-e)-(n+1, w+t, 1) packing.

    Blocks missing ``infinity`` give all their w-subsets; blocks through it
    give the (w-1)-subsets of the rest.  Remaining points are relabelled
    1..n in increasing order.
    """
    if infinity is None:
        infinity = p.n
    if not (1 <= t <= w and w >= e + 1):
        raise ParameterError(f"need 1 <= t <= w and w >= e+1; got t={t}, w={w}, e={e}")
    if p.k != w + t or p.r != w - e or p.lam != 1:
        raise ParameterError(
            f"need a {w - e}-({p.n}, {w + t}, 1) packing; got {p.r}-({p.n}, {p.k}, {p.lam})"
        )
    if not 1 <= infinity <= p.n:
        raise ParameterError(f"infinity point {infinity} outside [1, {p.n}]")
    check = verify_packing(p)
    if not check:
        raise ParameterError(f"input is not a packing: {check.reason} {check.witness}")
    n = p.n - 1
    relabel = {x: (x if x < infinity else x - 1) for x in range(1, p.n + 1) if x != infinity}
    params = LpeccParams(2, n, t, w, e)
    tagged = []
    for block in p.blocks:
        if infinity in block:
            rest = [relabel[x] for x in block if x != infinity]
            supports = combinations(sorted(rest), w - 1)
            tag = f"infinity-block:{_fmt(block)}"
        else:
            supports = combinations(sorted(relabel[x] for x in block), w)
            tag = f"block:{_fmt(block)}"
        tagged.append((Codeset.from_supports(n, supports), tag))
    return _assemble(params, tagged, f"packing {p.r}-({p.n},{p.k},1), infinity={infinity}")


def _from_frame(f: Frame, t: int, w: int, e: int) -> LpeccCode:
    check = verify_frame(f)
    if not check:
        raise ParameterError(f"invalid frame: {check.reason} {check.witness}")
    n = f.points
    params = LpeccParams(2, n, t, w, e)
    tagged: list[tuple[Codeset, str]] = []
    discarded: list[str] = []

    def chunk(items: list, label: str) -> None:
        full = len(items) - len(items) % (t + 1)
        for s in range(0, full, t + 1):
            part = items[s:s + t + 1]
            tagged.append((Codeset.from_supports(n, part),
                           f"{label}:" + "|".join(_fmt(b) for b in part)))
        discarded.extend(f"{label}:{_fmt(b)}" for b in items[full:])

    chunk(list(f.groups), "groups")
    for ci, (hole, blocks) in enumerate(f.classes):
        chunk(list(blocks), f"class{ci}(hole={hole})")
    return _assemble(params, tagged, f"{f.k}-frame of type {f.g}^{f.m}", discarded)


def lpecc_from_frame3(f: Frame, t: int) -> LpeccCode:
    """(n, t, 3, 1) code: t+1 groups per codeset plus t+1 blocks of a class per codeset."""
    if f.k != 3 or f.g != 2:
        raise ParameterError(f"need a 3-frame of type 2^m; got k={f.k}, g={f.g}")
    return _from_frame(f, t, 3, 1)


def lpecc_from_frame4(f: Frame, t: int) -> LpeccCode:
    """(n, t, 4, 2) code assembled like the 3-frame case from a 4-frame of type 3^m."""
    if f.k != 4 or f.g != 3:
        raise ParameterError(f"need a 4-frame of type 3^m; got k={f.k}, g={f.g}")
    return _from_frame(f, t, 4, 2)


def pi(x: QaryCodeword) -> frozenset[tuple[int, int]]:
    """Nonzero (position, symbol) pairs of a codeword."""
    return frozenset((i + 1, v) for i, v in enumerate(x.entries) if v)


def qary_from_cwc(c: ConstantWeightCode, t: int, w: int, e: int, mode: str = LPECC) -> LpeccCode:
    """q-ary (n, t, w, e) code whose codeset for word x is all restrictions of x to w positions.

    Needs a CWC of weight w+t and minimum distance 2(e+t)+1; the distance is
    rechecked over all word pairs.
    """
    if t < 1 or e < 0 or w < 1:
        raise ParameterError(f"need t >= 1, w >= 1, e >= 0; got t={t}, w={w}, e={e}")
    for x in c.words:
        if x.weight != w + t or x.n != c.n or x.q != c.q:
            raise ParameterError(f"word {x.encode()} does not have weight w+t={w + t}")
    d = 2 * (e + t) + 1
    for x, y in combinations(c.words, 2):
        if hamming_distance(x, y) < d:
            raise ParameterError(
                f"words {x.encode()} and {y.encode()} at distance {hamming_distance(x, y)} < {d}"
            )
    params = LpeccParams(c.q, c.n, t, w, e, mode)
    tagged = []
    for x in c.words:
        words = tuple(x.restrict(S) for S in combinations(sorted(x.support), w))
        tagged.append((Codeset(words), f"word:{x.encode()}"))
    return _assemble(params, tagged, f"({c.n},{c.d},{c.w})_{c.q} constant-weight code")


def extract_bibd(code: LpeccCode) -> Packing:
    """Recover the (n+1, w+t, 1)-BIBD underlying an extremal (n, t, w, w-2) code.

    The new point n+1 is added to every codeset whose union has w+t-1
    points.  Each structural clause that fails raises ``StructureError``.
    """
    p = code.params
    n, t, w, b = p.n, p.t, p.w, code.b
    if p.q != 2 or p.e != w - 2:
        raise ParameterError(f"need a binary code with e = w-2; got q={p.q}, w={w}, e={p.e}")
    if w <= t * t + 2 * t + 2:
        raise ParameterError(f"need w > t^2+2t+2 = {t * t + 2 * t + 2}; got w={w}")
    pairs, per_block = comb(n + 1, 2), comb(w + t, 2)
    if pairs % per_block or b != pairs // per_block or b <= 1:
        raise ParameterError(
            f"need b = C(n+1,2)/C(w+t,2) > 1 exactly; got b={b}, C(n+1,2)/C(w+t,2)={pairs}/{per_block}"
        )
    report = verify_code(code)
    if not report:
        raise ParameterError("input code does not pass verification")

    for i, cs in enumerate(code.codesets):
        for x in cs:
            if x.weight not in (w - 1, w):
                raise StructureError(f"clause i: codeset {i} has a block of size {x.weight}")
    if n % (w + t - 1):
        raise StructureError(f"clause ii: w+t-1 = {w + t - 1} does not divide n = {n}")

    blocks = []
    for i, cs in enumerate(code.codesets):
        union = sorted(cs.union())
        supports = {tuple(sorted(x.support)) for x in cs}
        if len(union) == w + t - 1:
            need = set(combinations(union, w - 1))
            if not need <= supports:
                raise StructureError(f"clause iii: codeset {i} lacks some (w-1)-subset of its union")
            blocks.append(tuple(union) + (n + 1,))
        elif len(union) == w + t:
            if supports != set(combinations(union, w)):
                raise StructureError(f"clause iii: codeset {i} is not all w-subsets of its union")
            blocks.append(tuple(union))
        else:
            raise StructureError(f"clause iii: codeset {i} has union of size {len(union)}")
    design = Packing(n + 1, w + t, 2, tuple(blocks))
    check = verify_packing(design)
    if not (check and check.steiner):
        raise StructureError(f"clause iv: recovered blocks are not a BIBD ({check.reason} {check.witness})")
    return design
