"""Exact C(n,t,w,e) at tiny parameters, by maximum clique over minimal codesets.

Why the reduction is exact: removing a codeword from a codeset never breaks
property B or any cross-codeset distance, so any optimal code can be shrunk
until every codeset is inclusion-minimal among sets satisfying A(t).  Two
codesets that share a codeword have cross distance 0 < 2e+1, so a clique in
the compatibility graph is automatically a partition.  Hence C(n,t,w,e) is
the clique number of the graph whose vertices are the minimal codesets and
whose edges join codesets with all cross distances >= 2e+1.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Any, Optional

from .clique import bits, max_clique
from .core import (
    CPECC,
    LPECC,
    Codeset,
    LpeccCode,
    LpeccParams,
    QaryCodeword,
    hamming_distance,
    verify_code,
)
from .errors import InternalError, ResourceError

MAX_CODEWORDS = 128
MAX_HOT_SETS = 512
MAX_CANDIDATES = 400_000


@dataclass
class CandidateCodesetIndex:
    """Inclusion-minimal codesets satisfying A(t) and B(w), with compatibility bitsets."""

    params: LpeccParams
    words: list[QaryCodeword]
    codesets: list[tuple[int, ...]]  # indices into ``words``
    adjacency: list[int]

    def codeset(self, i: int) -> Codeset:
        return Codeset(tuple(self.words[j] for j in self.codesets[i]))

    def __len__(self) -> int:
        return len(self.codesets)


@dataclass
class SolveResult:
    size: int
    code: LpeccCode
    nodes_expanded: int
    wall_ms: int
    bounds_used: list[str] = field(default_factory=list)
    candidates: int = 0

    def summary(self) -> dict[str, Any]:
        return {
            "size": self.size,
            "nodes_expanded": self.nodes_expanded,
            "wall_ms": self.wall_ms,
            "bounds_used": list(self.bounds_used),
            "candidates": self.candidates,
        }


def admissible_words(q: int, n: int, w: int, mode: str, allow_zero: bool = False) -> list[QaryCodeword]:
    """Words allowed by property B, sorted by file encoding."""
    weights = [w] if mode == CPECC else range(0 if allow_zero else 1, w + 1)
    words = []
    for k in weights:
        for supp in combinations(range(n), k):
            for vals in product(range(1, q), repeat=k):
                entries = [0] * n
                for i, v in zip(supp, vals):
                    entries[i] = v
                words.append(QaryCodeword(tuple(entries), q))
    words.sort(key=QaryCodeword.sort_key)
    return words


def _minimal_covers(covers: list[int], full: int) -> list[tuple[int, ...]]:
    """All inclusion-minimal index sets whose covers union to ``full``.

    Branches on the lowest uncovered element; in the branch for option i,
    options before i are forbidden, so each family is produced once.  A
    family in which some member covers nothing privately is abandoned, since
    adding members cannot give that member a private element back.
    """
    nelem = full.bit_length()
    by_elem = [0] * nelem
    for i, c in enumerate(covers):
        m = c
        while m:
            low = m & -m
            by_elem[low.bit_length() - 1] |= 1 << i
            m ^= low
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def all_private(members: list[int]) -> bool:
        k = len(members)
        prefix = [0] * (k + 1)
        for a in range(k):
            prefix[a + 1] = prefix[a] | covers[members[a]]
        suffix = 0
        for a in range(k - 1, -1, -1):
            if not covers[members[a]] & ~(prefix[a] | suffix):
                return False
            suffix |= covers[members[a]]
        return True

    def rec(covered: int, forbidden: int) -> None:
        if covered == full:
            out.append(tuple(sorted(chosen)))
            if len(out) > MAX_CANDIDATES:
                raise ResourceError("MAX_CANDIDATES", MAX_CANDIDATES, len(out))
            return
        free = ~covered & full
        elem = (free & -free).bit_length() - 1
        opts = by_elem[elem] & ~forbidden
        while opts:
            low = opts & -opts
            i = low.bit_length() - 1
            opts ^= low
            chosen.append(i)
            if all_private(chosen):
                rec(covered | covers[i], forbidden)
            chosen.pop()
            forbidden |= low

    rec(0, 0)
    return out


def enumerate_minimal_codesets(q: int, n: int, t: int, w: int, e: int, mode: str = LPECC,
                               allow_zero: bool = False) -> CandidateCodesetIndex:
    """Candidate vertices for the clique search.

    By default the all-zero word is left out, which is the convention under
    which the published small values (for example C(4,1,3,1) = 1) hold; with
    ``allow_zero`` the singleton {0} becomes a candidate and sizes can grow
    by one.
    """
    params = LpeccParams(q, n, t, w, e, mode)
    words = admissible_words(q, n, w, mode, allow_zero)
    if len(words) > MAX_CODEWORDS:
        raise ResourceError("MAX_CODEWORDS", MAX_CODEWORDS, len(words))
    if comb(n, t) > MAX_HOT_SETS:
        raise ResourceError("MAX_HOT_SETS", MAX_HOT_SETS, comb(n, t))
    hot = [sum(1 << i for i in T) for T in combinations(range(n), t)]
    full = (1 << len(hot)) - 1
    covers = []
    for x in words:
        c = 0
        for j, tm in enumerate(hot):
            if not x.mask & tm:
                c |= 1 << j
        covers.append(c)

    zero = [i for i, x in enumerate(words) if x.mask == 0]
    families: list[tuple[int, ...]] = [(i,) for i in zero]
    # the zero word covers everything on its own, so no larger minimal family contains it
    rest = [0 if i in zero else c for i, c in enumerate(covers)]
    families += _minimal_covers(rest, full)
    families = sorted(set(families), key=lambda fam: [words[i].encode() for i in fam])

    d = params.min_distance
    nw = len(words)
    far = [0] * nw  # far[i]: words at distance >= d from word i
    for i in range(nw):
        for j in range(nw):
            if hamming_distance(words[i], words[j]) >= d:
                far[i] |= 1 << j
    nf = len(families)
    containing = [0] * nw
    for f, fam in enumerate(families):
        for i in fam:
            containing[i] |= 1 << f
    everything = (1 << nf) - 1
    adjacency = []
    for f, fam in enumerate(families):
        ok_words = (1 << nw) - 1
        for i in fam:
            ok_words &= far[i]
        bad = 0
        m = ~ok_words & ((1 << nw) - 1)
        while m:
            low = m & -m
            bad |= containing[low.bit_length() - 1]
            m ^= low
        adjacency.append(everything & ~bad & ~(1 << f))
    return CandidateCodesetIndex(params, words, families, adjacency)


def _pair_count(index: CandidateCodesetIndex, fam: tuple[int, ...]) -> int:
    pairs = set()
    for i in fam:
        pairs.update(combinations(sorted(index.words[i].support), 2))
    return len(pairs)


def _tau_bound(index: CandidateCodesetIndex):
    """Pair-counting bound sum(tau) <= C(n,2), valid for binary e = w-2 codes of size >= 2."""
    n = index.params.n
    taus = [_pair_count(index, fam) for fam in index.codesets]
    buckets: dict[int, int] = {}
    for f, tv in enumerate(taus):
        buckets[tv] = buckets.get(tv, 0) | (1 << f)
    order = sorted(buckets.items())
    cap = comb(n, 2)

    def extra(clique: list[int], cand: int) -> Optional[int]:
        room = cap - sum(taus[v] for v in clique)
        count = 0
        for tv, mask in order:
            c = (cand & mask).bit_count()
            if not c:
                continue
            if tv == 0:
                count += c
                continue
            take = min(c, room // tv)
            count += take
            room -= take * tv
            if take < c:
                break
        return count

    return extra


def lex_least_clique(adj: list[int], size: int, extra=None) -> tuple[list[int], int]:
    """Lexicographically least clique of the given (maximum) size.

    Vertices are fixed one at a time in increasing order; each tentative
    choice is kept only if a fast search confirms it still extends to a
    clique of the target size.
    """
    chosen: list[int] = []
    cand = (1 << len(adj)) - 1
    nodes = 0
    while len(chosen) < size:
        need = size - len(chosen) - 1
        pick = None
        for v in bits(cand):
            nxt = cand & adj[v] & ~((1 << (v + 1)) - 1)
            if nxt.bit_count() < need:
                continue
            if need:
                base = chosen + [v]
                bound = None if extra is None else (lambda cur, c, _b=base: extra(_b + cur, c))
                res = max_clique(adj, lower=need - 1, candidates=nxt, extra_bound=bound)
                nodes += res.nodes
                if res.size < need:
                    continue
            pick = v
            break
        if pick is None:
            raise InternalError(f"no clique of size {size} extends {chosen}")
        chosen.append(pick)
        cand = cand & adj[pick] & ~((1 << (pick + 1)) - 1)
    return chosen, nodes


_POOL_ADJ: list[int] = []
_POOL_FLOOR = 0


def _pool_init(adj: list[int], floor: int) -> None:
    global _POOL_ADJ, _POOL_FLOOR
    _POOL_ADJ, _POOL_FLOOR = adj, floor


def _pool_branch(v: int) -> tuple[int, int]:
    """Largest clique whose least vertex is v, if it beats the shared floor; else 0."""
    adj = _POOL_ADJ
    higher = adj[v] & ~((1 << (v + 1)) - 1)
    res = max_clique(adj, candidates=higher, lower=max(_POOL_FLOOR - 1, 0))
    found = res.size + 1 if res.size or _POOL_FLOOR <= 1 else 0
    return found, res.nodes


def greedy_clique_size(adj: list[int]) -> int:
    """Size of the clique built by taking vertices in index order whenever possible."""
    size, cand = 0, (1 << len(adj)) - 1
    while cand:
        v = (cand & -cand).bit_length() - 1
        size += 1
        cand &= adj[v]
    return size


def solve(q: int, n: int, t: int, w: int, e: int, mode: str = LPECC, threads: int = 1,
          allow_zero: bool = False) -> SolveResult:
    """Maximum code size with a lexicographically least optimal witness."""
    start = time.perf_counter()
    index = enumerate_minimal_codesets(q, n, t, w, e, mode, allow_zero)
    params = index.params
    adj = index.adjacency
    bounds_used = ["greedy-colouring"]
    extra = None
    if q == 2 and e == w - 2:
        extra = _tau_bound(index)
        bounds_used.append("pair-count sum(tau) <= C(n,2)")

    nodes = 0
    if threads > 1 and len(adj) > 1:
        # each worker owns the branches rooted at its vertices; the greedy
        # clique size is the common incumbent, so results do not depend on scheduling
        lower = greedy_clique_size(adj)
        chunk = max(1, len(adj) // (threads * 8))
        with ProcessPoolExecutor(threads, initializer=_pool_init, initargs=(adj, lower)) as pool:
            for found, cnt in pool.map(_pool_branch, range(len(adj)), chunksize=chunk):
                lower = max(lower, found)
                nodes += cnt
        size = lower
    else:
        res = max_clique(adj, extra_bound=extra)
        nodes += res.nodes
        size = res.size
    clique, wnodes = lex_least_clique(adj, size, extra)
    nodes += wnodes

    code = LpeccCode(params, tuple(index.codeset(i) for i in clique))
    report = verify_code(code)
    if not report:
        raise InternalError(f"solver witness failed verification: {report.to_dict()}")
    wall_ms = int((time.perf_counter() - start) * 1000)
    return SolveResult(size, code, nodes, wall_ms, bounds_used, len(index))


def exact_lpecc(q: int, n: int, t: int, w: int, e: int, mode: str = LPECC,
                threads: int = 1, allow_zero: bool = False) -> tuple[int, LpeccCode]:
    res = solve(q, n, t, w, e, mode, threads, allow_zero)
    return res.size, res.code
