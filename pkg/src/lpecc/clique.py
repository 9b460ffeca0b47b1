"""Exact maximum clique by branch and bound over int bitsets.

Vertices are ``0..len(adj)-1`` and ``adj[v]`` is the bitset of neighbours of
``v``.  Upper bounds come from greedy colouring of the candidate set.  Two
branching orders are offered:

* ``lex=True`` branches on candidates in increasing index order, so the
  first clique reaching the optimum size is the lexicographically least
  maximum clique (as a sorted index tuple).  The solver needs that for
  byte-stable witnesses.
* ``lex=False`` is the usual colour-ordered scheme, usually much faster.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import ResourceError

# extra_bound(clique, candidates) -> max number of further vertices, or None
ExtraBound = Callable[[list[int], int], Optional[int]]


@dataclass
class CliqueResult:
    clique: list[int]
    nodes: int

    @property
    def size(self) -> int:
        return len(self.clique)


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def build_adjacency(n: int, compatible: Callable[[int, int], bool]) -> list[int]:
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if compatible(i, j):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj


def heuristic_clique(adj: Sequence[int], candidates: Optional[int] = None, *,
                     seed: int = 0, rounds: int = 300) -> list[int]:
    """A large clique found by randomized greedy growth with drop-and-regrow moves.

    Deterministic for a given seed.  Used only to seed the exact search with
    a strong incumbent; it proves nothing on its own.
    """
    if candidates is None:
        candidates = (1 << len(adj)) - 1
    if not candidates:
        return []
    rng = random.Random(seed)

    def grow(clique: list[int], cand: int) -> list[int]:
        clique = list(clique)
        while cand:
            v = rng.choice(bits(cand))
            clique.append(v)
            cand &= adj[v]
        return clique

    def common(clique: list[int]) -> int:
        cand = candidates
        for u in clique:
            cand &= adj[u] & ~(1 << u)
        return cand

    cur = grow([], candidates)
    best = list(cur)
    pool = bits(candidates)
    for _ in range(rounds):
        v = rng.choice(pool)
        if v in cur:
            continue
        kept = [u for u in cur if adj[v] >> u & 1] + [v]
        nxt = grow(kept, common(kept))
        if len(nxt) >= len(cur) or rng.random() < 0.1:
            cur = nxt
        if len(cur) > len(best):
            best = list(cur)
    return sorted(best)


def colour_count(adj: Sequence[int], cand: int) -> int:
    """Number of colours used by a greedy colouring of ``cand``."""
    colours = 0
    while cand:
        colours += 1
        avail = cand
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            cand ^= low
            avail &= ~(adj[v] | low)
    return colours


def _colour_order(adj: Sequence[int], cand: int) -> tuple[list[int], list[int]]:
    order: list[int] = []
    colour: list[int] = []
    k = 0
    while cand:
        k += 1
        avail = cand
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            cand ^= low
            avail &= ~(adj[v] | low)
            order.append(v)
            colour.append(k)
    return order, colour


def max_clique(
    adj: Sequence[int],
    *,
    lex: bool = False,
    lower: int = 0,
    candidates: Optional[int] = None,
    extra_bound: Optional[ExtraBound] = None,
    max_nodes: Optional[int] = None,
) -> CliqueResult:
    """Maximum clique of the graph, or of the subgraph induced by ``candidates``.

    Only cliques strictly larger than ``lower`` are searched for; if none
    exists the returned clique is empty.  Past ``max_nodes`` search nodes a
    ``ResourceError`` is raised rather than returning an unproven answer.
    """
    n = len(adj)
    if candidates is None:
        candidates = (1 << n) - 1
    best: list[int] = []
    best_size = lower
    nodes = 0
    cur: list[int] = []

    def bound_ok(cand: int, col: int) -> bool:
        if len(cur) + col <= best_size:
            return False
        if extra_bound is not None:
            extra = extra_bound(cur, cand)
            if extra is not None and len(cur) + extra <= best_size:
                return False
        return True

    def tick() -> None:
        nonlocal nodes
        nodes += 1
        if max_nodes is not None and nodes > max_nodes:
            raise ResourceError("MAX_CLIQUE_NODES", max_nodes, nodes)

    def expand_lex(cand: int) -> None:
        nonlocal best, best_size
        tick()
        if len(cur) > best_size:
            best, best_size = list(cur), len(cur)
        if not cand:
            return
        if not bound_ok(cand, colour_count(adj, cand)):
            return
        rest = cand
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            if len(cur) + 1 + rest.bit_count() <= best_size:
                return
            cur.append(v)
            expand_lex(rest & adj[v])
            cur.pop()

    def expand_colour(cand: int) -> None:
        nonlocal best, best_size
        tick()
        if len(cur) > best_size:
            best, best_size = list(cur), len(cur)
        order, colour = _colour_order(adj, cand)
        for idx in range(len(order) - 1, -1, -1):
            if len(cur) + colour[idx] <= best_size:
                return
            # the problem-specific bound sees the shrinking candidate set too
            if extra_bound is not None and not bound_ok(cand, colour[idx]):
                return
            v = order[idx]
            cur.append(v)
            expand_colour(cand & adj[v])
            cur.pop()
            cand &= ~(1 << v)

    if lex:
        expand_lex(candidates)
    else:
        expand_colour(candidates)
    return CliqueResult(sorted(best), nodes)
