"""Packings, BIBDs, frames and constant-weight codes at desk scale.

Points are labelled ``1..n``.  Generators are exhaustive searches guarded by
named scale limits; exceeding a limit raises ``ResourceError`` instead of
truncating the search.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Any, Optional, Sequence

from .bounds import Status, admissible_frame3, admissible_frame4
from .clique import build_adjacency, heuristic_clique, max_clique
from .core import QaryCodeword, dumps_canonical, hamming_distance, loads_document
from .errors import (
    AdmissibilityError,
    ExistenceError,
    InternalError,
    ParameterError,
    ParseError,
    ResourceError,
)

MAX_PACKING_CANDIDATES = 5000
MAX_CWC_CANDIDATES = 5000
MAX_CWC_NODES = 2_000_000
MAX_FRAME_POINTS = 18
MAX_DIFFERENCE_SET_ORDER = 7
MAX_AFFINE_ORDER = 11

Block = tuple[int, ...]


def _canon_blocks(blocks) -> tuple[Block, ...]:
    return tuple(sorted(tuple(sorted(b)) for b in blocks))


@dataclass(frozen=True)
class Packing:
    """Blocks of size k on points 1..n with every r-set in at most ``lam`` blocks."""

    n: int
    k: int
    r: int
    blocks: tuple[Block, ...]
    lam: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", _canon_blocks(self.blocks))

    def to_dict(self) -> dict[str, Any]:
        return {"type": "packing", "n": self.n, "k": self.k, "r": self.r, "lambda": self.lam,
                "blocks": [list(b) for b in self.blocks]}


@dataclass(frozen=True)
class Frame:
    """A k-GDD whose blocks split into holey classes, one hole (group index) each."""

    k: int
    groups: tuple[Block, ...]
    classes: tuple[tuple[int, tuple[Block, ...]], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "groups", tuple(tuple(sorted(g)) for g in self.groups))
        classes = tuple((h, _canon_blocks(bl)) for h, bl in self.classes)
        object.__setattr__(self, "classes", tuple(sorted(classes)))

    @property
    def m(self) -> int:
        return len(self.groups)

    @property
    def g(self) -> int:
        return len(self.groups[0]) if self.groups else 0

    @property
    def points(self) -> int:
        return sum(len(g) for g in self.groups)

    @property
    def blocks(self) -> list[Block]:
        return [b for _, bl in self.classes for b in bl]

    def to_dict(self) -> dict[str, Any]:
        return {"type": "frame", "k": self.k, "g": self.g, "m": self.m,
                "groups": [list(g) for g in self.groups],
                "classes": [{"hole": h, "blocks": [list(b) for b in bl]} for h, bl in self.classes]}


@dataclass(frozen=True)
class ConstantWeightCode:
    q: int
    n: int
    d: int
    w: int
    words: tuple[QaryCodeword, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "words", tuple(sorted(self.words, key=QaryCodeword.sort_key)))

    def to_dict(self) -> dict[str, Any]:
        return {"type": "cwc", "q": self.q, "n": self.n, "d": self.d, "w": self.w,
                "words": [x.encode() for x in self.words]}


@dataclass(frozen=True)
class Check:
    """Outcome of a design verifier; ``witness`` names the first violation."""

    ok: bool
    reason: str = ""
    witness: Any = None
    steiner: bool = False

    def __bool__(self) -> bool:
        return self.ok


# ---------------------------------------------------------------- file format


def design_to_dict(design) -> dict[str, Any]:
    return design.to_dict()


def design_from_dict(doc: dict[str, Any]):
    try:
        kind = doc["type"]
        if kind == "packing":
            return Packing(int(doc["n"]), int(doc["k"]), int(doc["r"]),
                           tuple(tuple(b) for b in doc["blocks"]), int(doc.get("lambda", 1)))
        if kind == "frame":
            classes = tuple((int(c["hole"]), tuple(tuple(b) for b in c["blocks"]))
                            for c in doc["classes"])
            return Frame(int(doc["k"]), tuple(tuple(g) for g in doc["groups"]), classes)
        if kind == "cwc":
            q, n = int(doc["q"]), int(doc["n"])
            if q == 2:
                words = tuple(QaryCodeword.from_support(n, s) for s in doc["words"])
            else:
                words = tuple(QaryCodeword.from_pairs(n, s, q) for s in doc["words"])
            return ConstantWeightCode(q, n, int(doc["d"]), int(doc["w"]), words)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed design document: {exc!r}") from exc
    raise ParseError(f"unknown design type {doc.get('type')!r}")


def load_design(path: str):
    with open(path) as fh:
        return design_from_dict(loads_document(fh.read()))


def save_design(design, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(design.to_dict()))


# ---------------------------------------------------------------- verifiers


def verify_packing(p: Packing) -> Check:
    for b in p.blocks:
        if len(b) != p.k or len(set(b)) != p.k:
            return Check(False, f"block size != {p.k}", list(b))
        if not all(1 <= x <= p.n for x in b):
            return Check(False, "point outside [1, n]", list(b))
    counts: Counter = Counter()
    for b in p.blocks:
        counts.update(combinations(b, p.r))
    over = sorted(s for s, c in counts.items() if c > p.lam)
    if over:
        return Check(False, f"{p.r}-subset in more than {p.lam} blocks", list(over[0]))
    full = comb(p.n, p.r) * p.lam
    steiner = len(p.blocks) * comb(p.k, p.r) == full
    return Check(True, steiner=steiner)


def verify_frame(f: Frame) -> Check:
    k = f.k
    points = sorted(x for g in f.groups for x in g)
    if points != list(range(1, len(points) + 1)):
        return Check(False, "groups do not partition 1..n", points)
    if len({len(g) for g in f.groups}) > 1:
        return Check(False, "groups of unequal size", [len(g) for g in f.groups])
    owner: dict[tuple[int, int], str] = {}
    for i, g in enumerate(f.groups):
        for pr in combinations(g, 2):
            owner[pr] = f"group {i}"
    for h, blocks in f.classes:
        if not 0 <= h < f.m:
            return Check(False, "hole index out of range", h)
        hole = set(f.groups[h])
        covered: list[int] = []
        for b in blocks:
            if len(b) != k or len(set(b)) != k:
                return Check(False, f"block size != {k}", list(b))
            if hole & set(b):
                return Check(False, "block meets its class's hole", {"hole": h, "block": list(b)})
            covered.extend(b)
            for pr in combinations(b, 2):
                if pr in owner:
                    return Check(False, "pair covered twice", list(pr))
                owner[pr] = f"block {b}"
        if sorted(covered) != sorted(set(points) - hole):
            return Check(False, "class does not partition the complement of its hole", h)
    for pr in combinations(points, 2):
        if pr not in owner:
            return Check(False, "pair not covered", list(pr))
    return Check(True)


def verify_cwc(c: ConstantWeightCode) -> Check:
    for x in c.words:
        if x.weight != c.w or x.n != c.n or x.q != c.q:
            return Check(False, f"word not of weight {c.w} over length {c.n}", x.encode())
    for x, y in combinations(c.words, 2):
        if hamming_distance(x, y) < c.d:
            return Check(False, f"distance < {c.d}", [x.encode(), y.encode()])
    return Check(True)


# ---------------------------------------------------------------- generators


def develop(base: Sequence[int], v: int) -> Packing:
    """Translates of a base block mod v, residue r becoming point r+1."""
    blocks = {tuple(sorted((x + i) % v + 1 for x in base)) for i in range(v)}
    return Packing(v, len(base), 2, tuple(blocks))


def planar_difference_set(s: int) -> tuple[tuple[int, ...], Packing]:
    """Lexicographically first (s+1)-subset of Z_{s^2+s+1} with distinct differences.

    Returns the residues and their development, a projective plane of order s.
    """
    if s < 1:
        raise ParameterError(f"order must be positive, got {s}")
    if s > MAX_DIFFERENCE_SET_ORDER:
        raise ResourceError("MAX_DIFFERENCE_SET_ORDER", MAX_DIFFERENCE_SET_ORDER, s)
    v, k = s * s + s + 1, s + 1
    chosen: list[int] = []
    diffs: set[int] = set()

    def extend(start: int) -> bool:
        if len(chosen) == k:
            return True
        for x in range(start, v - (k - len(chosen)) + 1):
            new = set()
            for y in chosen:
                for dd in ((x - y) % v, (y - x) % v):
                    if dd in diffs or dd in new:
                        break
                    new.add(dd)
                else:
                    continue
                break
            else:
                chosen.append(x)
                diffs.update(new)
                if extend(x + 1):
                    return True
                chosen.pop()
                diffs.difference_update(new)
        return False

    if not extend(0):
        raise ExistenceError(f"no planar difference set of order {s} in Z_{v}")
    plane = develop(chosen, v)
    check = verify_packing(plane)
    if not (check and check.steiner):
        raise InternalError(f"development of {chosen} is not a ({v},{k},1)-BIBD: {check}")
    return tuple(chosen), plane


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


def affine_plane(p: int) -> Packing:
    """AG(2, p) for prime p: point (x, y) is labelled x*p + y + 1."""
    if not _is_prime(p):
        raise ParameterError(f"affine_plane needs a prime order, got {p}")
    if p > MAX_AFFINE_ORDER:
        raise ParameterError(f"affine_plane order {p} exceeds {MAX_AFFINE_ORDER}")

    def label(x: int, y: int) -> int:
        return x * p + y + 1

    lines = [tuple(label(x, (a * x + b) % p) for x in range(p)) for a in range(p) for b in range(p)]
    lines += [tuple(label(c, y) for y in range(p)) for c in range(p)]
    plane = Packing(p * p, p, 2, tuple(lines))
    check = verify_packing(plane)
    if not (check and check.steiner):
        raise InternalError(f"AG(2,{p}) failed verification: {check}")
    return plane


def brute_max_packing(n: int, k: int, r: int) -> tuple[int, Packing]:
    """Exact packing number D(n, k, r) with an optimal packing."""
    if not 1 <= r <= k:
        raise ParameterError(f"need 1 <= r <= k; got r={r}, k={k}")
    if k > n:
        return 0, Packing(n, k, r, ())
    size = comb(n, k)
    if size > MAX_PACKING_CANDIDATES:
        raise ResourceError("MAX_PACKING_CANDIDATES", MAX_PACKING_CANDIDATES, size)
    cands = list(combinations(range(1, n + 1), k))
    masks = [sum(1 << x for x in b) for b in cands]
    adj = build_adjacency(len(cands), lambda i, j: (masks[i] & masks[j]).bit_count() < r)
    # all k-sets are equivalent under relabelling, so some optimum contains the first one
    res = max_clique(adj, candidates=adj[0])
    blocks = [cands[0]] + [cands[i] for i in res.clique]
    packing = Packing(n, k, r, tuple(blocks))
    if not verify_packing(packing):
        raise InternalError("brute-force packing failed verification")
    return len(blocks), packing


def weight_words(q: int, n: int, w: int) -> list[QaryCodeword]:
    """All words of length n and weight w over Z_q, in file-encoding order."""
    words = []
    for supp in combinations(range(n), w):
        for vals in product(range(1, q), repeat=w):
            entries = [0] * n
            for i, v in zip(supp, vals):
                entries[i] = v
            words.append(QaryCodeword(tuple(entries), q))
    words.sort(key=QaryCodeword.sort_key)
    return words


def _cwc_bound(q: int, n: int, d: int, w: int, words: list[QaryCodeword]):
    """Admissible bound on how many more candidate words fit, for the clique search.

    Two counting arguments, whichever is smaller:

    * words on one support differ only in their nonzero symbols, so at most
      ``cap`` of them fit, where ``cap`` is the largest length-w code with
      distance d over the q-1 nonzero symbols;
    * two weight-w words that agree on s = w - ceil(d/2) + 1 nonzero
      (position, symbol) pairs are at distance at most d-1, so every such
      pattern lies in at most one codeword and each codeword holds C(w, s).
    """
    vectors = list(product(range(q - 1), repeat=w))
    vadj = build_adjacency(len(vectors), lambda i, j: sum(
        a != b for a, b in zip(vectors[i], vectors[j])) >= d)
    cap = max_clique(vadj).size
    support_ids: dict[frozenset[int], int] = {}
    word_support = [support_ids.setdefault(x.support, len(support_ids)) for x in words]
    supports = [0] * len(support_ids)
    for i, k in enumerate(word_support):
        supports[k] |= 1 << i
    by_pattern: dict[tuple, int] = {}
    s = w - (d + 1) // 2 + 1
    if 1 <= s <= w:
        for i, x in enumerate(words):
            pairs = [(p, v) for p, v in enumerate(x.entries) if v]
            for pat in combinations(pairs, s):
                by_pattern[pat] = by_pattern.get(pat, 0) | (1 << i)
    patterns = list(by_pattern.values())
    per = comb(w, s) if 1 <= s <= w else 1

    def extra(clique: list[int], cand: int) -> Optional[int]:
        used = Counter(word_support[i] for i in clique)
        a = sum(min(cap - used[k], (m & cand).bit_count()) for k, m in enumerate(supports))
        if not patterns:
            return a
        # candidates avoid every pattern of the clique already
        return min(a, sum(1 for m in patterns if m & cand) // per)

    return extra


def _stabilizer_orbits(words: list[QaryCodeword], fixed: int) -> list[int]:
    """Orbits, as bitsets, of the isometries fixing ``words[fixed]`` on the word list.

    The isometry group of weight-w words permutes positions and, per
    coordinate, the nonzero symbols.  The stabilizer of x is generated by
    position swaps inside and outside supp(x), each paired with the symbol
    swap that keeps x fixed, and by symbol swaps that avoid x's own symbol.
    Orbits are listed by least member.
    """
    x = words[fixed].entries
    n, q = len(x), words[fixed].q
    index = {y.entries: i for i, y in enumerate(words)}
    gens: list[tuple[tuple[int, ...], list[dict[int, int]]]] = []
    ident = list(range(n))

    def symbol_swap(a: int, b: int) -> dict[int, int]:
        return {a: b, b: a} if a != b else {}

    for i, j in combinations(range(n), 2):
        if bool(x[i]) == bool(x[j]):
            perm = list(ident)
            perm[i], perm[j] = j, i
            maps = [{} for _ in range(n)]
            if x[i]:
                maps[i] = maps[j] = symbol_swap(x[i], x[j])
            gens.append((tuple(perm), maps))
    for i in range(n):
        for a, b in combinations(range(1, q), 2):
            if x[i] not in (a, b):
                maps = [{} for _ in range(n)]
                maps[i] = symbol_swap(a, b)
                gens.append((tuple(ident), maps))

    parent = list(range(len(words)))

    def find(u: int) -> int:
        while parent[u] != u:
            parent[u] = parent[parent[u]]
            u = parent[u]
        return u

    for k, y in enumerate(words):
        for perm, maps in gens:
            image = [0] * n
            for i, v in enumerate(y.entries):
                image[perm[i]] = maps[i].get(v, v)
            ru, rv = find(k), find(index[tuple(image)])
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
    orbits: dict[int, int] = {}
    for k in range(len(words)):
        orbits[find(k)] = orbits.get(find(k), 0) | (1 << k)
    return [orbits[r] for r in sorted(orbits)]


def brute_max_cwc(q: int, n: int, d: int, w: int) -> tuple[int, ConstantWeightCode]:
    """Exact A_q(n, d, w) with an optimal code, via maximum clique.

    The first word is fixed (the isometry group is transitive on weight-w
    words) and the second is taken from each orbit of its stabilizer in turn,
    with earlier orbits excluded.  The search is seeded with a heuristic code
    and pruned by support and pattern counting on top of greedy colouring.
    More than ``MAX_CWC_NODES`` search nodes raise ``ResourceError``.
    """
    if q < 2 or n < 1 or w < 0 or d < 0:
        raise ParameterError(f"bad CWC parameters q={q}, n={n}, d={d}, w={w}")
    if w > n:
        return 0, ConstantWeightCode(q, n, d, w, ())
    size = (q - 1) ** w * comb(n, w)
    if size > MAX_CWC_CANDIDATES:
        raise ResourceError("MAX_CWC_CANDIDATES", MAX_CWC_CANDIDATES, size)
    words = weight_words(q, n, w)
    adj = build_adjacency(len(words), lambda i, j: hamming_distance(words[i], words[j]) >= d)
    best = [0] + heuristic_clique(adj, adj[0], rounds=2000)
    bound = _cwc_bound(q, n, d, w, words)
    budget = MAX_CWC_NODES
    excluded = 0
    for orbit in _stabilizer_orbits(words, 0):
        if not orbit & adj[0]:
            continue
        r = (orbit & -orbit).bit_length() - 1
        cand = adj[0] & adj[r] & ~excluded
        excluded |= orbit
        try:
            res = max_clique(adj, candidates=cand, lower=len(best) - 2, max_nodes=budget,
                             extra_bound=lambda clique, c, _r=r: bound([0, _r] + clique, c))
        except ResourceError:
            raise ResourceError("MAX_CWC_NODES", MAX_CWC_NODES, MAX_CWC_NODES + 1) from None
        budget -= res.nodes
        if res.size:
            best = [0, r] + res.clique
    chosen = [words[i] for i in sorted(best)]
    code = ConstantWeightCode(q, n, d, w, tuple(chosen))
    if not verify_cwc(code):
        raise InternalError("brute-force CWC failed verification")
    return len(chosen), code


def _exact_cover(n_items: int, options: list[list[int]]) -> Optional[list[int]]:
    """First exact cover found by Algorithm X, or None.

    Branches on the item with fewest remaining options (lowest index on
    ties) and tries options in list order, so the result is deterministic.
    """
    cols: list[set[int]] = [set() for _ in range(n_items)]
    for oi, items in enumerate(options):
        for it in items:
            cols[it].add(oi)
    live = set(range(n_items))
    chosen: list[int] = []

    def select(oi: int) -> list[tuple[int, set[int]]]:
        removed = []
        for it in options[oi]:
            for other in cols[it]:
                for it2 in options[other]:
                    if it2 != it:
                        cols[it2].discard(other)
            live.discard(it)
            removed.append((it, cols[it]))
        return removed

    def deselect(oi: int, removed: list[tuple[int, set[int]]]) -> None:
        for it, col in reversed(removed):
            live.add(it)
            for other in col:
                for it2 in options[other]:
                    if it2 != it:
                        cols[it2].add(other)

    def solve() -> bool:
        if not live:
            return True
        item = min(live, key=lambda it: (len(cols[it]), it))
        for oi in sorted(cols[item]):
            removed = select(oi)
            chosen.append(oi)
            if solve():
                return True
            chosen.pop()
            deselect(oi, removed)
        return False

    return chosen if solve() else None


def search_frame(k: int, g: int, m: int) -> Frame:
    """A k-frame of type g^m found by exact-cover search.

    Groups are ``{1..g}, {g+1..2g}, ...`` and each group is the hole of
    g/(k-1) classes.  The cover items are the cross-group pairs and the
    (class, point) incidences; an option is a block placed in one class.
    The search order is fixed, so the same frame comes back every time.
    """
    if k == 3:
        if not admissible_frame3(g, m):
            raise AdmissibilityError(f"no 3-frame of type {g}^{m}: need m>=4, g even, 3 | g(m-1)")
    elif k == 4:
        adm = admissible_frame4(g, m)
        if adm.status is not Status.EXISTS:
            raise AdmissibilityError(f"4-frame of type {g}^{m}: {adm.status.value} ({adm.reason})")
    else:
        raise ParameterError(f"search_frame supports k in {{3, 4}}, got {k}")
    npts = g * m
    if npts > MAX_FRAME_POINTS:
        raise ResourceError("MAX_FRAME_POINTS", MAX_FRAME_POINTS, npts)

    groups = [tuple(range(i * g + 1, (i + 1) * g + 1)) for i in range(m)]
    group_of = {x: i for i, grp in enumerate(groups) for x in grp}
    holes = [h for h in range(m) for _ in range(g // (k - 1))]

    item: dict[tuple, int] = {}
    for pr in combinations(range(1, npts + 1), 2):
        if group_of[pr[0]] != group_of[pr[1]]:
            item[("pair", *pr)] = len(item)
    for ci, h in enumerate(holes):
        for x in range(1, npts + 1):
            if group_of[x] != h:
                item[("class", ci, x)] = len(item)

    options: list[list[int]] = []
    placed: list[tuple[int, Block]] = []
    for ci, h in enumerate(holes):
        outside = [x for x in range(1, npts + 1) if group_of[x] != h]
        for blk in combinations(outside, k):
            if len({group_of[x] for x in blk}) < k:
                continue
            options.append([item[("pair", *pr)] for pr in combinations(blk, 2)]
                           + [item[("class", ci, x)] for x in blk])
            placed.append((ci, blk))

    found = _exact_cover(len(item), options)
    if found is None:
        raise InternalError(f"no {k}-frame of type {g}^{m} found although one is known to exist")
    classes: list[list[Block]] = [[] for _ in holes]
    for oi in found:
        ci, blk = placed[oi]
        classes[ci].append(blk)
    frame = Frame(k, tuple(groups), tuple((h, tuple(bl)) for h, bl in zip(holes, classes)))
    check = verify_frame(frame)
    if not check:
        raise InternalError(f"search_frame output failed verification: {check}")
    return frame
