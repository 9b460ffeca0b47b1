"""Codewords, codesets and LPECC codes, plus verifiers for their properties.

A code over ``n`` wires is a list of pairwise disjoint codesets.  Every
codeset must contain, for each set ``T`` of ``t`` hot wires, a codeword that
leaves ``T`` idle (property A); every codeword has weight at most ``w``
(exactly ``w`` for constant-power codes, property B); codewords from distinct
codesets are at Hamming distance at least ``2e + 1`` (property C).

Positions are 1-based at every public surface, so a binary codeword is
interchangeable with its support set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Any, Iterable, Iterator, Optional, Sequence

from .errors import DimensionError, ParameterError, ParseError

LPECC = "lpecc"
CPECC = "cpecc"
MODES = (LPECC, CPECC)


@dataclass(frozen=True)
class QaryCodeword:
    """A length-n word over {0, ..., q-1}."""

    entries: tuple[int, ...]
    q: int = 2
    mask: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        entries = tuple(int(v) for v in self.entries)
        object.__setattr__(self, "entries", entries)
        if self.q < 2:
            raise ParameterError(f"alphabet size q={self.q} must be at least 2")
        if not entries:
            raise ParameterError("codeword length must be positive")
        mask = 0
        for i, v in enumerate(entries):
            if not 0 <= v < self.q:
                raise ParameterError(f"symbol {v} at position {i + 1} outside [0, {self.q - 1}]")
            if v:
                mask |= 1 << i
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_support(cls, n: int, positions: Iterable[int], q: int = 2) -> QaryCodeword:
        """Binary-style constructor: value 1 on each listed 1-based position."""
        entries = [0] * n
        for p in positions:
            if not 1 <= p <= n:
                raise ParameterError(f"position {p} outside [1, {n}]")
            entries[p - 1] = 1
        return cls(tuple(entries), q)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Sequence[int]], q: int) -> QaryCodeword:
        entries = [0] * n
        for p, v in pairs:
            if not 1 <= p <= n:
                raise ParameterError(f"position {p} outside [1, {n}]")
            entries[p - 1] = v
        return cls(tuple(entries), q)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i, v in enumerate(self.entries) if v)

    @property
    def weight(self) -> int:
        return self.mask.bit_count()

    def restrict(self, positions: Iterable[int]) -> QaryCodeword:
        """Keep the symbols on ``positions`` (1-based) and zero the rest."""
        keep = set(positions)
        return QaryCodeword(
            tuple(v if i + 1 in keep else 0 for i, v in enumerate(self.entries)), self.q
        )

    def encode(self) -> list:
        """File encoding: a support list for q=2, [position, value] pairs otherwise."""
        if self.q == 2:
            return [i + 1 for i, v in enumerate(self.entries) if v]
        return [[i + 1, v] for i, v in enumerate(self.entries) if v]

    def sort_key(self) -> list:
        return self.encode()

    def __str__(self) -> str:
        if self.q == 2:
            return "{" + ",".join(map(str, self.encode())) + "}"
        return "".join(map(str, self.entries))


def hamming_distance(x: QaryCodeword, y: QaryCodeword) -> int:
    if x.n != y.n or x.q != y.q:
        raise DimensionError(f"cannot compare (n={x.n}, q={x.q}) with (n={y.n}, q={y.q})")
    if x.q == 2:
        return (x.mask ^ y.mask).bit_count()
    return sum(a != b for a, b in zip(x.entries, y.entries))


@dataclass(frozen=True)
class Codeset:
    """The alternative codewords that all encode one message."""

    words: tuple[QaryCodeword, ...]

    def __post_init__(self) -> None:
        words = tuple(sorted(self.words, key=QaryCodeword.sort_key))
        if not words:
            raise ParameterError("a codeset must contain at least one codeword")
        n, q = words[0].n, words[0].q
        for x in words:
            if x.n != n or x.q != q:
                raise DimensionError("all codewords in a codeset must share n and q")
        for a, b in zip(words, words[1:]):
            if a == b:
                raise ParameterError(f"duplicate codeword {a} in codeset")
        object.__setattr__(self, "words", words)

    @classmethod
    def from_supports(cls, n: int, supports: Iterable[Iterable[int]]) -> Codeset:
        return cls(tuple(QaryCodeword.from_support(n, s) for s in supports))

    def __iter__(self) -> Iterator[QaryCodeword]:
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, x: object) -> bool:
        return x in self.words

    @property
    def supports(self) -> list[frozenset[int]]:
        return [x.support for x in self.words]

    def union(self) -> frozenset[int]:
        """Positions used by some codeword of the codeset."""
        mask = 0
        for x in self.words:
            mask |= x.mask
        return _mask_to_set(mask)

    def encode(self) -> list:
        return [x.encode() for x in self.words]


@dataclass(frozen=True)
class LpeccParams:
    q: int
    n: int
    t: int
    w: int
    e: int
    mode: str = LPECC

    def __post_init__(self) -> None:
        if self.q < 2 or self.n < 1 or self.t < 1 or self.w < 1 or self.e < 0:
            raise ParameterError(
                f"need q>=2, n>=1, t>=1, w>=1, e>=0; got {self.as_tuple()}"
            )
        if self.t > self.n or self.w > self.n:
            raise ParameterError(f"need t <= n and w <= n; got {self.as_tuple()}")
        if self.mode not in MODES:
            raise ParameterError(f"mode must be one of {MODES}, got {self.mode!r}")

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.q, self.n, self.t, self.w, self.e)

    @property
    def min_distance(self) -> int:
        return 2 * self.e + 1


@dataclass(frozen=True)
class LpeccCode:
    """Parameters plus an ordered list of codesets.

    ``provenance`` is free-form metadata written by constructions; it does
    not take part in equality.
    """

    params: LpeccParams
    codesets: tuple[Codeset, ...] = ()
    provenance: Optional[dict[str, Any]] = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        codesets = tuple(self.codesets)
        object.__setattr__(self, "codesets", codesets)
        for cs in codesets:
            x = cs.words[0]
            if x.n != self.params.n or x.q != self.params.q:
                raise DimensionError(
                    f"codeword {x} has (n={x.n}, q={x.q}) but code has "
                    f"(n={self.params.n}, q={self.params.q})"
                )

    @property
    def b(self) -> int:
        return len(self.codesets)

    def __len__(self) -> int:
        return len(self.codesets)

    def canonical(self) -> LpeccCode:
        """Same code with codesets sorted by their encoding."""
        return LpeccCode(self.params, tuple(sorted(self.codesets, key=Codeset.encode)))

    def without_codeset(self, index: int) -> LpeccCode:
        return LpeccCode(self.params, self.codesets[:index] + self.codesets[index + 1:])

    def with_mode(self, mode: str) -> LpeccCode:
        p = self.params
        return LpeccCode(LpeccParams(p.q, p.n, p.t, p.w, p.e, mode), self.codesets, self.provenance)

    def to_dict(self) -> dict[str, Any]:
        p = self.params
        doc: dict[str, Any] = {
            "q": p.q, "n": p.n, "t": p.t, "w": p.w, "e": p.e, "mode": p.mode,
            "codesets": [cs.encode() for cs in self.codesets],
        }
        if self.provenance is not None:
            doc["provenance"] = self.provenance
        return doc

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> LpeccCode:
        try:
            params = LpeccParams(
                int(doc["q"]), int(doc["n"]), int(doc["t"]), int(doc["w"]), int(doc["e"]),
                doc.get("mode", LPECC),
            )
            codesets = []
            for raw in doc["codesets"]:
                if params.q == 2:
                    words = [QaryCodeword.from_support(params.n, s) for s in raw]
                else:
                    words = [QaryCodeword.from_pairs(params.n, s, params.q) for s in raw]
                codesets.append(Codeset(tuple(words)))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, ParameterError):
                raise ParseError(str(exc)) from exc
            raise ParseError(f"malformed code document: {exc!r}") from exc
        return cls(params, tuple(codesets), doc.get("provenance"))


def dumps_canonical(doc: dict[str, Any]) -> str:
    """Serialize a document with one list item per line; stable across runs."""
    lines = []
    for key, value in doc.items():
        if isinstance(value, list) and value:
            items = ",\n    ".join(json.dumps(v, separators=(",", ":")) for v in value)
            lines.append(f"  {json.dumps(key)}: [\n    {items}\n  ]")
        else:
            lines.append(f"  {json.dumps(key)}: {json.dumps(value, separators=(',', ':'))}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def loads_document(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    return doc


def load_code(path: str) -> LpeccCode:
    with open(path) as fh:
        return LpeccCode.from_dict(loads_document(fh.read()))


def save_code(code: LpeccCode, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_canonical(code.to_dict()))


# ---------------------------------------------------------------- verification


@dataclass(frozen=True)
class Violation:
    prop: str
    clause: str
    codesets: tuple[int, ...]
    witness: Any

    def to_dict(self) -> dict[str, Any]:
        return {
            "property": self.prop,
            "clause": self.clause,
            "codesets": list(self.codesets),
            "witness": self.witness,
        }


@dataclass(frozen=True)
class VerificationReport:
    """Pass flags per checked property and the witnesses of every failure.

    Codeset indices are 0-based positions in ``code.codesets``; wire
    positions inside witnesses are 1-based.
    """

    passed: dict[str, bool]
    violations: tuple[Violation, ...] = ()
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def __bool__(self) -> bool:
        return self.ok

    def violations_of(self, prop: str) -> list[Violation]:
        return [v for v in self.violations if v.prop == prop]

    def merged(self, *others: VerificationReport) -> VerificationReport:
        passed = dict(self.passed)
        violations = list(self.violations)
        stats = dict(self.stats)
        for r in others:
            passed.update(r.passed)
            violations.extend(r.violations)
            stats.update(r.stats)
        return VerificationReport(passed, tuple(violations), stats)

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "passed": dict(self.passed),
            "violations": [v.to_dict() for v in self.violations],
            "stats": dict(self.stats),
        }


def _fragment(prop: str, violations: list[Violation], **stats: Any) -> VerificationReport:
    return VerificationReport({prop: not violations}, tuple(violations), stats)


def _mask_to_set(mask: int) -> frozenset[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def _set_to_mask(positions: Iterable[int]) -> int:
    m = 0
    for p in positions:
        m |= 1 << (p - 1)
    return m


def verify_property_A(code: LpeccCode) -> VerificationReport:
    """Every codeset has, for each t-set of wires, a codeword avoiding it.

    Enumerates all C(n, t) wire sets, so the cost is exponential in t.
    """
    n, t = code.params.n, code.params.t
    violations = []
    for i, cs in enumerate(code.codesets):
        masks = [x.mask for x in cs]
        if 0 in masks:
            continue
        for T in combinations(range(1, n + 1), t):
            tm = _set_to_mask(T)
            if all(m & tm for m in masks):
                violations.append(Violation("A", "A(t)", (i,), list(T)))
                break
    return _fragment("A", violations)


def verify_property_B(code: LpeccCode) -> VerificationReport:
    w, mode = code.params.w, code.params.mode
    violations = []
    for i, cs in enumerate(code.codesets):
        for x in cs:
            bad = x.weight != w if mode == CPECC else x.weight > w
            if bad:
                clause = "B'(w): weight == w" if mode == CPECC else "B(w): weight <= w"
                violations.append(Violation("B", clause, (i,), x.encode()))
    return _fragment("B", violations)


def verify_property_C(code: LpeccCode) -> VerificationReport:
    """Cross-codeset distances are at least 2e+1; one witness per codeset pair."""
    d = code.params.min_distance
    violations = []
    sets = code.codesets
    for i, j in combinations(range(len(sets)), 2):
        for x in sets[i]:
            hit = next((y for y in sets[j] if hamming_distance(x, y) < d), None)
            if hit is not None:
                violations.append(
                    Violation(
                        "C", f"C(e): distance >= {d}", (i, j),
                        {"x": x.encode(), "y": hit.encode(), "distance": hamming_distance(x, hit)},
                    )
                )
                break
    return _fragment("C", violations)


def verify_disjoint(code: LpeccCode) -> VerificationReport:
    seen: dict[QaryCodeword, int] = {}
    violations = []
    for i, cs in enumerate(code.codesets):
        for x in cs:
            if x in seen:
                violations.append(Violation("disjoint", "partition", (seen[x], i), x.encode()))
            else:
                seen[x] = i
    return _fragment("disjoint", violations)


def verify_code(code: LpeccCode, characterization: bool = False) -> VerificationReport:
    report = verify_property_A(code).merged(
        verify_property_B(code), verify_property_C(code), verify_disjoint(code)
    )
    if characterization:
        report = report.merged(check_w_minus_2_structure(code))
    return report


def tau(codeset: Codeset | Iterable[QaryCodeword], r: int) -> int:
    """Number of r-subsets of positions lying inside some codeword's support."""
    covered: set[tuple[int, ...]] = set()
    for x in codeset:
        covered.update(combinations(sorted(x.support), r))
    return len(covered)


def check_w_minus_2_structure(code: LpeccCode) -> VerificationReport:
    """Structural consequences of properties B and C for binary codes with e = w-2.

    Checks block sizes in [w-3, w], the pair-ownership and disjointness
    conditions, and the pair-counting inequality sum(tau) <= C(n, 2).
    """
    p = code.params
    if p.q != 2 or p.e != p.w - 2 or code.b < 2:
        raise ParameterError(
            f"structure check needs q=2, e=w-2 and b>=2; got q={p.q}, w={p.w}, e={p.e}, b={code.b}"
        )
    n, w = p.n, p.w
    violations: list[Violation] = []
    passed: dict[str, bool] = {}

    sizes_bad = [
        Violation("2''", "w-3 <= |B| <= w", (i,), x.encode())
        for i, cs in enumerate(code.codesets) for x in cs
        if not w - 3 <= x.weight <= w
    ]
    passed["2''"] = not sizes_bad
    violations.extend(sizes_bad[:1])

    owner: dict[tuple[int, int], int] = {}
    pair_bad: list[Violation] = []
    taus = []
    for i, cs in enumerate(code.codesets):
        pairs = {pr for x in cs for pr in combinations(sorted(x.support), 2)}
        taus.append(len(pairs))
        for pr in sorted(pairs):
            j = owner.setdefault(pr, i)
            if j != i:
                pair_bad.append(Violation("3''-i", "pair covered by one codeset", (j, i), list(pr)))
    pair_bad.sort(key=lambda v: (v.witness, v.codesets))
    passed["3''-i"] = not pair_bad
    violations.extend(pair_bad[:1])

    small = [i for i, cs in enumerate(code.codesets) if any(x.weight <= w - 2 for x in cs)]
    small_bad: list[Violation] = []
    if len(small) > 1:
        small_bad.append(
            Violation("3''-ii", "at most one codeset has blocks of size <= w-2", tuple(small[:2]), None)
        )
    for i in small:
        for x in code.codesets[i]:
            if x.weight > w - 2:
                continue
            for j, other in enumerate(code.codesets):
                if j == i:
                    continue
                y = next((y for y in other if x.mask & y.mask), None)
                if y is not None:
                    small_bad.append(
                        Violation("3''-ii", "small block disjoint from other codesets", (i, j),
                                  {"x": x.encode(), "y": y.encode()})
                    )
    passed["3''-ii"] = not small_bad
    violations.extend(small_bad[:1])

    mid: list[tuple[int, QaryCodeword]] = [
        (i, x) for i, cs in enumerate(code.codesets) for x in cs if x.weight == w - 1
    ]
    mid_bad = []
    for (i, x), (j, y) in combinations(mid, 2):
        if i != j and x.mask & y.mask:
            mid_bad.append(
                Violation("3''-iii", "(w-1)-blocks of distinct codesets are disjoint", (i, j),
                          {"x": x.encode(), "y": y.encode()})
            )
            break
    passed["3''-iii"] = not mid_bad
    violations.extend(mid_bad)

    tau_sum = sum(taus)
    passed["tau-count"] = tau_sum <= comb(n, 2)
    if not passed["tau-count"]:
        violations.append(Violation("tau-count", "sum tau(P_i) <= C(n,2)", (), tau_sum))
    return VerificationReport(passed, tuple(violations), {"tau_sum": tau_sum, "pair_count": comb(n, 2)})
