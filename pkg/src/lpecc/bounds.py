"""Closed-form bounds on C(n,t,w,e), design admissibility tests and graph lemmas.

Every value is an exact ``Fraction``; floors are taken only when reported.
Binomials with a negative or undersized top are zero throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import comb, floor
from typing import Any, Iterable, Optional

from .core import CPECC, LPECC, LpeccParams
from .errors import ParameterError


def binom(a: int, b: int) -> int:
    if b < 0 or a < 0 or a < b:
        return 0
    return comb(a, b)


@dataclass(frozen=True)
class BoundEntry:
    name: str
    kind: str  # "upper", "lower" or "exact"
    value: Optional[Fraction]
    applicable: bool
    clause: str

    @property
    def floor_value(self) -> Optional[int]:
        return None if self.value is None else floor(self.value)

    def to_dict(self) -> dict[str, Any]:
        v = self.value
        return {
            "name": self.name,
            "kind": self.kind,
            "value": None if v is None else f"{v.numerator}/{v.denominator}",
            "floor": self.floor_value,
            "applicable": self.applicable,
            "clause": self.clause,
        }


@dataclass(frozen=True)
class BoundReport:
    entries: tuple[BoundEntry, ...]

    def __getitem__(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def applicable(self, kind: str | None = None) -> list[BoundEntry]:
        return [e for e in self.entries if e.applicable and (kind is None or e.kind == kind)]

    def best_upper(self) -> Optional[int]:
        vals = [e.floor_value for e in self.applicable() if e.kind in ("upper", "exact")]
        return min(vals) if vals else None

    def best_lower(self) -> Optional[int]:
        vals = [e.floor_value for e in self.applicable() if e.kind in ("lower", "exact")]
        return max(vals) if vals else None

    def to_dict(self) -> dict[str, Any]:
        return {"entries": [e.to_dict() for e in self.entries]}


class Status(str, Enum):
    EXISTS = "Exists"
    POSSIBLE_EXCEPTION = "PossibleException"
    NOT_ADMISSIBLE = "NotAdmissible"


@dataclass(frozen=True)
class Admissibility:
    status: Status
    reason: str

    def __bool__(self) -> bool:
        return self.status is Status.EXISTS


# ------------------------------------------------------------------ LPECC bounds


def exact_e_eq_w_minus_1(n: int, t: int, w: int) -> int:
    """C(n, t, w, w-1) = floor((n+1)/(w+t))."""
    if not (1 <= t <= n and 1 <= w <= n):
        raise ParameterError(f"need 1 <= t, w <= n; got n={n}, t={t}, w={w}")
    return (n + 1) // (w + t)


def ub_large_w(n: int, t: int, w: int) -> BoundEntry:
    value = Fraction(binom(n + 1, 2), binom(w + t, 2))
    threshold = t * t + 2 * t + 2
    if w < threshold:
        return BoundEntry("ub_large_w", "upper", value, False,
                          f"requires w >= t^2+2t+2 = {threshold} (w={w})")
    if n < w + t - 1:
        return BoundEntry("ub_large_w", "upper", value, False,
                          f"requires n >= w+t-1 = {w + t - 1} (n={n})")
    return BoundEntry("ub_large_w", "upper", value, True,
                      "C(n,t,w,w-2) <= C(n+1,2)/C(w+t,2) for w >= t^2+2t+2 >= 5, n >= w+t-1")


def ub_w3_e1(n: int, t: int) -> BoundEntry:
    value = Fraction(n * (n + 1), 6 * (t + 1))
    if n < 3 * (t + 1):
        return BoundEntry("ub_w3_e1", "upper", value, False, f"requires n >= 3(t+1) = {3 * (t + 1)}")
    return BoundEntry("ub_w3_e1", "upper", value, True,
                      "C(n,t,3,1) <= n(n+1)/(6(t+1)) for n >= 3(t+1)")


def lb_frame3(n: int, t: int) -> BoundEntry:
    if n % 6 != 2:
        return BoundEntry("lb_frame3", "lower", None, False, "requires n = 2 (mod 6)")
    value = Fraction((n - 2) // (3 * (t + 1)) * (n // 2) + n // (2 * (t + 1)))
    return BoundEntry("lb_frame3", "lower", value, True,
                      "3-frame of type 2^(n/2): C(n,t,3,1) >= floor((n-2)/(3(t+1)))*n/2 + floor(n/(2(t+1)))")


def lb_frame4(n: int, t: int) -> BoundEntry:
    if n % 12 != 3:
        return BoundEntry("lb_frame4", "lower", None, False, "requires n = 3 (mod 12)")
    value = Fraction((n - 3) // (4 * (t + 1)) * (n // 3) + n // (3 * (t + 1)))
    return BoundEntry("lb_frame4", "lower", value, True,
                      "4-frame of type 3^(n/3): C(n,t,4,2) >= floor((n-3)/(4(t+1)))*n/3 + floor(n/(3(t+1)))")


def johnson_ub(q: int, n: int, e: int, w: int) -> Fraction:
    """Johnson-type bound A_q(n, 2e+1, w) <= (q-1)^(w-e) C(n, w-e) / C(w, w-e)."""
    if q < 2 or not 0 <= e <= w <= n:
        raise ParameterError(f"need q >= 2 and 0 <= e <= w <= n; got q={q}, n={n}, e={e}, w={w}")
    return Fraction((q - 1) ** (w - e) * binom(n, w - e), binom(w, w - e))


def weight_condition(t: int, w: int, e: int) -> bool:
    """2 C(w, w-e) >= C(w-t-1, w-e) + C(w+t, w-e)."""
    if e > w - 1:
        raise ParameterError(f"weight condition needs e <= w-1; got w={w}, e={e}")
    d = w - e
    return 2 * binom(w, d) >= binom(w - t - 1, d) + binom(w + t, d)


def _leading_term(q: int, n: int, t: int, w: int, e: int) -> Fraction:
    d = w - e
    return Fraction((q - 1) ** d * binom(n, d), binom(w + t, d))


def qary_ub(q: int, n: int, t: int, w: int, e: int) -> BoundEntry:
    if e > w - 1:
        return BoundEntry("qary_ub", "upper", None, False, "requires e <= w-1")
    d = w - e
    value = _leading_term(q, n, t, w, e) + sum(
        (Fraction((q - 1) ** k * binom(n, k), binom(k + e, k)) for k in range(d)), Fraction(0)
    )
    if not weight_condition(t, w, e):
        return BoundEntry("qary_ub", "upper", value, False,
                          "requires 2C(w,w-e) >= C(w-t-1,w-e) + C(w+t,w-e)")
    return BoundEntry("qary_ub", "upper", value, True,
                      "C_q(n,t,w,e) <= (q-1)^(w-e)C(n,w-e)/C(w+t,w-e) + sum_k (q-1)^k C(n,k)/C(k+e,k)")


def cpecc_ub(q: int, n: int, t: int, w: int, e: int) -> BoundEntry:
    if e > w - 1:
        return BoundEntry("cpecc_ub", "upper", None, False, "requires e <= w-1")
    value = _leading_term(q, n, t, w, e)
    if not weight_condition(t, w, e):
        return BoundEntry("cpecc_ub", "upper", value, False,
                          "requires 2C(w,w-e) >= C(w-t-1,w-e) + C(w+t,w-e)")
    return BoundEntry("cpecc_ub", "upper", value, True,
                      "C'_q(n,t,w,e) <= (q-1)^(w-e)C(n,w-e)/C(w+t,w-e)")


# ------------------------------------------------------------------ graph lemmas


def turan_edges(v: int, r: int) -> int:
    """Edges of the balanced complete r-partite graph on v vertices."""
    if r < 1 or v < 0:
        raise ParameterError(f"need r >= 1, v >= 0; got v={v}, r={r}")
    small, extra = divmod(v, r)
    sizes = [small + 1] * extra + [small] * (r - extra)
    return (v * v - sum(s * s for s in sizes)) // 2


def estimate_xi(v: int, m: int) -> int:
    """v plus the edge count of the complement of the Turan graph T(v, v-m)."""
    if not v > m >= 1:
        raise ParameterError(f"need v > m >= 1; got v={v}, m={m}")
    parts = v - m
    lam = v % parts
    return v + lam * binom(-(-v // parts), 2) + (parts - lam) * binom(v // parts, 2)


def triangle_transversal_check(edges: Iterable[tuple[int, int]], v: int, t: int) -> bool:
    """True iff deleting any t of the vertices 1..v leaves a triangle.

    Exhaustive over all t-sets of vertices.
    """
    if not 0 <= t < v:
        raise ParameterError(f"need 0 <= t < v; got v={v}, t={t}")
    adj = [0] * (v + 1)
    for a, b in edges:
        if a == b:
            continue
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    triangles = []
    for a in range(1, v + 1):
        for b in range(a + 1, v + 1):
            if not adj[a] >> b & 1:
                continue
            common = adj[a] & adj[b] & ~((1 << (b + 1)) - 1)
            c = b + 1
            common >>= c
            while common:
                if common & 1:
                    triangles.append((1 << a) | (1 << b) | (1 << c))
                common >>= 1
                c += 1
    if not triangles:
        return False
    for removed in combinations(range(1, v + 1), t):
        rm = 0
        for x in removed:
            rm |= 1 << x
        if all(tri & rm for tri in triangles):
            return False
    return True


# ------------------------------------------------------------------ admissibility


def admissible_bibd(v: int, k: int) -> bool:
    if not 2 <= k <= v:
        raise ParameterError(f"need 2 <= k <= v; got v={v}, k={k}")
    return (v - 1) % (k - 1) == 0 and (v * (v - 1)) % (k * (k - 1)) == 0


def admissible_frame3(g: int, m: int) -> bool:
    """3-frame of type g^m exists iff m >= 4, g even and 3 | g(m-1)."""
    if g < 1 or m < 1:
        raise ParameterError(f"need g, m >= 1; got g={g}, m={m}")
    return m >= 4 and g % 2 == 0 and (g * (m - 1)) % 3 == 0


def _frame4_exception(g: int, m: int) -> Optional[str]:
    if g == 36 and m == 12:
        return "g=36 and m=12"
    if g % 12 != 6:
        return None
    if g == 6 and m in (7, 23, 27, 35, 39, 47):
        return "(a) g=6, m in {7,23,27,35,39,47}"
    if (g == 30 or 66 <= g <= 2190) and m in (7, 23, 27, 39, 47):
        return "(b) g=30 or g in [66,2190], m in {7,23,27,39,47}"
    if (g in (42, 54) or 2202 <= g <= 11238) and m in (23, 27):
        return "(c) g in {42,54} or [2202,11238], m in {23,27}"
    if g == 18 and m in (15, 23, 27):
        return "(d) g=18, m in {15,23,27}"
    return None


def admissible_frame4(g: int, m: int) -> Admissibility:
    if g < 1 or m < 1:
        raise ParameterError(f"need g, m >= 1; got g={g}, m={m}")
    if m < 5:
        return Admissibility(Status.NOT_ADMISSIBLE, f"need m >= 5 groups (m={m})")
    if g % 3:
        return Admissibility(Status.NOT_ADMISSIBLE, f"need g = 0 (mod 3) (g={g})")
    if (g * (m - 1)) % 4:
        return Admissibility(Status.NOT_ADMISSIBLE, f"need 4 | g(m-1) (g(m-1)={g * (m - 1)})")
    exc = _frame4_exception(g, m)
    if exc:
        return Admissibility(Status.POSSIBLE_EXCEPTION, f"listed possible exception {exc}")
    return Admissibility(Status.EXISTS, "divisibility holds and not a listed exception")


# ------------------------------------------------------------------ summary

# (q, t, w, e) -> list of (predicate on n, value function, citation)
_KNOWN_EXACT = {
    (2, 1, 3, 1): [
        (lambda n: n == 6, lambda n: 2, "C(6,1,3,1) = 2"),
        (lambda n: n != 6, lambda n: n * (n + 1) // 12, "C(n,1,3,1) = floor(n(n+1)/12), n != 6"),
    ],
    (2, 2, 3, 1): [
        (lambda n: n == 6, lambda n: 1, "C(6,2,3,1) = 1"),
        (lambda n: n >= 4 and n % 2 == 0 and n != 6, lambda n: n * (n + 1) // 18,
         "C(n,2,3,1) = floor(n(n+1)/18), n even >= 4, n != 6"),
    ],
    (2, 1, 4, 2): [
        (lambda n: n % 20 in (0, 4) and n > 0, lambda n: n * (n + 1) // 20,
         "C(n,1,4,2) = n(n+1)/20, n = 0,4 (mod 20)"),
    ],
}


def known_exact(q: int, n: int, t: int, w: int, e: int) -> Optional[BoundEntry]:
    """Exact values quoted from earlier literature, when the parameters match."""
    for pred, value, cite in _KNOWN_EXACT.get((q, t, w, e), []):
        if pred(n):
            return BoundEntry("known_exact", "exact", Fraction(value(n)), True, cite)
    if q == 2 and e == w - 1 and 2 <= w and w + t - 1 <= n:
        return BoundEntry("known_exact", "exact", Fraction(exact_e_eq_w_minus_1(n, t, w)), True,
                          "C(n,t,w,w-1) = floor((n+1)/(w+t))")
    return None


def _family(entry: BoundEntry, ok: bool, need: str) -> BoundEntry:
    if ok:
        return entry
    return BoundEntry(entry.name, entry.kind, entry.value, False, f"parameter family: {need}")


def bounds_summary(q: int, n: int, t: int, w: int, e: int, mode: str = LPECC) -> BoundReport:
    """Every bound of this module evaluated at (q, n, t, w, e), with applicability."""
    LpeccParams(q, n, t, w, e, mode)  # same parameter domain as a code
    binary = q == 2
    entries = [
        _family(ub_large_w(n, t, w), binary and e == w - 2, "q=2, e=w-2"),
        _family(ub_w3_e1(n, t), binary and (w, e) == (3, 1), "q=2, w=3, e=1"),
        _family(lb_frame3(n, t), binary and (w, e) == (3, 1), "q=2, w=3, e=1"),
        _family(lb_frame4(n, t), binary and (w, e) == (4, 2), "q=2, w=4, e=2"),
        qary_ub(q, n, t, w, e),
        _family(cpecc_ub(q, n, t, w, e), mode == CPECC, "CPECC mode"),
    ]
    known = known_exact(q, n, t, w, e)
    if known is not None and mode == LPECC:
        entries.append(known)
    return BoundReport(tuple(entries))
