"""Newton polygons: construction, evaluation, the slope partial order, and
exhaustive enumeration.

A polygon is stored as a sorted multiset of coprime pairs ``(m, n)`` with
multiplicities.  The pair ``(m, n)`` contributes ``m + n`` slopes equal to
``n / (m + n)``; the polygon itself is the lower-convex graph of the slope
sequence sorted non-decreasingly, running from ``(0, 0)`` to ``(h, c)`` where
``h`` is the total height and ``c = h - d`` the codimension.

All arithmetic is exact: slopes and ordinates are ``fractions.Fraction``.

The partial order ``precedes(gamma, beta)`` holds when both polygons share
``(d, c)`` and ``gamma`` lies on or above ``beta`` everywhere.  Under this
orientation the all-slopes-``1/2`` polygon is the minimum among symmetric
polygons of its dimension and the ordinary polygon (slopes 0 and 1 only) is
the maximum.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from .errors import (
    AbscissaOutOfRange,
    BoundExceeded,
    DuplicateInput,
    EmptyInput,
    NonCoprimePair,
    NonIntegralBreakpoints,
    ParseError,
    SlopeOutOfRange,
    ZeroPair,
)

DEFAULT_HEIGHT_BOUND = 16

_TERM_RE = re.compile(r"^\((\d+),(\d+)\)(?:\^(\d+))?$")


@dataclass(frozen=True, order=True)
class SlopePair:
    """A coprime pair ``(m, n)``, the invariant of one isoclinic summand.

    ``m`` is the dimension and ``n`` the codimension of the summand; its
    ``m + n`` slopes all equal ``n / (m + n)``.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 0 or self.n < 0:
            raise ZeroPair(f"negative entries in pair ({self.m},{self.n})")
        if self.m == 0 and self.n == 0:
            raise ZeroPair("the pair (0,0) is not allowed")
        if gcd(self.m, self.n) != 1:
            raise NonCoprimePair(f"({self.m},{self.n}) is not coprime")

    @property
    def height(self) -> int:
        return self.m + self.n

    @property
    def slope(self) -> Fraction:
        return Fraction(self.n, self.m + self.n)

    def dual(self) -> "SlopePair":
        return SlopePair(self.n, self.m)


@dataclass(frozen=True)
class NewtonPolygon:
    """Canonical multiset of slope pairs; use :func:`from_pairs` to build."""

    parts: tuple[tuple[SlopePair, int], ...]

    # -- basic invariants -------------------------------------------------

    @property
    def height(self) -> int:
        return sum(p.height * r for p, r in self.parts)

    @property
    def dim(self) -> int:
        return sum(p.m * r for p, r in self.parts)

    @property
    def codim(self) -> int:
        return sum(p.n * r for p, r in self.parts)

    def slopes(self) -> tuple[Fraction, ...]:
        """The slope multiset, sorted non-decreasingly (length ``height``)."""
        out: list[Fraction] = []
        for p, r in self.parts:
            out.extend([p.slope] * (p.height * r))
        return tuple(out)

    @lru_cache(maxsize=None)
    def _ordinates(self) -> tuple[Fraction, ...]:
        acc = [Fraction(0)]
        for s in self.slopes():
            acc.append(acc[-1] + s)
        return tuple(acc)

    def evaluate(self, x: int) -> Fraction:
        """Exact ordinate of the lower-convex polygon at integer abscissa."""
        if not isinstance(x, int) or x < 0 or x > self.height:
            raise AbscissaOutOfRange(f"abscissa {x} outside [0, {self.height}]")
        return self._ordinates()[x]

    def dual_upper(self, x: int) -> Fraction:
        """Ordinate at ``x`` of the upper polygon (same slopes, reversed)."""
        if not isinstance(x, int) or x < 0 or x > self.height:
            raise AbscissaOutOfRange(f"abscissa {x} outside [0, {self.height}]")
        ords = self._ordinates()
        # reversed slope order: value = c - (polygon evaluated from the right)
        return ords[-1] - ords[self.height - x]

    def is_symmetric(self) -> bool:
        """True when slope ``s`` and ``1 - s`` have equal multiplicities."""
        mult: dict[Fraction, int] = {}
        for p, r in self.parts:
            mult[p.slope] = mult.get(p.slope, 0) + p.height * r
        return all(mult.get(1 - s, 0) == k for s, k in mult.items())

    def is_isoclinic(self) -> bool:
        return len(self.parts) == 1

    def p_rank(self) -> int:
        """Multiplicity of slope zero."""
        for p, r in self.parts:
            if p.n == 0:
                return p.height * r
        return 0

    def sort_key(self) -> tuple[Fraction, ...]:
        return self.slopes()

    # -- serialization -----------------------------------------------------

    def text(self) -> str:
        """Canonical text form, ``(m,n)^r`` terms joined by `` + ``."""
        terms = []
        for p, r in self.parts:
            terms.append(f"({p.m},{p.n})" + (f"^{r}" if r > 1 else ""))
        return " + ".join(terms)

    def condensed(self) -> str:
        """Compact form with multiplicities folded in: ``(r*m,r*n)`` terms."""
        return "+".join(f"({p.m * r},{p.n * r})" for p, r in self.parts)

    def to_json(self) -> dict:
        return {"parts": [[p.m, p.n, r] for p, r in self.parts]}

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.text()


def from_pairs(pairs: Iterable[tuple[int, int, int]]) -> NewtonPolygon:
    """Build the canonical polygon from ``(m, n, multiplicity)`` triples.

    Pairs must be coprime and not ``(0, 0)``; multiplicities must be >= 1.
    Repeated pairs are merged and the result is sorted by slope.
    """
    acc: dict[SlopePair, int] = {}
    count = 0
    for m, n, r in pairs:
        count += 1
        if r < 1:
            raise EmptyInput(f"multiplicity {r} < 1 for pair ({m},{n})")
        sp = SlopePair(m, n)
        acc[sp] = acc.get(sp, 0) + r
    if count == 0:
        raise EmptyInput("a Newton polygon needs at least one slope pair")
    parts = tuple(sorted(acc.items(), key=lambda it: it[0].slope))
    return NewtonPolygon(parts)


def from_slopes(slopes: Iterable[Fraction | int]) -> NewtonPolygon:
    """Build a polygon from its slope multiset.

    Each distinct slope ``a/b`` in lowest terms must occur with multiplicity
    divisible by ``b`` so that breakpoints stay integral.
    """
    mult: dict[Fraction, int] = {}
    count = 0
    for s in slopes:
        count += 1
        f = Fraction(s)
        if f < 0 or f > 1:
            raise SlopeOutOfRange(f"slope {f} outside [0, 1]")
        mult[f] = mult.get(f, 0) + 1
    if count == 0:
        raise EmptyInput("empty slope multiset")
    triples = []
    for f in sorted(mult):
        k = mult[f]
        b = f.denominator
        if k % b != 0:
            raise NonIntegralBreakpoints(
                f"slope {f} has multiplicity {k}, not divisible by {b}"
            )
        triples.append((b - f.numerator, f.numerator, k // b))
    return from_pairs(triples)


def ordinary(d: int, c: int | None = None) -> NewtonPolygon:
    """The ordinary polygon with ``d`` slopes 0 and ``c`` slopes 1."""
    if c is None:
        c = d
    triples = []
    if d > 0:
        triples.append((1, 0, d))
    if c > 0:
        triples.append((0, 1, c))
    return from_pairs(triples)


def supersingular(g: int) -> NewtonPolygon:
    """All ``2g`` slopes equal to ``1/2``."""
    return from_pairs([(1, 1, g)])


def parse_polygon(text: str, *, strict: bool = False) -> NewtonPolygon:
    """Parse ``(m,n)`` terms joined by ``+``, each with optional ``^r``.

    Whitespace-insensitive.  Unless ``strict``, a non-coprime term ``(a,b)``
    is folded into ``gcd(a,b)`` copies of the reduced pair, so the compact
    ``(4,4)`` form parses to ``(1,1)^4``.
    """
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise ParseError("empty polygon string")
    triples: list[tuple[int, int, int]] = []
    for term in compact.split("+"):
        m = _TERM_RE.match(term)
        if not m:
            raise ParseError(f"cannot parse polygon term {term!r}")
        a, b = int(m.group(1)), int(m.group(2))
        r = int(m.group(3)) if m.group(3) else 1
        if a == 0 and b == 0:
            raise ParseError(f"term {term!r} is the zero pair")
        g0 = gcd(a, b)
        if g0 > 1 and not strict:
            a, b, r = a // g0, b // g0, r * g0
        triples.append((a, b, r))
    return from_pairs(triples)


def polygon_from_json(obj: dict) -> NewtonPolygon:
    try:
        return from_pairs([(int(m), int(n), int(r)) for m, n, r in obj["parts"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad polygon JSON: {exc}") from exc


# -- partial order ------------------------------------------------------------

def precedes(gamma: NewtonPolygon, beta: NewtonPolygon) -> bool:
    """True when both share ``(d, c)`` and ``gamma`` is on-or-above ``beta``.

    This is reflexive, antisymmetric and transitive; the supersingular
    polygon precedes every symmetric polygon of the same dimension.
    """
    if gamma.dim != beta.dim or gamma.codim != beta.codim:
        return False
    og, ob = gamma._ordinates(), beta._ordinates()
    return all(a >= b for a, b in zip(og, ob))


# -- enumeration ---------------------------------------------------------------

def _coprime_pairs(max_m: int, max_n: int) -> list[SlopePair]:
    pairs = []
    if max_m >= 1:
        pairs.append(SlopePair(1, 0))
    if max_n >= 1:
        pairs.append(SlopePair(0, 1))
    for m in range(1, max_m + 1):
        for n in range(1, max_n + 1):
            if gcd(m, n) == 1:
                pairs.append(SlopePair(m, n))
    pairs.sort(key=lambda p: p.slope)
    return pairs


def enumerate_polygons(
    d: int, c: int, *, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> list[NewtonPolygon]:
    """All Newton polygons with dimension ``d`` and codimension ``c``.

    Complete and duplicate-free, ordered by lexicographic slope sequence.
    Multisets of coprime pairs are generated directly (recursing over pairs
    in slope order), so no dedup pass is needed.
    """
    if d < 0 or c < 0:
        raise EmptyInput("d and c must be non-negative")
    if d + c > height_bound:
        raise BoundExceeded(f"height {d + c} exceeds bound {height_bound}")
    if d == 0 and c == 0:
        return []
    pairs = _coprime_pairs(d, c)
    out: list[NewtonPolygon] = []

    def rec(i: int, d_rem: int, c_rem: int, acc: list[tuple[int, int, int]]) -> None:
        if d_rem == 0 and c_rem == 0:
            out.append(from_pairs(acc))
            return
        if i == len(pairs):
            return
        rec(i + 1, d_rem, c_rem, acc)
        p = pairs[i]
        r = 1
        while r * p.m <= d_rem and r * p.n <= c_rem:
            rec(i + 1, d_rem - r * p.m, c_rem - r * p.n, acc + [(p.m, p.n, r)])
            r += 1

    rec(0, d, c, [])
    out.sort(key=NewtonPolygon.sort_key)
    return out


def enumerate_symmetric(
    g: int, *, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> list[NewtonPolygon]:
    """All symmetric Newton polygons of dimension ``g`` (height ``2g``)."""
    if g < 1:
        raise EmptyInput("g must be >= 1")
    if 2 * g > height_bound:
        raise BoundExceeded(f"height {2 * g} exceeds bound {height_bound}")
    # building blocks: a dual pair (m,n)+(n,m) with m > n >= 0 costs m+n
    # per copy; the self-dual pair (1,1) costs 1 per copy.
    blocks = [
        SlopePair(m, n)
        for m in range(1, g + 1)
        for n in range(0, min(m - 1, g - m) + 1)
        if gcd(m, n) == 1
    ]
    blocks.sort(key=lambda p: p.slope)
    out: list[NewtonPolygon] = []

    def rec(i: int, g_rem: int, acc: list[tuple[int, int, int]]) -> None:
        if i == len(blocks):
            parts = list(acc)
            if g_rem:
                parts.append((1, 1, g_rem))
            if parts:
                out.append(from_pairs(parts))
            return
        p = blocks[i]
        w = p.height
        for r in range(0, g_rem // w + 1):
            extra = [(p.m, p.n, r), (p.n, p.m, r)] if r else []
            rec(i + 1, g_rem - r * w, acc + extra)

    rec(0, g, [])
    out.sort(key=NewtonPolygon.sort_key)
    return out


def hasse_diagram(
    polygons: Sequence[NewtonPolygon],
) -> list[tuple[NewtonPolygon, NewtonPolygon]]:
    """Covering edges ``(gamma, beta)`` of the order restricted to the input.

    ``gamma`` is covered by ``beta``: ``gamma`` precedes ``beta`` strictly
    with no intermediate element of the input between them.
    """
    polys = list(polygons)
    if len(set(polys)) != len(polys):
        raise DuplicateInput("input polygons must be distinct")
    n = len(polys)
    lt = [[i != j and precedes(polys[i], polys[j]) for j in range(n)] for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(n):
            if lt[i][j] and not any(lt[i][k] and lt[k][j] for k in range(n)):
                edges.append((polys[i], polys[j]))
    edges.sort(key=lambda e: (e[0].sort_key(), e[1].sort_key()))
    return edges
