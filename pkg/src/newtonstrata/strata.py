"""Dimension formulas attached to Newton polygon strata.

For a symmetric polygon ``xi`` of dimension ``g``:

* ``c_leaf(xi)  = 2 * sum_{0 < j <= g} (sigma(j) - xi(j))`` where ``sigma``
  is the all-``1/2`` polygon of the same ``g`` — the dimension of a central
  leaf in the principally polarized stratum of ``xi``.
* ``sdim(xi)`` counts lattice points ``(x, y)`` with ``1 <= x <= g`` and
  ``xi(x) <= y <= x - 1`` — the dimension of the whole closed stratum.
* ``i_leaf(xi) = sdim(xi) - c_leaf(xi)`` — the isogeny-leaf dimension.

For an arbitrary polygon ``beta`` of height ``h``:

* ``cu(beta) = sum_{0 < j < h} (beta_upper(j) - beta(j))`` — the unpolarized
  central-leaf dimension.

All sums are exact rationals whose integrality is asserted at runtime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import eo
from .errors import BoundExceeded, NegativeResult, NonIntegralResult, NotSymmetric
from .newton import DEFAULT_HEIGHT_BOUND, NewtonPolygon, enumerate_symmetric, precedes


def _as_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise NonIntegralResult(f"{what} evaluated to non-integer {q}")
    return int(q)


def _require_symmetric(xi: NewtonPolygon) -> int:
    if not xi.is_symmetric():
        raise NotSymmetric(f"{xi.text()} is not symmetric")
    return xi.dim


def cu(beta: NewtonPolygon) -> int:
    """Central-leaf dimension of an unpolarized deformation space."""
    h = beta.height
    total = sum((beta.dual_upper(j) - beta.evaluate(j) for j in range(1, h)), Fraction(0))
    return _as_int(total, "cu")


def c_leaf(xi: NewtonPolygon) -> int:
    """Central-leaf dimension for a symmetric polygon; 0 only when isoclinic."""
    g = _require_symmetric(xi)
    total = sum((Fraction(j, 2) - xi.evaluate(j) for j in range(1, g + 1)), Fraction(0))
    return _as_int(2 * total, "c_leaf")


def sdim(xi: NewtonPolygon) -> int:
    """Stratum dimension as a lattice-point count under the polygon."""
    g = _require_symmetric(xi)
    count = 0
    for x in range(1, g + 1):
        lo = math.ceil(xi.evaluate(x))
        if lo <= x - 1:
            count += x - lo
    return count


def i_leaf(xi: NewtonPolygon) -> int:
    """Isogeny-leaf dimension, the complement of ``c_leaf`` inside ``sdim``."""
    value = sdim(xi) - c_leaf(xi)
    if value < 0:
        raise NegativeResult(f"i_leaf({xi.text()}) = {value} < 0")
    return value


def conjectured_max_total_dim(xi: NewtonPolygon) -> int:
    """Conjectural maximal dimension ``g(g-1)/2 + f`` of a stratum component.

    Conjectural: not derivable from the proven formulas above; callers should
    flag it as such in output.
    """
    g = _require_symmetric(xi)
    return g * (g - 1) // 2 + xi.p_rank()


@dataclass(frozen=True)
class StrataRecord:
    """One table row: a symmetric polygon with all its numeric invariants."""

    xi: NewtonPolygon
    f: int
    sdim: int
    c: int
    i: int
    es: eo.ElementarySequence
    conjectured_max_total_dim: int

    def __post_init__(self) -> None:
        if self.c + self.i != self.sdim:
            raise NegativeResult(
                f"c + i != sdim for {self.xi.text()}: {self.c}+{self.i} != {self.sdim}"
            )
        if not (0 <= self.c <= self.sdim and 0 <= self.i <= self.sdim):
            raise NegativeResult(f"c or i outside [0, sdim] for {self.xi.text()}")

    def to_json(self) -> dict:
        return {
            "xi": self.xi.text(),
            "f": self.f,
            "sdim": self.sdim,
            "c": self.c,
            "i": self.i,
            "es": list(self.es.psi),
            "conjectured_max_total_dim": self.conjectured_max_total_dim,
        }


def _topological_descending(polys: list[NewtonPolygon]) -> list[NewtonPolygon]:
    # maximal elements (ordinary end) first; ties broken by lexicographically
    # smaller slope sequence
    remaining = list(polys)
    order: list[NewtonPolygon] = []
    while remaining:
        avail = [
            p
            for p in remaining
            if not any(q is not p and precedes(p, q) for q in remaining)
        ]
        avail.sort(key=NewtonPolygon.sort_key)
        pick = avail[0]
        order.append(pick)
        remaining.remove(pick)
    return order


def strata_table(
    g: int, *, p: int = 2, height_bound: int = DEFAULT_HEIGHT_BOUND
) -> list[StrataRecord]:
    """One record per symmetric polygon of dimension ``g``.

    Rows run from the ordinary polygon down to the supersingular one,
    topologically with respect to the slope order.
    """
    if 2 * g > height_bound:
        raise BoundExceeded(f"height {2 * g} exceeds bound {height_bound}")
    polys = _topological_descending(enumerate_symmetric(g, height_bound=height_bound))
    records = []
    for xi in polys:
        records.append(
            StrataRecord(
                xi=xi,
                f=xi.p_rank(),
                sdim=sdim(xi),
                c=c_leaf(xi),
                i=i_leaf(xi),
                es=eo.elementary_sequence(eo.bt1_of_xi(xi, p)),
                conjectured_max_total_dim=conjectured_max_total_dim(xi),
            )
        )
    return records
