"""Normal forms of quasi-polarizations on minimal modules, and the moves
between them.

A form on the minimal object of a symmetric polygon splits into blocks:

* on the supersingular part (multiplicity ``s`` of the pair (1,1)):
  TypeI(r) blocks on single factors (degree exponent ``2r``) and TypeII(r)
  blocks on pairs of factors (degree exponent ``4r + 2``), with
  ``#I + 2 #II = s``;
* on each dual pair of parts (m,n)+(n,m) of multiplicity ``r_i``: a
  non-decreasing list of ``r_i`` elementary-divisor exponents ``d``, each
  block of degree exponent ``2d``.

The degree exponent of the form is the sum over blocks.  Moves:

* ``i``      TypeI(r+1)        -> TypeI(r)              (delta -2)
* ``ii-beta``  {TypeI(r), TypeI(r)} -> TypeII(r)        (delta +2)
* ``ii-gamma`` TypeII(r+1)     -> {TypeI(r), TypeI(r)}  (delta -6)
* ``iii``    one pair exponent d+1 -> d                 (delta -2)

Each delta is forced by the block degrees above and asserted on every
generated edge.  ``common_source`` searches backwards through the move
graph for a form with directed paths onto both inputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import BoundExceeded, InputError, InternalCheckError, NotSymmetric, ParseError, SearchDepthExceeded
from .newton import NewtonPolygon, SlopePair

DEFAULT_EXPONENT_BOUND = 16
DEFAULT_SEARCH_DEPTH = 8

MOVE_DELTAS = {"i": -2, "ii-beta": 2, "ii-gamma": -6, "iii": -2}

_PART_RE = re.compile(r"\((\d+),(\d+)\):\[([0-9,]*)\]")
_SS_RE = re.compile(r"^(I{1,2})\((\d+)\)$")


def ss_multiplicity(xi: NewtonPolygon) -> int:
    for sp, r in xi.parts:
        if sp == SlopePair(1, 1):
            return r
    return 0


def pair_parts_of(xi: NewtonPolygon) -> tuple[tuple[SlopePair, int], ...]:
    """The dual pairs (m, n) with m > n, in slope order, with multiplicities."""
    if not xi.is_symmetric():
        raise NotSymmetric(f"{xi.text()} is not symmetric")
    return tuple((sp, r) for sp, r in xi.parts if sp.m > sp.n)


@dataclass(frozen=True)
class QuasiPolarizationForm:
    xi: NewtonPolygon
    type_i: tuple[int, ...]
    type_ii: tuple[int, ...]
    pair_exponents: tuple[tuple[SlopePair, tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        s = ss_multiplicity(self.xi)
        object.__setattr__(self, "type_i", tuple(sorted(self.type_i)))
        object.__setattr__(self, "type_ii", tuple(sorted(self.type_ii)))
        object.__setattr__(
            self,
            "pair_exponents",
            tuple((sp, tuple(sorted(ds))) for sp, ds in self.pair_exponents),
        )
        if any(r < 0 for r in self.type_i + self.type_ii):
            raise InputError("negative block index")
        if len(self.type_i) + 2 * len(self.type_ii) != s:
            raise InputError(
                f"supersingular blocks cover {len(self.type_i)} + 2*{len(self.type_ii)}"
                f" factors, expected {s}"
            )
        expected = pair_parts_of(self.xi)
        got = tuple((sp, len(ds)) for sp, ds in self.pair_exponents)
        if got != expected:
            raise InputError(f"pair blocks {got} do not match polygon parts {expected}")
        if any(d < 0 for _, ds in self.pair_exponents for d in ds):
            raise InputError("negative elementary-divisor exponent")

    def degree_exponent(self) -> int:
        e = 2 * sum(self.type_i) + sum(4 * r + 2 for r in self.type_ii)
        e += 2 * sum(d for _, ds in self.pair_exponents for d in ds)
        return e

    def text(self) -> str:
        ss = [f"I({r})" for r in self.type_i] + [f"II({r})" for r in self.type_ii]
        parts = [
            f"({sp.m},{sp.n}):[" + ",".join(str(d) for d in ds) + "]"
            for sp, ds in self.pair_exponents
        ]
        return "ss:[" + ",".join(ss) + "];parts:[" + ",".join(parts) + "]"

    def sort_key(self) -> tuple:
        return (self.degree_exponent(), self.type_i, self.type_ii, self.pair_exponents)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.text()


def degree_exponent(form: QuasiPolarizationForm) -> int:
    return form.degree_exponent()


def principal_form(xi: NewtonPolygon) -> QuasiPolarizationForm:
    """The unique degree-exponent-zero form: all TypeI(0), all d = 0."""
    s = ss_multiplicity(xi)
    return QuasiPolarizationForm(
        xi=xi,
        type_i=(0,) * s,
        type_ii=(),
        pair_exponents=tuple((sp, (0,) * r) for sp, r in pair_parts_of(xi)),
    )


def parse_form(text: str, xi: NewtonPolygon) -> QuasiPolarizationForm:
    compact = re.sub(r"\s+", "", text)
    m = re.match(r"^ss:\[([^\]]*)\];parts:\[(.*)\]$", compact)
    if not m:
        raise ParseError(f"cannot parse form {text!r}")
    type_i: list[int] = []
    type_ii: list[int] = []
    if m.group(1):
        for item in m.group(1).split(","):
            sm = _SS_RE.match(item)
            if not sm:
                raise ParseError(f"bad supersingular block {item!r}")
            (type_i if sm.group(1) == "I" else type_ii).append(int(sm.group(2)))
    pair_exponents = []
    body = m.group(2)
    consumed = "".join(pm.group(0) for pm in _PART_RE.finditer(body))
    if re.sub(r",", "", consumed) != re.sub(r",", "", body):
        raise ParseError(f"bad pair blocks {body!r}")
    for pm in _PART_RE.finditer(body):
        sp = SlopePair(int(pm.group(1)), int(pm.group(2)))
        ds = tuple(int(x) for x in pm.group(3).split(",")) if pm.group(3) else ()
        pair_exponents.append((sp, ds))
    return QuasiPolarizationForm(
        xi=xi, type_i=tuple(type_i), type_ii=tuple(type_ii), pair_exponents=tuple(pair_exponents)
    )


# -- enumeration ----------------------------------------------------------------

def _sorted_tuples(count: int, total: int, minv: int = 0) -> Iterator[tuple[int, ...]]:
    """Non-decreasing tuples of ``count`` integers >= minv summing to total."""
    if count == 0:
        if total == 0:
            yield ()
        return
    for first in range(minv, total // count + 1):
        for rest in _sorted_tuples(count - 1, total - first, first):
            yield (first,) + rest


def enumerate_forms(
    xi: NewtonPolygon, e: int, *, exponent_bound: int = DEFAULT_EXPONENT_BOUND
) -> list[QuasiPolarizationForm]:
    """All normal forms on the minimal object of ``xi`` with degree exponent e."""
    if e > exponent_bound:
        raise BoundExceeded(f"exponent {e} exceeds bound {exponent_bound}")
    pairs = pair_parts_of(xi)
    s = ss_multiplicity(xi)
    if e < 0 or e % 2 != 0:
        return []
    half = e // 2  # TypeI(r) costs r, TypeII(r) costs 2r + 1, pair d costs d
    out: list[QuasiPolarizationForm] = []
    for b in range(0, s // 2 + 1):
        a = s - 2 * b
        if b > half:
            continue
        # split the halved budget between I-blocks, II-blocks, and pair parts
        def rec(slot: int, budget: int, acc: list[tuple[int, ...]]) -> None:
            if slot == 2 + len(pairs):
                if budget == 0:
                    form = QuasiPolarizationForm(
                        xi=xi,
                        type_i=acc[0],
                        type_ii=acc[1],
                        pair_exponents=tuple(
                            (sp, acc[2 + k]) for k, (sp, _) in enumerate(pairs)
                        ),
                    )
                    out.append(form)
                return
            if slot == 0:
                for total in range(0, budget + 1):
                    for t in _sorted_tuples(a, total):
                        rec(1, budget - total, acc + [t])
            elif slot == 1:
                rem = budget - b
                if rem >= 0:
                    for total in range(0, rem // 2 + 1):
                        for t in _sorted_tuples(b, total):
                            rec(2, rem - 2 * total, acc + [t])
            else:
                count = pairs[slot - 2][1]
                for total in range(0, budget + 1):
                    for t in _sorted_tuples(count, total):
                        rec(slot + 1, budget - total, acc + [t])

        rec(0, half, [])
    uniq = sorted(set(out), key=QuasiPolarizationForm.sort_key)
    return uniq


# -- moves ------------------------------------------------------------------------

@dataclass(frozen=True)
class IsogenyMove:
    label: str
    delta: int
    target: QuasiPolarizationForm


def _replace_one(t: tuple[int, ...], old: int, new: int | None) -> tuple[int, ...]:
    lst = list(t)
    lst.remove(old)
    if new is not None:
        lst.append(new)
    return tuple(sorted(lst))


def _with_ss(form: QuasiPolarizationForm, type_i, type_ii) -> QuasiPolarizationForm:
    return QuasiPolarizationForm(
        xi=form.xi, type_i=type_i, type_ii=type_ii, pair_exponents=form.pair_exponents
    )


def _with_pair(form: QuasiPolarizationForm, k: int, ds) -> QuasiPolarizationForm:
    pe = list(form.pair_exponents)
    pe[k] = (pe[k][0], tuple(sorted(ds)))
    return QuasiPolarizationForm(
        xi=form.xi, type_i=form.type_i, type_ii=form.type_ii, pair_exponents=tuple(pe)
    )


def isogeny_moves(form: QuasiPolarizationForm) -> list[IsogenyMove]:
    """All forms one move away, with labels and degree-exponent changes."""
    found: dict[tuple[str, QuasiPolarizationForm], IsogenyMove] = {}

    def emit(label: str, target: QuasiPolarizationForm) -> None:
        delta = target.degree_exponent() - form.degree_exponent()
        if delta != MOVE_DELTAS[label]:
            raise InternalCheckError(
                f"move {label} changed exponent by {delta}, expected {MOVE_DELTAS[label]}"
            )
        found.setdefault((label, target), IsogenyMove(label, delta, target))

    for r in sorted(set(form.type_i)):
        if r >= 1:
            emit("i", _with_ss(form, _replace_one(form.type_i, r, r - 1), form.type_ii))
    for r in sorted(set(form.type_i)):
        if form.type_i.count(r) >= 2:
            shrunk = _replace_one(_replace_one(form.type_i, r, None), r, None)
            emit("ii-beta", _with_ss(form, shrunk, tuple(sorted(form.type_ii + (r,)))))
    for r in sorted(set(form.type_ii)):
        if r >= 1:
            grown = tuple(sorted(form.type_i + (r - 1, r - 1)))
            emit("ii-gamma", _with_ss(form, grown, _replace_one(form.type_ii, r, None)))
    for k, (_, ds) in enumerate(form.pair_exponents):
        for d in sorted(set(ds)):
            if d >= 1:
                emit("iii", _with_pair(form, k, _replace_one(ds, d, d - 1)))
    return sorted(found.values(), key=lambda mv: (mv.label, mv.target.sort_key()))


def _predecessors(form: QuasiPolarizationForm) -> list[tuple[str, QuasiPolarizationForm]]:
    """Forms one move above: z such that some move sends z to ``form``."""
    preds: list[tuple[str, QuasiPolarizationForm]] = []
    for r in sorted(set(form.type_i)):
        preds.append(("i", _with_ss(form, _replace_one(form.type_i, r, r + 1), form.type_ii)))
    for r in sorted(set(form.type_ii)):
        grown = tuple(sorted(form.type_i + (r, r)))
        preds.append(("ii-beta", _with_ss(form, grown, _replace_one(form.type_ii, r, None))))
    for r in sorted(set(form.type_i)):
        if form.type_i.count(r) >= 2:
            shrunk = _replace_one(_replace_one(form.type_i, r, None), r, None)
            preds.append(
                ("ii-gamma", _with_ss(form, shrunk, tuple(sorted(form.type_ii + (r + 1,)))))
            )
    for k, (_, ds) in enumerate(form.pair_exponents):
        for d in sorted(set(ds)):
            preds.append(("iii", _with_pair(form, k, _replace_one(ds, d, d + 1))))
    return preds


def _ancestors(
    form: QuasiPolarizationForm, depth: int
) -> dict[QuasiPolarizationForm, tuple[tuple[str, QuasiPolarizationForm], ...]]:
    """Backward BFS: every form with a directed move path onto ``form``.

    Values are the paths as (label, next form) steps, applied left to right.
    """
    paths: dict[QuasiPolarizationForm, tuple] = {form: ()}
    frontier = [form]
    for _ in range(depth):
        nxt = []
        for z in sorted(frontier, key=QuasiPolarizationForm.sort_key):
            for label, w in _predecessors(z):
                if w not in paths:
                    paths[w] = ((label, z),) + paths[z]
                    nxt.append(w)
        frontier = nxt
        if not frontier:
            break
    return paths


@dataclass(frozen=True)
class CommonSource:
    source: QuasiPolarizationForm
    path1: tuple[tuple[str, QuasiPolarizationForm], ...]
    path2: tuple[tuple[str, QuasiPolarizationForm], ...]


def common_source(
    f1: QuasiPolarizationForm,
    f2: QuasiPolarizationForm,
    *,
    depth: int = DEFAULT_SEARCH_DEPTH,
) -> CommonSource:
    """A form with directed move paths onto both inputs, by backward search.

    Raises :class:`SearchDepthExceeded` when none is found within ``depth``
    moves per path; that reports a failed search, not nonexistence.
    """
    if f1.xi != f2.xi:
        raise InputError("forms live on different polygons")
    anc1 = _ancestors(f1, depth)
    anc2 = _ancestors(f2, depth)
    common = set(anc1) & set(anc2)
    if not common:
        raise SearchDepthExceeded(f"no common source within depth {depth}")
    best = min(common, key=lambda z: (len(anc1[z]) + len(anc2[z]), z.sort_key()))
    return CommonSource(source=best, path1=anc1[best], path2=anc2[best])


# -- move-graph export --------------------------------------------------------------

def reachable_closure(forms: Iterable[QuasiPolarizationForm]) -> list[QuasiPolarizationForm]:
    """Closure of the input set under forward moves (always finite)."""
    seen: dict[QuasiPolarizationForm, None] = {}
    stack = list(forms)
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen[f] = None
        for mv in isogeny_moves(f):
            stack.append(mv.target)
    return sorted(seen, key=QuasiPolarizationForm.sort_key)


def move_graph_dot(forms: Iterable[QuasiPolarizationForm]) -> str:
    """DOT digraph of the forward move graph spanned by ``forms``."""
    nodes = reachable_closure(forms)
    lines = ["digraph moves {"]
    for f in nodes:
        lines.append(f'  "{f.text()}" [label="{f.text()}\\ne={f.degree_exponent()}"];')
    for f in nodes:
        for mv in isogeny_moves(f):
            lines.append(f'  "{f.text()}" -> "{mv.target.text()}" [label="{mv.label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
