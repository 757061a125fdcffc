"""Command line interface.

Commands: table, hasse, enumerate, invariants, es, homstab, polforms,
frobnp, common-source.  Global flags (per command): --p, --format, --out,
--bound, --depth.  All outputs are deterministic; exit codes are 0 on
success, 1 for unparsable input, 2 for bound/usage problems, 3 when an
internal consistency check fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import dieudonne, eo, polarization, strata
from .errors import BoundError, InputError, InternalCheckError, ParseError
from .newton import NewtonPolygon, enumerate_polygons, enumerate_symmetric, hasse_diagram, parse_polygon


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RunConfig:
    p: int = 2
    height_bound: int = 16
    depth_bound: int = 8
    fmt: str = "json"

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise InputError(f"--p {self.p} is not prime")
        if self.height_bound < 1 or self.depth_bound < 1:
            raise InputError("bounds must be positive")


# -- rendering helpers ---------------------------------------------------------

def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _row_labels(records: list[strata.StrataRecord]) -> list[str]:
    by_f: dict[int, int] = {}
    for rec in records:
        by_f[rec.f] = by_f.get(rec.f, 0) + 1
    seen: dict[int, int] = {}
    labels = []
    for rec in records:
        if by_f[rec.f] == 1:
            labels.append(f"f={rec.f}")
        else:
            idx = seen.get(rec.f, 0)
            seen[rec.f] = idx + 1
            labels.append(f"f={rec.f}{chr(ord('a') + idx)}")
    return labels


def render_table_text(records: list[strata.StrataRecord]) -> str:
    header = ["NP", "xi", "f", "sdim", "c", "i", "ES"]
    rows = [header]
    for label, rec in zip(_row_labels(records), records):
        rows.append(
            [label, rec.xi.condensed(), str(rec.f), str(rec.sdim), str(rec.c), str(rec.i), rec.es.text()]
        )
    widths = [max(len(r[k]) for r in rows) for k in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def render_table_csv(records: list[strata.StrataRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["xi", "f", "sdim", "c", "i", "es", "conjectured_max_total_dim"])
    for rec in records:
        writer.writerow(
            [rec.xi.text(), rec.f, rec.sdim, rec.c, rec.i, rec.es.text(), rec.conjectured_max_total_dim]
        )
    return buf.getvalue()


def render_hasse_dot(polys: list[NewtonPolygon]) -> str:
    edges = hasse_diagram(polys)
    lines = ["digraph hasse {"]
    for xi in polys:
        stats = f"f={xi.p_rank()}"
        if xi.is_symmetric():
            stats = (
                f"f={xi.p_rank()} sdim={strata.sdim(xi)}"
                f" c={strata.c_leaf(xi)} i={strata.i_leaf(xi)}"
            )
        else:
            stats += f" cu={strata.cu(xi)}"
        lines.append(f'  "{xi.text()}" [label="{xi.condensed()}\\n{stats}"];')
    for lower, upper in edges:
        lines.append(f'  "{upper.text()}" -> "{lower.text()}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _parse_xi(text: str) -> NewtonPolygon:
    return parse_polygon(text)


def _matrix_from_json(obj) -> list[list[Fraction]]:
    if not isinstance(obj, list) or not obj:
        raise ParseError("matrix file must hold a non-empty JSON array of arrays")
    rows = []
    for row in obj:
        if not isinstance(row, list):
            raise ParseError("matrix rows must be arrays")
        out = []
        for x in row:
            if isinstance(x, int):
                out.append(Fraction(x))
            elif isinstance(x, str):
                try:
                    out.append(Fraction(x))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad rational entry {x!r}") from exc
            else:
                raise ParseError(f"matrix entries must be integers or 'a/b' strings, got {x!r}")
        rows.append(out)
    return rows


# -- command implementations ----------------------------------------------------

def _cmd_table(args, cfg: RunConfig) -> str:
    records = strata.strata_table(args.g, p=cfg.p, height_bound=cfg.height_bound)
    fmt = args.format or "text"
    if fmt == "text":
        return render_table_text(records)
    if fmt == "csv":
        return render_table_csv(records)
    if fmt == "json":
        return _json_text({"g": args.g, "rows": [rec.to_json() for rec in records]})
    raise InputError(f"table does not support format {fmt!r}")


def _polygon_set(args, cfg: RunConfig) -> list[NewtonPolygon]:
    if args.g is not None:
        return enumerate_symmetric(args.g, height_bound=cfg.height_bound)
    return enumerate_polygons(args.d, args.c, height_bound=cfg.height_bound)


def _cmd_hasse(args, cfg: RunConfig) -> str:
    polys = _polygon_set(args, cfg)
    fmt = args.format or "dot"
    if fmt == "dot":
        return render_hasse_dot(polys)
    if fmt == "json":
        edges = hasse_diagram(polys)
        return _json_text(
            {
                "nodes": [xi.text() for xi in polys],
                "edges": [[lo.text(), up.text()] for lo, up in edges],
            }
        )
    raise InputError(f"hasse does not support format {fmt!r}")


def _cmd_enumerate(args, cfg: RunConfig) -> str:
    polys = _polygon_set(args, cfg)
    fmt = args.format or "json"
    if fmt == "json":
        return _json_text({"count": len(polys), "polygons": [xi.text() for xi in polys]})
    if fmt == "text":
        return "\n".join(xi.text() for xi in polys) + ("\n" if polys else "")
    raise InputError(f"enumerate does not support format {fmt!r}")


def _cmd_invariants(args, cfg: RunConfig) -> str:
    xi = _parse_xi(args.xi)
    out = {
        "xi": xi.text(),
        "height": xi.height,
        "dim": xi.dim,
        "codim": xi.codim,
        "f": xi.p_rank(),
        "cu": strata.cu(xi),
        "symmetric": xi.is_symmetric(),
    }
    if xi.is_symmetric():
        out.update(
            {
                "sdim": strata.sdim(xi),
                "c": strata.c_leaf(xi),
                "i": strata.i_leaf(xi),
                "es": eo.elementary_sequence(eo.bt1_of_xi(xi, cfg.p)).to_json(),
                "conjectured_max_total_dim": strata.conjectured_max_total_dim(xi),
                "conjectural_fields": ["conjectured_max_total_dim"],
            }
        )
    return _json_text(out)


def _cmd_es(args, cfg: RunConfig) -> str:
    xi = _parse_xi(args.xi)
    seq = eo.elementary_sequence(eo.bt1_of_xi(xi, cfg.p))
    return _json_text({"xi": xi.text(), "es": seq.to_json()})


def _cmd_homstab(args, cfg: RunConfig) -> str:
    xi = _parse_xi(args.xi)
    chain = dieudonne.restriction_image_chain(
        xi, args.n, args.nmax, p=cfg.p, level_bound=cfg.depth_bound
    )
    return _json_text(
        {
            "xi": xi.text(),
            "p": cfg.p,
            "n": args.n,
            "nmax": args.nmax,
            "stabilization_index": chain.stabilization_index,
            "image_order_exponents": chain.image_order_exponents(),
        }
    )


def _cmd_polforms(args, cfg: RunConfig) -> str:
    xi = _parse_xi(args.xi)
    forms = polarization.enumerate_forms(xi, args.e, exponent_bound=cfg.height_bound)
    fmt = args.format or "json"
    if fmt == "json":
        return _json_text(
            {
                "xi": xi.text(),
                "e": args.e,
                "count": len(forms),
                "forms": [f.text() for f in forms],
            }
        )
    if fmt == "dot":
        return polarization.move_graph_dot(forms)
    raise InputError(f"polforms does not support format {fmt!r}")


def _cmd_frobnp(args, cfg: RunConfig) -> str:
    if args.matrix_file == "-":
        raw = sys.stdin.read()
    else:
        try:
            with open(args.matrix_file, "r", encoding="utf-8") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read {args.matrix_file}: {exc}") from exc
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix file is not JSON: {exc}") from exc
    mat = _matrix_from_json(obj)
    np_out = dieudonne.frobenius_newton_polygon(mat, cfg.p)
    return _json_text(
        {
            "p": cfg.p,
            "xi": np_out.text(),
            "slopes": [str(s) for s in np_out.slopes()],
        }
    )


def _cmd_common_source(args, cfg: RunConfig) -> str:
    xi = _parse_xi(args.xi)
    f1 = polarization.parse_form(args.form1, xi)
    f2 = polarization.parse_form(args.form2, xi)
    res = polarization.common_source(f1, f2, depth=cfg.depth_bound)
    return _json_text(
        {
            "xi": xi.text(),
            "source": res.source.text(),
            "path1": [label for label, _ in res.path1],
            "path2": [label for label, _ in res.path2],
        }
    )


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="newtonstrata",
        description="Exact invariants of Newton polygon strata and minimal modules.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--p", type=int, default=2, help="prime (default 2)")
        p.add_argument("--format", choices=["json", "csv", "dot", "text"], default=None)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        p.add_argument("--bound", type=int, default=16, help="enumeration bound")
        p.add_argument("--depth", type=int, default=8, help="search depth bound")

    t = sub.add_parser("table", help="strata table for symmetric polygons of dimension g")
    t.add_argument("--g", type=int, required=True)
    common(t)

    for name, help_text in (
        ("hasse", "Hasse diagram of the slope order"),
        ("enumerate", "list Newton polygons"),
    ):
        h = sub.add_parser(name, help=help_text)
        h.add_argument("--g", type=int, default=None)
        h.add_argument("--d", type=int, default=None)
        h.add_argument("--c", type=int, default=None)
        common(h)

    inv = sub.add_parser("invariants", help="numeric invariants of one polygon")
    inv.add_argument("xi")
    common(inv)

    es = sub.add_parser("es", help="elementary sequence of a symmetric polygon")
    es.add_argument("xi")
    common(es)

    hs = sub.add_parser("homstab", help="restriction-image chain stabilization")
    hs.add_argument("--xi", required=True)
    hs.add_argument("--n", type=int, required=True)
    hs.add_argument("--nmax", type=int, required=True)
    common(hs)

    pf = sub.add_parser("polforms", help="quasi-polarization forms of a given degree exponent")
    pf.add_argument("xi")
    pf.add_argument("--e", type=int, required=True)
    common(pf)

    fr = sub.add_parser("frobnp", help="Newton polygon of a Frobenius matrix (JSON file)")
    fr.add_argument("matrix_file")
    common(fr)

    cs = sub.add_parser("common-source", help="common move-source of two forms")
    cs.add_argument("--xi", required=True)
    cs.add_argument("form1")
    cs.add_argument("form2")
    common(cs)

    return ap


_HANDLERS = {
    "table": _cmd_table,
    "hasse": _cmd_hasse,
    "enumerate": _cmd_enumerate,
    "invariants": _cmd_invariants,
    "es": _cmd_es,
    "homstab": _cmd_homstab,
    "polforms": _cmd_polforms,
    "frobnp": _cmd_frobnp,
    "common-source": _cmd_common_source,
}


def _validate(ap: argparse.ArgumentParser, args) -> None:
    if args.command == "table" and args.g < 1:
        ap.error("--g must be >= 1")
    if args.command in ("hasse", "enumerate"):
        if args.g is None and (args.d is None or args.c is None):
            ap.error("need --g or both --d and --c")
        if args.g is not None and args.g < 1:
            ap.error("--g must be >= 1")
        if args.g is None and (args.d < 0 or args.c < 0):
            ap.error("--d and --c must be >= 0")
    if args.command == "homstab" and not (1 <= args.n < args.nmax):
        ap.error("need 1 <= n < nmax")
    if args.command == "polforms" and args.e < 0:
        ap.error("--e must be >= 0")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(ap, args)
    try:
        cfg = RunConfig(p=args.p, height_bound=args.bound, depth_bound=args.depth)
        text = _HANDLERS[args.command](args, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InternalCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
