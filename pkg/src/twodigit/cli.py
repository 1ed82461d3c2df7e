"""Command-line interface.

Data commands print JSON on stdout. Errors go to stderr as a JSON object
and map to exit codes: 2 invalid input, 3 budget exceeded, 4 internal
criteria disagreement.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import attract, enumeration, geomzono, intpoly, mat, regularity, render, series, tiling
from .errors import TwoDigitError, ValidationError

# published reference values (rho2, alpha) for the seven admissible cubic classes
CUBIC_REFERENCE = [
    ("2,2,2,1", 0.97082, 0.06822),
    ("2,1,1,1", 0.93238, 0.23148),
    ("2,0,0,1", 0.8909, 0.5),
    ("2,-1,-1,1", 0.94278, 0.23282),
    ("2,-1,0,1", 0.95197, 0.1173),
    ("2,-2,0,1", 0.98548, 0.02563),
    ("2,0,1,1", 0.97542, 0.04713),
]


def _frac(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _emit(obj):
    print(json.dumps(obj, indent=2))


def _parse_digits(text: str) -> list:
    try:
        return [[int(t) for t in dgt.split(",")] for dgt in text.strip().split(";")]
    except ValueError as exc:
        raise ValidationError(f"bad digit text {text!r}") from exc


def _system(args):
    """Digit system from a polynomial or from --matrix/--digits."""
    if getattr(args, "matrix", None):
        M = mat.parse_matrix(args.matrix)
        if args.digits:
            D = _parse_digits(args.digits)
        else:
            d = len(M)
            D = [[0] * d, [1] + [0] * (d - 1)]
        return attract.DigitSystem(M, D)
    if not getattr(args, "poly", None):
        raise ValidationError("give a polynomial or --matrix")
    p = intpoly.parse_poly(args.poly)
    if p.lead != 1:
        raise ValidationError("polynomial must be monic")
    return attract.default_system(p)


def cmd_enumerate(args):
    cat = enumeration.enumerate_expanding(args.degree, workers=args.workers, deep=args.deep)
    geo = enumeration.geometric_classes(cat)
    out = {
        "degree": cat.degree,
        "n_polys": cat.n_polys,
        "n_classes": cat.n_classes,
        "n_geometric_classes": len(geo),
        "n_self_opposite": cat.n_self_opposite,
        "polynomials": [p.to_text() for p in cat.polys],
        "class_keys": [p.to_text() for p in cat.classes],
    }
    if args.details:
        meta = []
        for p in cat.classes:
            row = {"key": p.to_text(), "class": str(attract.classify_isotropic(p))}
            if p.degree <= 4:
                row["tile"] = tiling.tile_report(attract.default_system(p)).is_tile
            if p.degree <= 4:
                row["alpha"] = regularity.holder_exponent(p).alpha
            meta.append(row)
        out["classes"] = meta
    _emit(out)


def cmd_classify(args):
    p = intpoly.parse_poly(args.poly)
    exp = intpoly.is_expanding(p)
    _emit({
        "polynomial": p.to_text(),
        "pretty": intpoly.format_poly(p),
        "expanding": exp,
        "admissible": intpoly.is_admissible(p),
        "isotropic": intpoly.is_isotropic(p),
        "class": str(attract.classify_isotropic(p)),
        "class_key": intpoly.class_key(p).to_text(),
        "opposite": intpoly.opposite(p).to_text(),
        "mahler_measure": intpoly.mahler_measure(p),
    })


def cmd_tile(args):
    sys_ = _system(args)
    rep = tiling.tile_report(sys_)
    out = rep.to_dict()
    if args.export:
        out["contact_graph"] = tiling.contact_set(sys_).to_dict()
    _emit(out)


def cmd_holder(args):
    rows = []
    if args.all_cubics:
        for text, rho_ref, alpha_ref in CUBIC_REFERENCE:
            r = regularity.holder_exponent(text).to_dict()
            r["rho2_reference"] = rho_ref
            r["alpha_reference"] = alpha_ref
            r["match"] = abs(r["rho2"] - rho_ref) <= 1e-3 and abs(r["alpha"] - alpha_ref) <= 1e-3
            rows.append(r)
    elif args.poly:
        rows.append(regularity.holder_exponent(args.poly).to_dict())
    else:
        raise ValidationError("give a polynomial or --all-cubics")
    _emit(rows if len(rows) > 1 else rows[0])


def cmd_hull(args):
    sys_ = _system(args)
    z = geomzono.hull_zonotope(sys_, args.depth)
    out = {
        "center": [_frac(x) for x in z.center],
        "generators": [[_frac(x) for x in g] for g in z.generators],
        "tail_bound": z.tail_bound,
        "distinct_directions": len(geomzono.distinct_directions(z.generators)),
    }
    if sys_.dim == 2:
        out["vertices"] = [[_frac(x) for x in v] for v in geomzono.hull_vertices_2d(z)]
    if args.poly:
        poly, nv = geomzono.is_polytope_hull(intpoly.parse_poly(args.poly))
        out["polytope"] = poly
        out["predicted_vertices"] = nv
    _emit(out)


def cmd_series(args):
    try:
        params = tuple(int(t) for t in args.params.split(","))
    except ValueError as exc:
        raise ValidationError("params must be comma separated integers") from exc
    sid = series.SeriesId(args.id, params, -1 if args.sign == "-" else 1)
    p = series.generate(sid, force=args.force)
    _emit({"series": args.id, "params": list(params), "polynomial": p.to_text(),
           "pretty": intpoly.format_poly(p), "expanding": intpoly.is_expanding(p)})


def cmd_partitions(args):
    d = args.d
    out = {"d": d, "b": series.count_partitions3(d)}
    if d >= 3:
        out["b_plus"] = series.count_good_partitions(d)
    out["omega"] = float(series.omega(d))
    lo, hi = series.classical_bound_interval(d)
    out["classical_interval"] = [float(lo), float(hi)]
    out["classical_interval_holds"] = bool(lo <= out["b"] <= hi)
    if d % 3 == 0 and d >= 3:
        lo, hi = series.quadratic_family_bounds(d)
        out["good_bounds"] = [float(lo), float(hi)]
    _emit(out)


def cmd_recover(args):
    with open(args.segments) as fh:
        T = geomzono.parse_segments(fh.read())
    rec = geomzono.recover_dilation(T, args.dim)
    out = {"ambiguous": rec.ambiguous,
           "candidates": [[[_frac(x) for x in row] for row in M] for M in rec.candidates]}
    if not rec.ambiguous:
        out["M"] = out["candidates"][0]
    _emit(out)


def cmd_cloud(args):
    sys_ = _system(args)
    cloud = attract.point_cloud(sys_, args.depth)
    text = cloud.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_render(args):
    sys_ = _system(args)
    depth = args.depth
    if args.auto_depth:
        if not args.poly:
            raise ValidationError("auto depth needs a polynomial")
        alpha = regularity.holder_exponent(args.poly).alpha
        suggested, depth = render.plan_depth(sys_, alpha, args.eps, args.budget)
    elif depth is None:
        raise ValidationError("give --depth or --auto-depth")
    proj = None
    if args.axes:
        i, j = (int(t) for t in args.axes.split(","))
        proj = render.default_projection(sys_.dim, (i, j))
    view = tuple(float(t) for t in args.viewport.split(",")) if args.viewport else None
    job = render.RenderJob(sys_, depth, args.width, args.height, args.mode, proj, view,
                           args.workers, args.budget)
    data = render.render(job)
    with open(args.out, "wb") as fh:
        fh.write(data)
    _emit({"out": args.out, "depth": depth, "width": args.width, "height": args.height,
           "mode": args.mode})


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twodigit", description="Two-digit self-affine attractors.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def sys_args(p, poly_required=False):
        p.add_argument("poly", nargs=None if poly_required else "?",
                       help="ascending coefficients, e.g. 2,0,0,1")
        p.add_argument("--matrix", help="rows split by ';', entries by ','")
        p.add_argument("--digits", help="digits split by ';'")

    p = sub.add_parser("enumerate", help="catalog of expanding polynomials")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--deep", action="store_true", help="allow degrees 7 and 8")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--details", action="store_true", help="per-class type, tile verdict, alpha")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="isotropic type and class key")
    p.add_argument("poly")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("tile-check", help="measure and tile verdict")
    sys_args(p)
    p.add_argument("--export", action="store_true", help="include the contact graph")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("holder", help="L2 Hölder exponent")
    p.add_argument("poly", nargs="?")
    p.add_argument("--all-cubics", action="store_true")
    p.set_defaults(func=cmd_holder)

    p = sub.add_parser("hull", help="truncated zonotope hull")
    sys_args(p)
    p.add_argument("--depth", type=int, required=True)
    p.set_defaults(func=cmd_hull)

    p = sub.add_parser("series", help="generate a series member")
    p.add_argument("--id", required=True, choices=series.TAGS)
    p.add_argument("--params", required=True)
    p.add_argument("--sign", choices=["+", "-"], default="+")
    p.add_argument("--force", action="store_true", help="skip the validity check")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("partitions", help="3-part partition counts")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("recover", help="recover M from hull segments")
    p.add_argument("--segments", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("cloud", help="export an exact point cloud")
    sys_args(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("render", help="rasterize to PPM")
    sys_args(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=render.MODES, default="attractor")
    p.add_argument("--width", type=int, default=512)
    p.add_argument("--height", type=int, default=512)
    p.add_argument("--axes", help="projection axes, e.g. 0,2")
    p.add_argument("--viewport", help="xmin,xmax,ymin,ymax")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--budget", type=int, default=render.POINT_BUDGET)
    p.add_argument("--auto-depth", action="store_true")
    p.add_argument("--eps", type=float, default=2 ** -5)
    p.set_defaults(func=cmd_render)
    return ap


def _protect_negative(argv):
    # argparse would read "-2,0,1" as an option; a leading space keeps it positional
    return [(" " + a) if a.startswith("-") and "," in a else a for a in argv]


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = ap.parse_args(_protect_negative(argv))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        args.func(args)
    except TwoDigitError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
