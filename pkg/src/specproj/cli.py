"""Command-line front end.

Exit codes: 0 success (or member), 2 non-member, 1 usage or input error.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path

import numpy as np

from specproj import sdr
from specproj.feas import DEFAULT_RADIUS, DEFAULT_TOL, Status, membership
from specproj.repfile import RepFileError, export_sdpa, load, save

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> np.ndarray:
    try:
        vals = np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")
    return vals


def _interval(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an interval a:b, got {text!r}")
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty interval {text!r}")
    return a, b


def _box(text: str) -> list[tuple[float, float]]:
    return [_interval(part) for part in text.split(",")]


def _load_named(path) -> sdr.SDRep:
    R = load(path)
    if not R.provenance:
        R = sdr._with_provenance(R, Path(path).stem)
    return R


def cmd_info(args):
    R = load(args.file)
    print(f"k: {R.k}")
    print(f"n: {R.n}")
    print(f"m: {R.m}")
    print(f"blocks: {' '.join(map(str, R.blocks))}")
    print(f"ambient labels: {' '.join(R.ambient_labels)}")
    print(f"lifted labels: {' '.join(R.lifted_labels)}")
    print(f"provenance: {R.provenance}")
    return EXIT_OK


_UNARY = {
    "cone-hull": sdr.cone_hull,
    "homogenize": sdr.homogenize,
    "slice": sdr.slice_last_at_one,
}
_BINARY = {"intersect": sdr.intersection, "product": sdr.product}
_VARIADIC = {
    "minkowski": lambda reps: sdr.minkowski_sum(*reps),
    "conv-union": sdr.convex_hull_union,
}


def cmd_compose(args):
    reps = [_load_named(f) for f in args.files]
    op = args.operation
    arity = 1 if op in _UNARY else 2
    if op in _VARIADIC:
        if len(reps) < 2:
            raise ValueError(f"{op} needs at least two input files")
        out = _VARIADIC[op](reps)
    elif len(reps) != arity:
        raise ValueError(f"{op} takes exactly {arity} input file(s), got {len(reps)}")
    elif op in _UNARY:
        out = _UNARY[op](reps[0])
    else:
        out = _BINARY[op](*reps)
    save(out, args.output)
    return EXIT_OK


def cmd_member(args):
    R = load(args.file)
    rep = membership(R, args.point, tol=args.tol, radius=args.radius, seed=args.seed)
    print(f"status: {rep.status}")
    print(f"margin: {rep.margin:.10g}")
    print(f"witness: {','.join(f'{v:.10g}' for v in rep.witness)}")
    print(f"radius_hit: {str(rep.radius_hit).lower()}")
    return EXIT_INFEASIBLE if rep.status is Status.EPS_INFEASIBLE else EXIT_OK


def cmd_export_sdpa(args):
    R = load(args.file)
    export_sdpa(R, args.point, args.output)
    return EXIT_OK


def _pixel_margin(R, tol, radius, seed, point):
    return membership(R, point, tol=tol, radius=radius, seed=seed).margin


def rasterize(R, xrange, yrange, res, *, tol=DEFAULT_TOL, radius=DEFAULT_RADIUS, seed=0, jobs=1):
    """Grayscale membership image, row 0 at the top of ``yrange``."""
    if R.n != 2:
        raise ValueError(f"rasterize needs n = 2, representation has n = {R.n}")
    xs = np.linspace(*xrange, res)
    ys = np.linspace(*yrange, res)[::-1]
    points = [np.array([x, y]) for y in ys for x in xs]
    fn = partial(_pixel_margin, R, tol, radius, seed)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            margins = list(pool.map(fn, points, chunksize=64))
    else:
        margins = [fn(p) for p in points]
    img = np.clip(np.array(margins), -1.0, 1.0).reshape(res, res)
    return np.round((img + 1.0) * 127.5).astype(np.uint8)


def write_pgm(img: np.ndarray, path) -> None:
    h, w = img.shape
    Path(path).write_bytes(f"P5\n{w} {h}\n255\n".encode("ascii") + img.tobytes())


def cmd_rasterize(args):
    R = load(args.file)
    img = rasterize(
        R, args.xrange, args.yrange, args.res,
        tol=args.tol, radius=args.radius, seed=args.seed, jobs=args.jobs,
    )
    write_pgm(img, args.output)
    return EXIT_OK


def sample(R, count, box, *, seed=0, tol=DEFAULT_TOL, radius=DEFAULT_RADIUS, max_draws=None):
    """Rejection sampling: uniform draws from ``box`` kept when they are members."""
    if len(box) != R.n:
        raise ValueError(f"box has {len(box)} intervals, representation has n = {R.n}")
    lo, hi = np.array(box, dtype=float).T
    rng = np.random.default_rng(seed)
    max_draws = max_draws or 1000 * count
    found = []
    for _ in range(max_draws):
        if len(found) == count:
            break
        p = rng.uniform(lo, hi)
        if membership(R, p, tol=tol, radius=radius, seed=seed).member:
            found.append(p)
    if len(found) < count:
        raise ValueError(f"found only {len(found)} of {count} members in {max_draws} draws")
    return np.array(found)


def cmd_sample(args):
    R = load(args.file)
    for p in sample(R, args.count, args.box, seed=args.seed, tol=args.tol, radius=args.radius):
        print(",".join(f"{v:.10g}" for v in p))
    return EXIT_OK


def _oracle_flags(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--radius", type=float, default=DEFAULT_RADIUS)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specproj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("info", help="print dimensions, labels and provenance")
    p.add_argument("file")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("compose", help="apply a construction and write the result")
    p.add_argument("operation", choices=[*_UNARY, *_BINARY, *_VARIADIC])
    p.add_argument("files", nargs="+")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("member", help="test membership of a point")
    p.add_argument("file")
    p.add_argument("--point", type=_floats, required=True)
    _oracle_flags(p)
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("export-sdpa", help="write the margin problem at a point in SDPA sparse format")
    p.add_argument("file")
    p.add_argument("--point", type=_floats, required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_export_sdpa)

    p = sub.add_parser("rasterize", help="write a PGM image of the margin over a 2-D window")
    p.add_argument("file")
    p.add_argument("--xrange", type=_interval, required=True)
    p.add_argument("--yrange", type=_interval, required=True)
    p.add_argument("--res", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", required=True)
    _oracle_flags(p)
    p.set_defaults(func=cmd_rasterize)

    p = sub.add_parser("sample", help="print members found by rejection sampling")
    p.add_argument("file")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--box", type=_box, required=True)
    _oracle_flags(p)
    p.set_defaults(func=cmd_sample)
    return parser


_VALUE_FLAGS = {"--point", "--box", "--xrange", "--yrange"}


def _attach_values(argv):
    # "--point -0.1,1" would otherwise be read as an unknown option.
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_attach_values(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return args.func(args)
    except (RepFileError, ValueError, OSError) as exc:
        print(f"specproj: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
