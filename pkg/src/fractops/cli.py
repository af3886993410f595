"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 numerical or validation failure,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .codespace import format_address, parse_address
from .config import ConfigError, parse_ifs_config
from .gallery import GALLERY_HELP, make_ifs, table1_comparison
from .ifs import IFS, IFSError, Viewport
from .imageio import PpmError, ppm_read, ppm_write
from .raster import (
    PixelGrid,
    RasterPicture,
    render_adaptive,
    render_chaos,
    render_deterministic,
    required_depth,
)
from .tops import build_partition, enumerate_addresses, tops_orbit
from .transform import (
    area_probe,
    color_steal,
    continuity_probe,
    refinement_check,
    transform_picture_deterministic,
)

USAGE_EXIT = 1
NUMERIC_EXIT = 2
IO_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _resolve_ifs(name: str) -> IFS:
    if os.path.exists(name):
        try:
            with open(name, "r", encoding="utf-8") as fh:
                _, ifs = parse_ifs_config(fh.read())
            return ifs
        except OSError as exc:
            raise PpmError(str(exc))
    return make_ifs(name)


def _parse_size(text: str) -> tuple[int, int]:
    w, _, h = text.partition("x")
    return int(w), int(h)


def _parse_point(text: str) -> tuple[float, float]:
    x, _, y = text.partition(",")
    return float(x), float(y)


def _grid(ifs: IFS, size: tuple[int, int]) -> PixelGrid:
    return PixelGrid(size[0], size[1], ifs.viewport)


def _mask_picture(mask) -> RasterPicture:
    pic = RasterPicture.blank(mask.grid)
    pic.pixels[mask.bits] = 255
    pic.coverage[:] = mask.bits
    return pic


def build_parser() -> _Parser:
    parser = _Parser(prog="fractops", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="rasterize an attractor mask")
    p.add_argument("ifs")
    p.add_argument("--out", required=True)
    p.add_argument("--size", default="512x512")
    p.add_argument("--method", choices=["chaos", "det"], default="chaos")
    p.add_argument("--iters", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--depth", type=int, default=None,
                   help="det only: composition depth (default: pixel convergence)")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("transform", help="fractal-transform a picture")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--picture", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--method", choices=["steal", "det"], default="steal")
    p.add_argument("--size", default="512x512")
    p.add_argument("--depth", type=int, default=48)
    p.add_argument("--iters", type=int, default=10_000_000)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("tops", help="print the tops address prefix of a point")
    p.add_argument("ifs")
    p.add_argument("--point", required=True)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--size", default="512x512")

    p = sub.add_parser("addresses", help="enumerate address prefixes of a point")
    p.add_argument("ifs")
    p.add_argument("--point", required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--size", default="512x512")

    p = sub.add_parser("diagnose", help="continuity/refinement/area probes")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--continuity", action="store_true")
    p.add_argument("--refinement", action="store_true")
    p.add_argument("--area", default=None, metavar="x0,y0,x1,y1")
    p.add_argument("--size", default="512x512")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int, default=1)

    sub.add_parser("gallery", help="list built-in IFSs")
    return parser


def _cmd_render(args) -> int:
    ifs = _resolve_ifs(args.ifs)
    grid = _grid(ifs, _parse_size(args.size))
    if args.method == "chaos":
        mask = render_chaos(ifs, args.iters, args.seed, grid)
    else:
        depth = args.depth
        if depth is None:
            mask = render_adaptive(ifs, grid)
        else:
            mask = render_deterministic(ifs, depth, grid)
    ppm_write(args.out, _mask_picture(mask))
    print(f"wrote {args.out}: {mask.count()} pixels set")
    return 0


def _cmd_transform(args) -> int:
    F = _resolve_ifs(args.src)
    G = _resolve_ifs(args.dst)
    picture = ppm_read(args.picture, viewport=G.viewport)
    grid = _grid(F, _parse_size(args.size))
    if args.method == "steal":
        out, report = color_steal(
            F, G, picture, args.iters, args.seed, grid, depth=args.depth
        )
    else:
        part = build_partition(F, grid)
        out, report = transform_picture_deterministic(part, G, picture, args.depth)
    ppm_write(args.out, out)
    print(
        f"wrote {args.out}: {report.pixels_written} pixels, "
        f"coverage {report.coverage_fraction:.4f}"
    )
    if args.method == "steal" and report.coverage_fraction < 0.99:
        print("warning: sampling failure, attractor coverage below 0.99")
    return 0


def _cmd_tops(args) -> int:
    ifs = _resolve_ifs(args.ifs)
    part = build_partition(ifs, _grid(ifs, _parse_size(args.size)))
    itin = tops_orbit(part, _parse_point(args.point), args.depth)
    print(format_address(itin.prefix))
    return 0


def _cmd_addresses(args) -> int:
    ifs = _resolve_ifs(args.ifs)
    grid = _grid(ifs, _parse_size(args.size))
    part = build_partition(ifs, grid)
    addrs = enumerate_addresses(
        ifs, part.image_bits, grid, _parse_point(args.point), args.depth
    )
    for a in sorted(addrs):
        print(format_address(a))
    return 0


def _cmd_diagnose(args) -> int:
    F = _resolve_ifs(args.src)
    G = _resolve_ifs(args.dst)
    grid = _grid(F, _parse_size(args.size))
    ran = False
    if args.continuity:
        ran = True
        part = build_partition(F, grid)
        depth = args.depth if args.depth is not None else 24
        pitch = max(grid.pitch_x, grid.pitch_y)
        scales = [4 * pitch, 8 * pitch, 16 * pitch, 32 * pitch]
        print("eps\tmax_displacement")
        for eps, disp in continuity_probe(part, G, scales, args.samples, depth, args.seed):
            print(f"{eps:.6g}\t{disp:.6g}")
    if args.refinement:
        ran = True
        depth = args.depth if args.depth is not None else 10
        verdict = refinement_check(F, G, depth, args.samples, grid, args.seed)
        if verdict:
            print(f"ConsistentWithRefinement ({verdict.classes_checked} classes)")
        else:
            print(
                "Violation: point {0} addresses {1} vs {2} map {3:.4g} apart".format(
                    verdict.point,
                    format_address(verdict.address_a),
                    format_address(verdict.address_b),
                    verdict.distance,
                )
            )
    if args.area is not None:
        ran = True
        x0, y0, x1, y1 = (float(t) for t in args.area.split(","))
        part = build_partition(F, grid)
        depth = args.depth if args.depth is not None else 48
        (a_f, se_f), (a_g, se_g) = area_probe(
            part, G, Viewport(x0, y0, x1, y1), args.samples, args.seed, depth
        )
        print(f"areaF = {a_f:.6g} +- {se_f:.2g}")
        print(f"areaG = {a_g:.6g} +- {se_g:.2g}")
        print(f"ratio = {a_g / a_f:.6g}")
    if not ran:
        print("nothing to diagnose: pass --continuity, --refinement or --area",
              file=sys.stderr)
        return USAGE_EXIT
    return 0


def _cmd_gallery(args) -> int:
    for name, desc in GALLERY_HELP:
        print(f"{name:26s} {desc}")
    print()
    print("triangle reference-table diff at alpha=beta=gamma=0.5:")
    print(table1_comparison(0.5, 0.5, 0.5))
    return 0


_COMMANDS = {
    "render": _cmd_render,
    "transform": _cmd_transform,
    "tops": _cmd_tops,
    "addresses": _cmd_addresses,
    "diagnose": _cmd_diagnose,
    "gallery": _cmd_gallery,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_EXIT
    try:
        return _COMMANDS[args.command](args)
    except (PpmError, OSError) as exc:
        print(f"fractops: I/O error: {exc}", file=sys.stderr)
        return IO_EXIT
    except (IFSError, ConfigError, ValueError, KeyError, RuntimeError) as exc:
        print(f"fractops: {exc}", file=sys.stderr)
        return NUMERIC_EXIT


if __name__ == "__main__":
    sys.exit(main())
