#!/usr/bin/env python3
"""Render a small gallery of configurations to SVG.

Defaults to the three showcase cases: the heptagonal K(7;2,3) (a (21_4)
configuration), K(13;3,5) (a (39_4)), and K(12;4,5), whose twelve degree-6
lines come out in the highlight color.

Usage:
    python scripts/render_gallery.py --out-dir gallery
    python scripts/render_gallery.py --out-dir gallery 30 6 10
"""

import argparse
from pathlib import Path

from karteszi.config import build, validate_params
from karteszi.io_render import RenderStyle, render_svg, write_document

DEFAULT_CASES = ((7, 2, 3), (13, 3, 5), (12, 4, 5))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("params", nargs="*", type=int,
                        help="optional n ell m triple (default: the showcase trio)")
    parser.add_argument("--out-dir", default="gallery")
    parser.add_argument("--canvas", type=int, default=1000)
    args = parser.parse_args()

    if args.params:
        if len(args.params) % 3:
            parser.error("parameters come in (n ell m) triples")
        cases = [tuple(args.params[i : i + 3]) for i in range(0, len(args.params), 3)]
    else:
        cases = list(DEFAULT_CASES)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    style = RenderStyle(canvas_px=args.canvas)

    for n, ell, m in cases:
        cfg = build(validate_params(n, ell, m))
        stem = f"K_{n}_{ell}_{m}"
        render_svg(cfg, style, out / f"{stem}.svg")
        write_document(cfg, out / f"{stem}.cfg")
        status = f"{len(cfg.flags.extra_pairs)} extra incidences" if cfg.flags.has_extras else "clean"
        print(f"{stem}: {status} -> {out / (stem + '.svg')}")


if __name__ == "__main__":
    main()
