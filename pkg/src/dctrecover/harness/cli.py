"""Command line front end.

Subcommands: corrupt (make an observed image + mask from a clean image),
recover (observed image + mask -> recovered image), evaluate (PSNR/SSIM of a
recovery against its reference), bench (corpus directory -> CSV and Markdown
reports).

Exit codes: 0 success, 1 usage or configuration error, 2 I/O error,
3 numerical failure.
"""

import argparse
import sys

import numpy as np

from ..errors import ConfigError, DivergenceError
from ..metrics import psnr, ssim
from ..solver import (default_svt_schedule, recover, recover_color,
                      recover_dct_only, recover_ltvnn, recover_svt)
from .bench import METHODS, run_bench, to_gray
from .config import load_config
from .image_io import load_image, load_mask, save_image, save_mask
from .masks import PATTERNS, MaskSpec, corrupt, gen_mask


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; route through the
    # ConfigError path so usage problems exit 1 like other config mistakes
    def error(self, message):
        raise ConfigError(message)


_CONFIG_FLAGS = ("scales", "gamma", "rank_r", "alpha", "delta", "inner_tol",
                 "inner_max_iters", "outer_eps", "outer_max_iters",
                 "nuclear_weight", "seed")


def _add_solver_flags(sp):
    sp.add_argument("--config", help="key=value config file; flags override it")
    sp.add_argument("--scales", help="smoothing scales as p:q:weight,p:q:weight,...")
    sp.add_argument("--gamma", type=float, help="data fidelity weight")
    sp.add_argument("--rank-r", type=int, dest="rank_r", help="untouched leading singular values")
    sp.add_argument("--alpha", type=float, help="cross-channel coupling weight")
    sp.add_argument("--delta", type=float, help="outer feedback step in [0,1]")
    sp.add_argument("--inner-tol", type=float, dest="inner_tol")
    sp.add_argument("--inner-max-iters", type=int, dest="inner_max_iters")
    sp.add_argument("--outer-eps", type=float, dest="outer_eps")
    sp.add_argument("--outer-max-iters", type=int, dest="outer_max_iters")
    sp.add_argument("--nuclear-weight", type=float, dest="nuclear_weight")
    sp.add_argument("--seed", type=int)


def _config_from(args):
    overrides = {key: getattr(args, key) for key in _CONFIG_FLAGS}
    return load_config(args.config, overrides)


def _cmd_corrupt(args):
    image = load_image(args.image)
    mask = gen_mask(image.shape[-2:], MaskSpec(args.ratio, args.seed, args.pattern))
    obs = corrupt(image, mask)
    save_image(obs.data, args.out_image)
    save_mask(mask, args.out_mask)
    observed = float(np.count_nonzero(mask)) / mask.size
    print(f"corrupted {args.image}: {observed:.4%} observed -> {args.out_image}, {args.out_mask}")
    return 0


_DCT_ONLY_MODES = {"gdnm": "global", "ldnm": "local"}


def _recover_plane(obs, method, cfg, args):
    if method == "dnm":
        return recover(obs, cfg)[0]
    if method in _DCT_ONLY_MODES:
        return recover_dct_only(obs, _DCT_ONLY_MODES[method], cfg)
    if method == "svt":
        return recover_svt(obs, default_svt_schedule(obs, args.svt_iters), args.svt_iters)
    return recover_ltvnn(obs, cfg, tv_weight=args.tv_weight)


def _cmd_recover(args):
    cfg = _config_from(args)
    data = load_image(args.image)
    mask = load_mask(args.mask)
    obs = corrupt(data, mask)
    if data.ndim == 3:
        if args.method == "dnm":
            out = recover_color(obs, cfg)
        else:
            planes = [_recover_plane(corrupt(data[c], mask), args.method, cfg, args)
                      for c in range(3)]
            out = np.stack(planes)
    else:
        out = _recover_plane(obs, args.method, cfg, args)
    save_image(out, args.out)
    print(f"recovered {args.image} with {args.method} -> {args.out}")
    return 0


def _cmd_evaluate(args):
    x = to_gray(load_image(args.image))
    ref = to_gray(load_image(args.ref))
    print(f"psnr_db={psnr(x, ref):.6f}")
    print(f"ssim={ssim(x, ref):.6f}")
    return 0


def _cmd_bench(args):
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    try:
        ratios = [float(r) for r in args.ratios.split(",") if r.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse ratios {args.ratios!r}") from None
    if not methods or not ratios:
        raise ConfigError("need at least one method and one ratio")
    cfg = _config_from(args)
    result = run_bench(args.corpus, methods, ratios, cfg, base_seed=args.seed or 0,
                       out_csv=args.out_csv, out_md=args.out_md)
    sys.stdout.write(result.to_markdown())
    print(f"wrote {args.out_csv} and {args.out_md}")
    return 0


def build_parser():
    parser = _Parser(prog="dctrecover",
                     description="Low-rank plus DCT-smoothness image recovery")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("corrupt", help="drop pixels from an image")
    sp.add_argument("--image", required=True, help="clean input image")
    sp.add_argument("--out-image", required=True, dest="out_image")
    sp.add_argument("--out-mask", required=True, dest="out_mask",
                    help="mask file (255 = observed, 0 = missing)")
    sp.add_argument("--ratio", type=float, default=0.9, help="missing pixel fraction")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--pattern", choices=PATTERNS, default="random")
    sp.set_defaults(func=_cmd_corrupt)

    sp = sub.add_parser("recover", help="fill missing pixels")
    sp.add_argument("--image", required=True, help="observed image (missing pixels zeroed)")
    sp.add_argument("--mask", required=True, help="mask file (255 = observed)")
    sp.add_argument("--out", required=True, help="recovered image path")
    sp.add_argument("--method", choices=METHODS, default="dnm")
    sp.add_argument("--tv-weight", type=float, default=0.2, dest="tv_weight",
                    help="TV weight for the ltvnn method")
    sp.add_argument("--svt-iters", type=int, default=200, dest="svt_iters")
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_recover)

    sp = sub.add_parser("evaluate", help="PSNR/SSIM against a reference (color via luma)")
    sp.add_argument("--image", required=True, help="image under test")
    sp.add_argument("--ref", required=True, help="reference image")
    sp.set_defaults(func=_cmd_evaluate)

    sp = sub.add_parser("bench", help="run the image x method x ratio grid")
    sp.add_argument("--corpus", required=True, help="directory of .pgm/.ppm/.png images")
    sp.add_argument("--methods", default=",".join(METHODS))
    sp.add_argument("--ratios", default="0.9,0.95,0.98,0.99")
    sp.add_argument("--out-csv", default="bench.csv", dest="out_csv")
    sp.add_argument("--out-md", default="bench.md", dest="out_md")
    _add_solver_flags(sp)
    sp.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (DivergenceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
