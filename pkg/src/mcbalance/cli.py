"""``mcbalance`` command line.

Exit status: 0 success, 1 configuration or I/O error, 2 numerical
degeneracy (colinear target colors, degenerate white point).
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import _kernels, jobs
from .colorspace import xyz_to_linear_rgb
from .config import Method, job_document, load_job, load_scene
from .errors import ColinearTargetColors, ConfigError, DegenerateError, McBalanceError
from .image import from_xyz, save_image
from .synthcam import IlluminantCast, chart_scene, render

log = logging.getLogger("mcbalance")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_DEGENERATE = 2


def _dump(doc):
    return json.dumps(doc, indent=2) + "\n"


def _write_report(report, path):
    if path:
        Path(path).write_text(_dump(report))


def _apply_overrides(job, args):
    if getattr(args, "method", None):
        job.method = Method(args.method)
    if getattr(args, "degrees", False):
        job.degrees = True
    if getattr(args, "bit_depth", None):
        job.bit_depth = args.bit_depth
    if getattr(args, "cond_threshold", None):
        job.cond_threshold = args.cond_threshold
    return job


def cmd_correct(args):
    job = _apply_overrides(load_job(args.config), args)
    if args.input:
        job.input = Path(args.input)
    if args.out:
        job.output = Path(args.out)
    result = jobs.correct(job, workers=args.workers)
    log.debug("%s matrix:\n%s", job.method.value, result.matrix)
    if job.output is not None:
        jobs.write_output(result, job.output, job.bit_depth, workers=args.workers)
    _write_report(result.report, args.report)
    if not args.quiet:
        print(jobs.format_table(result.report))
    return EXIT_OK


def cmd_correct_pair(args):
    if len(args.config) != 2:
        raise ConfigError("correct-pair needs --config twice (one per image)")
    pair = [_apply_overrides(load_job(p), args) for p in args.config]
    outs = args.out or []
    if outs and len(outs) != 2:
        raise ConfigError("give --out twice or not at all")
    for job, out in zip(pair, outs):
        job.output = Path(out)
    c1, c2, report = jobs.correct_pair(*pair, workers=args.workers)
    for job, result in zip(pair, (c1, c2)):
        if job.output is not None:
            jobs.write_output(result, job.output, job.bit_depth, workers=args.workers)
    _write_report(report, args.report)
    if not args.quiet:
        for i, sub in enumerate(report["images"], 1):
            print(f"[image {i}] {sub['input']}")
            print(jobs.format_table(sub))
            print()
        print("cross-image differences of corrected means")
        for row in report["cross_image"]:
            ang = row["angular_error"]
            ang_s = "n/a" if ang is None else f"{ang:.4g}"
            print(f"  {row['name']}: angular {ang_s}  dH {row['hue_difference']:.4g}")
    return EXIT_OK


def cmd_eval(args):
    job = _apply_overrides(load_job(args.config), args)
    if args.image:
        job.input = Path(args.image)
    report = jobs.evaluate(job, workers=args.workers)
    _write_report(report, args.report)
    if not args.quiet:
        print(jobs.format_table(report))
    return EXIT_OK


def cmd_synth(args):
    scene = load_scene(args.scene) if args.scene else chart_scene(copies=args.copies)
    cast = IlluminantCast(args.cast_model, tuple(args.gains))
    xyz = render(scene, cast, noise_sigma=args.noise, seed=args.seed)
    clipped = _clipped_patches(scene, xyz)
    if clipped:
        log.warning("out of the sRGB gamut, clipped in %s: %s", args.out, ", ".join(clipped))
    save_image(from_xyz(xyz, workers=args.workers), args.out, bit_depth=args.bit_depth)
    if args.job_out:
        Path(args.job_out).write_text(_dump(_synth_job(scene, args)))
    if not args.quiet:
        print(f"wrote {args.out} ({scene.width}x{scene.height}, {len(scene.patches)} patches)")
    return EXIT_OK


def _clipped_patches(scene, xyz):
    """Patches whose cast color leaves [0, 1] in linear sRGB."""
    out = []
    for p in scene.patches:
        rgb = xyz_to_linear_rgb(xyz.pixels[p.region.slices].mean(axis=(0, 1)))
        if rgb.min() < 0.0 or rgb.max() > 1.0:
            out.append(p.region.label)
    return out


def _synth_job(scene, args):
    """Job description for a rendered scene: fit targets, white, the rest as eval."""
    from .config import JobConfig, RegionSpec

    targets = dict(zip(args.targets, ("target1", "target2", "target3")))
    specs = []
    for p in scene.patches:
        role = targets.get(p.region.label, "white" if p.region.label == args.white else "eval")
        specs.append(RegionSpec(p.region, role))
    job = JobConfig(
        regions=specs,
        benchmarks={p.region.label: p.color for p in scene.patches},
        method=Method.MCB,
        input=Path(os.path.relpath(Path(args.out).resolve(),
                                   Path(args.job_out).resolve().parent)),
        bit_depth=args.bit_depth,
    )
    return job_document(job)


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors; exit 2 is reserved for degeneracy
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(
        prog="mcbalance",
        description="Multi-color balance and white balance for images, with evaluation.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, method=True):
        if method:
            p.add_argument("--method", choices=[m.value for m in Method])
        p.add_argument("--report", metavar="PATH", help="write the JSON report here")
        p.add_argument("--degrees", action="store_true", help="report angles in degrees")
        p.add_argument("--bit-depth", type=int, choices=(8, 16))
        p.add_argument("--cond-threshold", type=float, metavar="REAL")
        p.add_argument("--workers", type=int, default=None, help="pixel worker threads")
        p.add_argument("-q", "--quiet", action="store_true")

    p = sub.add_parser("correct", help="fit and apply a correction to one image")
    p.add_argument("--config", required=True, metavar="PATH")
    p.add_argument("--input", metavar="PATH", help="override the job's input image")
    p.add_argument("--out", metavar="PATH", help="override the job's output image")
    common(p)
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("correct-pair", help="correct two images against shared benchmarks")
    p.add_argument("--config", required=True, action="append", metavar="PATH",
                   help="job for one image; give twice")
    p.add_argument("--out", action="append", metavar="PATH",
                   help="output image; give twice to override both jobs")
    common(p)
    p.set_defaults(func=cmd_correct_pair)

    p = sub.add_parser("eval", help="score image regions against benchmark colors")
    p.add_argument("image", nargs="?", help="image to score (default: the job's input)")
    p.add_argument("--config", required=True, metavar="PATH")
    common(p, method=False)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("synth", help="render a synthetic patch scene under a color cast")
    p.add_argument("--scene", metavar="PATH", help="scene description (default: 24-patch chart)")
    p.add_argument("--copies", type=int, default=1, help="chart copies for the default scene")
    p.add_argument("--cast-model", default="bradford", choices=("xyz", "bradford", "vonkries"))
    p.add_argument("--gains", type=float, nargs=3, default=(1.0, 1.0, 1.0), metavar="G")
    p.add_argument("--noise", type=float, default=0.0, help="Gaussian sigma in XYZ units")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, metavar="PATH")
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=16)
    p.add_argument("--job-out", metavar="PATH", help="also write a matching job description")
    p.add_argument("--targets", nargs=3, default=("red", "green", "blue"), metavar="NAME")
    p.add_argument("--white", default="white", metavar="NAME")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("-q", "--quiet", action="store_true")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    log.debug("pixel kernels: %s", _kernels.active_backend())
    try:
        return args.func(args)
    except ColinearTargetColors as exc:
        names = ", ".join(exc.labels) if exc.labels else "unknown regions"
        print(f"error: colinear target colors in regions {names}: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except DegenerateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (McBalanceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
