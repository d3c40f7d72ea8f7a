"""Correction and evaluation workflows behind the CLI subcommands."""

import math
from dataclasses import dataclass

import numpy as np

from .balance import multi_color_balance_matrix, white_balance_matrix
from .config import Method
from .colorspace import xyz_to_lab
from .errors import ConfigError, DomainError
from .image import (ColorSpace, apply_correction, from_xyz, load_image, region_mean,
                    save_image, to_xyz)
from .metrics import ciede2000_delta_h, color_metrics, reproduction_angular_error

REPORT_VERSION = 1


@dataclass
class Correction:
    matrix: np.ndarray
    before: object  # ImageBuffer, XYZ
    after: object  # ImageBuffer, XYZ
    report: dict


def _angle(value, degrees):
    if value is None:
        return None
    return math.degrees(value) if degrees else value


def fit_matrix(job, xyz):
    """Correction matrix for ``job`` measured on the XYZ buffer ``xyz``."""
    if job.method is Method.MCB:
        targets = job.targets
        sources = [region_mean(xyz, t.region) for t in targets]
        dests = [job.benchmark_for(t) for t in targets]
        return multi_color_balance_matrix(sources, dests, cond_threshold=job.cond_threshold,
                                          labels=[t.name for t in targets])
    white = job.white
    return white_balance_matrix(region_mean(xyz, white.region), job.benchmark_for(white),
                                job.method.adaptation_model)


def _check_regions(job, xyz):
    for spec in job.regions:
        if not spec.region.fits(xyz.width, xyz.height):
            raise ConfigError(f"region {spec.name!r} exceeds the {xyz.width}x{xyz.height} image")


def region_rows(job, stages):
    """Per-region means and metrics for each ``(stage_name, xyz_buffer)``."""
    rows = []
    for spec in job.regions:
        bench = job.benchmark_for(spec)
        row = {"name": spec.name, "role": spec.role,
               "benchmark": list(bench) if bench is not None else None}
        for stage, buf in stages:
            mean = region_mean(buf, spec.region)
            entry = {"mean": list(mean)}
            if bench is not None:
                m = color_metrics(mean, bench, spec.name, job.lab_white)
                entry["angular_error"] = _angle(m.angular_error, job.degrees)
                entry["hue_difference"] = m.hue_difference
            row[stage] = entry
        rows.append(row)
    return rows


def correct(job, workers=None, image=None):
    """Fit and apply the job's correction; nothing is written to disk."""
    job.validate()
    if image is None:
        if job.input is None:
            raise ConfigError("job has no input image")
        image = load_image(job.input)
    xyz = image if image.space is ColorSpace.XYZ else to_xyz(image, workers=workers)
    _check_regions(job, xyz)
    m = fit_matrix(job, xyz)
    after = apply_correction(xyz, m, workers=workers)
    report = {
        "version": REPORT_VERSION,
        "command": "correct",
        "method": job.method.value,
        "input": str(job.input) if job.input else None,
        "output": str(job.output) if job.output else None,
        "angle_unit": "degrees" if job.degrees else "radians",
        "matrix": m.tolist(),
        "regions": region_rows(job, [("before", xyz), ("after", after)]),
    }
    return Correction(m, xyz, after, report)


def write_output(correction, path, bit_depth=16, workers=None):
    save_image(from_xyz(correction.after, workers=workers), path, bit_depth=bit_depth)


def _same_benchmarks(a, b):
    if a.keys() != b.keys():
        return False
    return all(np.array_equal(a[k], b[k]) for k in a)


def correct_pair(job1, job2, workers=None, images=(None, None)):
    """Correct two images independently against one shared benchmark set.

    Adds cross-image differences between the corrected means of regions that
    share a name (the targets at minimum).
    """
    if not _same_benchmarks(job1.benchmarks, job2.benchmarks):
        raise ConfigError("the two jobs must declare identical benchmark colors")
    if job1.method is not job2.method:
        raise ConfigError("the two jobs must use the same method")
    c1 = correct(job1, workers=workers, image=images[0])
    c2 = correct(job2, workers=workers, image=images[1])
    names2 = {s.name: s for s in job2.regions}
    cross = []
    for spec in job1.regions:
        other = names2.get(spec.name)
        if other is None:
            continue
        m1 = np.array(region_mean(c1.after, spec.region))
        m2 = np.array(region_mean(c2.after, other.region))
        try:
            ang = reproduction_angular_error(m2, m1)
        except DomainError:
            ang = None
        hue = ciede2000_delta_h(xyz_to_lab(m2, job1.lab_white), xyz_to_lab(m1, job1.lab_white))
        cross.append({"name": spec.name, "mean_1": m1.tolist(), "mean_2": m2.tolist(),
                      "angular_error": _angle(ang, job1.degrees), "hue_difference": float(hue)})
    report = {
        "version": REPORT_VERSION,
        "command": "correct-pair",
        "method": job1.method.value,
        "angle_unit": "degrees" if job1.degrees else "radians",
        "images": [c1.report, c2.report],
        "cross_image": cross,
    }
    return c1, c2, report


def evaluate(job, image=None, workers=None):
    """Metrics of every benchmarked region of an (already corrected) image."""
    if image is None:
        if job.input is None:
            raise ConfigError("no image to evaluate")
        image = load_image(job.input)
    xyz = image if image.space is ColorSpace.XYZ else to_xyz(image, workers=workers)
    _check_regions(job, xyz)
    for spec in job.regions:
        job.benchmark_for(spec)
    return {
        "version": REPORT_VERSION,
        "command": "eval",
        "input": str(job.input) if job.input else None,
        "angle_unit": "degrees" if job.degrees else "radians",
        "regions": region_rows(job, [("measured", xyz)]),
    }


def _fmt(v):
    return "     n/a" if v is None else f"{v:8.4f}"


def format_table(report):
    """Aligned text table: one row per region, columns per stage and metric."""
    regions = report["regions"]
    stages = [k for k in (regions[0] if regions else {}) if k not in ("name", "role", "benchmark")]
    unit = "deg" if report.get("angle_unit") == "degrees" else "rad"
    width = max([len("region")] + [len(r["name"]) for r in regions])
    head = f"{'region':<{width}}  {'role':<7}"
    for s in stages:
        head += f"  {s + ' ang(' + unit + ')':>16}  {s + ' dH':>11}"
    lines = [head, "-" * len(head)]
    for r in regions:
        line = f"{r['name']:<{width}}  {r['role']:<7}"
        for s in stages:
            e = r[s]
            line += f"  {_fmt(e.get('angular_error')):>16}  {_fmt(e.get('hue_difference')):>11}"
        lines.append(line)
    return "\n".join(lines)
