"""Job and scene description files.

Both are JSON or YAML documents.  A job names an input image, a correction
method, pixel regions with roles, and benchmark colors::

    {
      "input": "scene.png",
      "output": "corrected.png",
      "method": "mcb",
      "regions": [
        {"name": "pink",   "role": "target1", "x": 10, "y": 12, "w": 20, "h": 20},
        {"name": "yellow", "role": "target2", "x": 40, "y": 12, "w": 20, "h": 20},
        {"name": "blue",   "role": "target3", "x": 70, "y": 12, "w": 20, "h": 20},
        {"name": "white",  "role": "white",   "x": 100, "y": 12, "w": 20, "h": 20},
        {"name": "pink_far", "role": "eval", "benchmark": "pink",
         "x": 10, "y": 60, "w": 20, "h": 20}
      ],
      "benchmarks": {
        "pink": [0.7482, 0.6855, 0.9442],
        "yellow": [0.6105, 0.7925, 0.1208],
        "blue": [0.5832, 0.6004, 0.9365],
        "white": "D65"
      },
      "options": {"degrees": false, "bit_depth": 16, "cond_threshold": 1e8}
    }

A region is scored against the benchmark named by its ``benchmark`` key,
falling back to its own name.  The white region falls back to D65.

A scene reuses the region fields and adds a ground-truth ``color`` per patch.
"""

import enum
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import jsonschema
import yaml

from .balance import DEFAULT_COND_THRESHOLD
from .colorspace import ILLUMINANTS, AdaptationModel, ColorXYZ
from .errors import ConfigError, DomainError
from .image import Region

TARGET_ROLES = ("target1", "target2", "target3")
ROLES = TARGET_ROLES + ("white", "eval")

_TRIPLE = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_RECT = {
    "name": {"type": "string", "minLength": 1},
    "x": {"type": "integer", "minimum": 0},
    "y": {"type": "integer", "minimum": 0},
    "w": {"type": "integer", "minimum": 1},
    "h": {"type": "integer", "minimum": 1},
}

JOB_SCHEMA = {
    "type": "object",
    "required": ["regions", "benchmarks"],
    "additionalProperties": False,
    "properties": {
        "input": {"type": "string"},
        "output": {"type": "string"},
        "method": {"enum": ["wb-xyz", "wb-bradford", "wb-vonkries", "mcb"]},
        "regions": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "role", "x", "y", "w", "h"],
                "additionalProperties": False,
                "properties": dict(_RECT, role={"enum": list(ROLES)},
                                   benchmark={"type": "string"}),
            },
        },
        "benchmarks": {
            "type": "object",
            "additionalProperties": {"oneOf": [_TRIPLE, {"enum": sorted(ILLUMINANTS)}]},
        },
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "degrees": {"type": "boolean"},
                "bit_depth": {"enum": [8, 16]},
                "cond_threshold": {"type": "number", "exclusiveMinimum": 1},
                "lab_white": {"oneOf": [_TRIPLE, {"enum": sorted(ILLUMINANTS)}]},
            },
        },
    },
}

SCENE_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "canvas": {
            "type": "object",
            "required": ["width", "height"],
            "additionalProperties": False,
            "properties": {"width": {"type": "integer", "minimum": 1},
                           "height": {"type": "integer", "minimum": 1}},
        },
        "background": _TRIPLE,
        "chart": {
            "type": "object",
            "additionalProperties": False,
            "properties": {k: {"type": "integer", "minimum": 0 if k != "copies" else 1}
                           for k in ("patch_size", "gap", "margin", "copies")},
        },
        "patches": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "x", "y", "w", "h", "color"],
                "additionalProperties": False,
                "properties": dict(_RECT, color=_TRIPLE),
            },
        },
    },
    "oneOf": [{"required": ["chart"]}, {"required": ["canvas", "patches"]}],
}


class Method(enum.Enum):
    WB_XYZ = "wb-xyz"
    WB_BRADFORD = "wb-bradford"
    WB_VONKRIES = "wb-vonkries"
    MCB = "mcb"

    @property
    def adaptation_model(self):
        return {
            Method.WB_XYZ: AdaptationModel.XYZ_SCALING,
            Method.WB_BRADFORD: AdaptationModel.BRADFORD,
            Method.WB_VONKRIES: AdaptationModel.VON_KRIES,
        }.get(self)


@dataclass(frozen=True)
class RegionSpec:
    region: Region
    role: str
    benchmark: Optional[str] = None

    @property
    def name(self):
        return self.region.label


@dataclass
class JobConfig:
    regions: List[RegionSpec]
    benchmarks: Dict[str, ColorXYZ]
    method: Method = Method.MCB
    input: Optional[Path] = None
    output: Optional[Path] = None
    degrees: bool = False
    bit_depth: int = 16
    cond_threshold: float = DEFAULT_COND_THRESHOLD
    lab_white: ColorXYZ = ILLUMINANTS["D65"]
    source: Optional[Path] = field(default=None, compare=False)

    def by_role(self, role):
        return [r for r in self.regions if r.role == role]

    @property
    def targets(self):
        out = []
        for role in TARGET_ROLES:
            found = self.by_role(role)
            if len(found) != 1:
                raise ConfigError(f"multi-color balance needs exactly one {role} region, "
                                  f"found {len(found)}")
            out.append(found[0])
        return out

    @property
    def white(self):
        found = self.by_role("white")
        if len(found) != 1:
            raise ConfigError(f"white balance needs exactly one white region, found {len(found)}")
        return found[0]

    def benchmark_for(self, spec):
        """Benchmark color for a region, or ``None`` when it has none."""
        key = spec.benchmark or spec.name
        if key in self.benchmarks:
            return self.benchmarks[key]
        if spec.benchmark is not None:
            raise ConfigError(f"region {spec.name!r} refers to unknown benchmark {key!r}")
        if spec.role == "white":
            return ILLUMINANTS["D65"]
        return None

    def validate(self):
        names = [r.name for r in self.regions]
        dupes = sorted({n for n in names if names.count(n) > 1})
        if dupes:
            raise ConfigError(f"duplicate region names: {', '.join(dupes)}")
        for spec in self.regions:
            self.benchmark_for(spec)
        if self.method is Method.MCB:
            for spec in self.targets:
                if self.benchmark_for(spec) is None:
                    raise ConfigError(f"target region {spec.name!r} has no benchmark color")
        else:
            self.white
        return self


def _color(value, where):
    if isinstance(value, str):
        try:
            return ILLUMINANTS[value]
        except KeyError:
            raise ConfigError(f"{where}: unknown illuminant {value!r}") from None
    return ColorXYZ(*(float(v) for v in value))


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads ``1e8`` and ``1.0e8`` as floats (YAML 1.2)."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^[-+]?(?:[0-9][0-9_]*\.[0-9_]*(?:[eE][-+]?[0-9]+)?
                  |[0-9][0-9_]*[eE][-+]?[0-9]+
                  |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
                  |[-+]?\.(?:inf|Inf|INF)
                  |\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."),
)


def read_document(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".json":
            return json.loads(text)
        return yaml.load(text, Loader=_Loader)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"{path}: not valid JSON/YAML: {exc}") from exc


def _check(doc, schema, where):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"{where}: {loc}: {exc.message}") from None


def parse_job(doc, base_dir=None, source=None):
    where = str(source) if source else "job"
    _check(doc, JOB_SCHEMA, where)
    base = Path(base_dir) if base_dir else Path(".")
    try:
        regions = [
            RegionSpec(Region(r["x"], r["y"], r["w"], r["h"], r["name"]), r["role"],
                       r.get("benchmark"))
            for r in doc["regions"]
        ]
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    opts = doc.get("options", {})
    job = JobConfig(
        regions=regions,
        benchmarks={k: _color(v, where) for k, v in doc["benchmarks"].items()},
        method=Method(doc.get("method", "mcb")),
        input=base / doc["input"] if "input" in doc else None,
        output=base / doc["output"] if "output" in doc else None,
        degrees=opts.get("degrees", False),
        bit_depth=opts.get("bit_depth", 16),
        cond_threshold=float(opts.get("cond_threshold", DEFAULT_COND_THRESHOLD)),
        lab_white=_color(opts.get("lab_white", "D65"), where),
        source=Path(source) if source else None,
    )
    return job


def load_job(path):
    path = Path(path)
    return parse_job(read_document(path), base_dir=path.parent, source=path)


def job_document(job):
    """Inverse of :func:`parse_job` (paths are written as given)."""
    doc = {}
    if job.input is not None:
        doc["input"] = str(job.input)
    if job.output is not None:
        doc["output"] = str(job.output)
    doc["method"] = job.method.value
    doc["regions"] = []
    for spec in job.regions:
        r = spec.region
        item = {"name": r.label, "role": spec.role, "x": r.x0, "y": r.y0, "w": r.w, "h": r.h}
        if spec.benchmark is not None:
            item["benchmark"] = spec.benchmark
        doc["regions"].append(item)
    doc["benchmarks"] = {k: list(v) for k, v in job.benchmarks.items()}
    doc["options"] = {"degrees": job.degrees, "bit_depth": job.bit_depth,
                      "cond_threshold": job.cond_threshold, "lab_white": list(job.lab_white)}
    return doc


def parse_scene(doc, source=None):
    from .synthcam import DEFAULT_BACKGROUND, Patch, PatchScene, chart_scene

    where = str(source) if source else "scene"
    _check(doc, SCENE_SCHEMA, where)
    background = ColorXYZ(*doc.get("background", DEFAULT_BACKGROUND))
    if "chart" in doc:
        return chart_scene(background=background, **doc["chart"])
    try:
        patches = [Patch(Region(p["x"], p["y"], p["w"], p["h"], p["name"]), ColorXYZ(*p["color"]))
                   for p in doc["patches"]]
    except DomainError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return PatchScene(doc["canvas"]["width"], doc["canvas"]["height"], patches, background)


def load_scene(path):
    return parse_scene(read_document(path), source=path)


def scene_document(scene):
    return {
        "canvas": {"width": scene.width, "height": scene.height},
        "background": list(scene.background),
        "patches": [
            {"name": p.region.label, "x": p.region.x0, "y": p.region.y0,
             "w": p.region.w, "h": p.region.h, "color": list(p.color)}
            for p in scene.patches
        ],
    }
