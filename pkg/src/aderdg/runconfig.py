"""Flat INI-style run configuration.

One section per concern; coupled runs carry separate [fluid]/[solid] blocks
with their own meshes.  Extents are written lo:hi per axis, boundaries as a
kind per axis or lo-kind:hi-kind.  Every benchmark ships as a checked-in
config under configs/.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from typing import Optional

from .errors import ConfigError

MODELS = ("hsgn", "elastic2d", "elastic3d", "coupled")
BOUNDARY_KINDS = ("periodic", "free_surface", "coupled")


@dataclass
class MeshConfig:
    extents: list
    counts: list
    boundaries: list  # per axis: (lo_kind, hi_kind)


@dataclass
class DomainConfig:
    degree: int
    cfl: float
    mesh: MeshConfig
    options: dict = field(default_factory=dict)


@dataclass
class RunConfig:
    model: str
    t_end: float
    output_dir: str
    scenario: str
    domain: Optional[DomainConfig] = None        # single-model runs
    fluid: Optional[DomainConfig] = None         # coupled runs
    solid: Optional[DomainConfig] = None
    coupling: dict = field(default_factory=dict)
    receivers: dict = field(default_factory=dict)
    fluid_receivers: dict = field(default_factory=dict)
    seismogram_stride: int = 1
    field_times: list = field(default_factory=list)
    field_format: str = "csv"
    threads: Optional[int] = None
    dt_schedule: Optional[str] = None


def _floats(text: str) -> list:
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_mesh(sec) -> MeshConfig:
    try:
        extents = []
        for tok in sec["extents"].split(","):
            lo, hi = tok.split(":")
            extents.append((float(lo), float(hi)))
        counts = [int(tok) for tok in sec["counts"].split(",")]
        braw = sec.get("boundaries", "periodic")
        btoks = [t.strip() for t in braw.split(",")]
        if len(btoks) == 1:
            btoks = btoks * len(counts)
        bounds = []
        for tok in btoks:
            if ":" in tok:
                lo_k, hi_k = tok.split(":")
            else:
                lo_k = hi_k = tok
            for k in (lo_k, hi_k):
                if k not in BOUNDARY_KINDS:
                    raise ConfigError(f"unknown boundary kind {k!r}")
            bounds.append((lo_k, hi_k))
        if not (len(extents) == len(counts) == len(bounds)):
            raise ConfigError("mesh extents/counts/boundaries lengths differ")
        return MeshConfig(extents=extents, counts=counts, boundaries=bounds)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad mesh section: {exc}") from exc


def _parse_domain(cp, name, mesh_name) -> DomainConfig:
    if name not in cp or mesh_name not in cp:
        raise ConfigError(f"missing [{name}] or [{mesh_name}] section")
    sec = cp[name]
    try:
        degree = sec.getint("degree")
        cfl = sec.getfloat("cfl")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"[{name}]: {exc}") from exc
    if degree is None or cfl is None:
        raise ConfigError(f"[{name}] needs degree and cfl")
    if not 0 <= degree <= 7:
        raise ConfigError(f"degree {degree} outside [0, 7]")
    opts = {k: v for k, v in sec.items() if k not in ("degree", "cfl")}
    mesh = _parse_mesh(cp[mesh_name])
    d = len(mesh.counts)
    if not 0 < cfl < 1.0 / d:
        raise ConfigError(f"[{name}]: cfl {cfl} outside (0, 1/{d})")
    return DomainConfig(degree=degree, cfl=cfl, mesh=mesh, options=opts)


def _parse_receivers(cp, section) -> dict:
    out = {}
    if section in cp:
        for key, val in cp[section].items():
            out[key] = _floats(val)
    return out


def load_config(path: str) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "run" not in cp:
        raise ConfigError("missing [run] section")
    run = cp["run"]
    model = run.get("model", "").strip()
    if model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {model!r}")
    try:
        t_end = run.getfloat("t_end")
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad t_end: {exc}") from exc
    if t_end is None or t_end < 0:
        raise ConfigError("t_end must be a non-negative number")
    cfg = RunConfig(
        model=model,
        t_end=t_end,
        output_dir=run.get("output_dir", "out"),
        scenario=run.get("scenario", ""),
        seismogram_stride=run.getint("seismogram_stride", fallback=1),
        field_times=_floats(run.get("field_times", "")),
        field_format=run.get("field_format", "csv"),
        threads=run.getint("threads", fallback=None),
        dt_schedule=run.get("dt_schedule", fallback=None),
    )
    if cfg.field_format not in ("csv", "vtk", "both"):
        raise ConfigError(f"field_format {cfg.field_format!r} unknown")
    cfg.receivers = _parse_receivers(cp, "receivers")
    cfg.fluid_receivers = _parse_receivers(cp, "fluid_receivers")
    if model == "coupled":
        cfg.fluid = _parse_domain(cp, "fluid", "fluid_mesh")
        cfg.solid = _parse_domain(cp, "solid", "solid_mesh")
        cfg.coupling = dict(cp["coupling"]) if "coupling" in cp else {}
        cfg.scenario = cfg.scenario or "coupled_soliton"
    else:
        if "scenario" not in cp:
            raise ConfigError("missing [scenario] section")
        sec = cp["scenario"]
        cfg.scenario = sec.get("name", cfg.scenario)
        if not cfg.scenario:
            raise ConfigError("scenario name missing")
        opts = {k: v for k, v in sec.items() if k != "name"}
        dom = _parse_domain(cp, "scheme", "mesh")
        dom.options.update(opts)
        cfg.domain = dom
    return cfg
