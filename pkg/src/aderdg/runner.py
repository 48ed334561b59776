"""Run orchestration: scenario construction, stepping loop, outputs."""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .coupling import CoupledSolver
from .errors import ConfigError
from .mesh import BoundarySpec, CartesianMesh, build_mesh
from .models import Elastic2D, Elastic3D, ElasticParams, Hsgn, HsgnParams, MaterialRegion
from .output import (
    ensure_dir,
    observed_orders,
    write_convergence_csv,
    write_field_csv,
    write_field_vtk,
    write_seismogram_csv,
)
from .runconfig import RunConfig
from .scenarios import (
    LambSource,
    PlaneWaveExact,
    build_soliton,
    gaussian_pwave_init,
    gaussian_w_init,
    lamb_time_factor,
    pswave_init,
    sinusoidal_init,
    step_bathymetry,
)
from .solver import DomainSolver


@dataclass
class ScenarioSetup:
    model: object
    init: Callable
    reference: Optional[Callable] = None
    transform: Optional[Callable] = None
    measured_names: tuple = ()
    sources: list = field(default_factory=list)
    dt_fallback: Optional[float] = None


@dataclass
class RunReport:
    t_end: float
    steps: int
    dts: list
    wall_time: float
    seismograms: dict = field(default_factory=dict)
    fluid_seismograms: dict = field(default_factory=dict)
    errors: Optional[dict] = None
    solver: Optional[DomainSolver] = None
    fluid_solver: Optional[DomainSolver] = None
    solid_solver: Optional[DomainSolver] = None
    traction_max: Optional[tuple] = None


# ------------------------------------------------------------------ helpers


def hsgn_primitives_transform(arr: np.ndarray) -> np.ndarray:
    """Measured variables (h, u, p) from conserved HSGN states."""
    h = arr[..., 0]
    return np.stack([h, arr[..., 1] / h, arr[..., 4] / h], axis=-1)


def elastic2d_table_transform(arr: np.ndarray) -> np.ndarray:
    """Benchmark table ordering (u, v, sxx, syy, sxy)."""
    return arr[..., [3, 4, 0, 1, 2]]


def _opt_float(opts, key, default):
    return float(opts.get(key, default))


def _hsgn_params(opts) -> HsgnParams:
    g = _opt_float(opts, "g", 9.81)
    h0 = _opt_float(opts, "h0", 1.0)
    gamma = _opt_float(opts, "gamma", 1.5)
    if "c" in opts:
        c = float(opts["c"])
    else:
        c = _opt_float(opts, "alpha", 2.0) * math.sqrt(g * h0)
    return HsgnParams(g=g, gamma=gamma, c=c, h0=h0)


def _elastic_params(opts, regions=()) -> ElasticParams:
    rho = _opt_float(opts, "rho", 1.0)
    if "cp" in opts:
        base = ElasticParams.from_speeds(float(opts["cp"]), float(opts["cs"]), rho)
        lam, mu = base.lam, base.mu
    else:
        lam = _opt_float(opts, "lam", 2.0)
        mu = _opt_float(opts, "mu", 1.0)
    return ElasticParams(lam=lam, mu=mu, rho=rho, regions=tuple(regions))


_soliton_cache: dict = {}


def cached_soliton(amplitude: float, params: HsgnParams):
    key = (amplitude, params.g, params.gamma, params.c, params.h0)
    if key not in _soliton_cache:
        _soliton_cache[key] = build_soliton(amplitude, params)
    return _soliton_cache[key]


# ------------------------------------------------------------------ scenarios


def _scn_uniform(model_name, opts, mesh, degree):
    if model_name == "hsgn":
        params = _hsgn_params(opts)
        model = Hsgn(params)
        state = np.zeros(6)
        state[0] = params.h0
    else:
        params = _elastic_params(opts)
        model = Elastic2D(params) if model_name == "elastic2d" else Elastic3D(params)
        state = np.full(model.n_vars, _opt_float(opts, "value", 1.0))

    def init(points):
        out = np.empty(points.shape[:-1] + (model.n_vars,))
        out[...] = state
        return out

    return ScenarioSetup(model=model, init=init, reference=lambda p, t: init(p),
                         measured_names=tuple(model.var_names),
                         dt_fallback=_opt_float(opts, "dt_fallback", 0.0) or None)


def _scn_pswave(model_name, opts, mesh, degree):
    if model_name != "elastic2d":
        raise ConfigError("pswave runs on elastic2d")
    params = _elastic_params(opts)
    alpha = _opt_float(opts, "alpha", 0.1)
    exact = PlaneWaveExact(params, alpha=alpha, n=(1.0, 1.0))
    return ScenarioSetup(
        model=Elastic2D(params),
        init=lambda p: pswave_init(p, params, alpha=alpha, n=(1.0, 1.0)),
        reference=lambda p, t: exact(p, t),
        transform=elastic2d_table_transform,
        measured_names=("u", "v", "sxx", "syy", "sxy"),
    )


def _scn_stiff_inclusion(model_name, opts, mesh, degree):
    if model_name != "elastic2d":
        raise ConfigError("stiff_inclusion runs on elastic2d")
    region = MaterialRegion(
        lo=(_opt_float(opts, "box_x0", -0.5), _opt_float(opts, "box_y0", -0.1)),
        hi=(_opt_float(opts, "box_x1", 0.5), _opt_float(opts, "box_y1", 0.1)),
        lam=_opt_float(opts, "lam_in", 200.0),
        mu=_opt_float(opts, "mu_in", 100.0),
        rho=_opt_float(opts, "rho_in", 1.0),
    )
    params = _elastic_params(opts, regions=(region,))
    sigma_w = _opt_float(opts, "sigma_w", 0.01)
    x0 = (_opt_float(opts, "x0", -0.08), _opt_float(opts, "y0", 0.0))
    return ScenarioSetup(
        model=Elastic2D(params),
        init=lambda p: gaussian_pwave_init(p, params, sigma_w=sigma_w, x0=x0,
                                           n=(1.0, 0.0)),
        transform=elastic2d_table_transform,
        measured_names=("u", "v", "sxx", "syy", "sxy"),
    )


def _scn_lamb(model_name, opts, mesh, degree):
    if model_name != "elastic2d":
        raise ConfigError("lamb runs on elastic2d")
    params = _elastic_params(opts)
    src = LambSource(
        location=(_opt_float(opts, "src_x", 0.0), _opt_float(opts, "src_y", -1.0)),
        a1=_opt_float(opts, "a1", -2000.0),
        f_c=_opt_float(opts, "f_c", 14.5),
        t_delay=_opt_float(opts, "t_delay", 0.08),
        rho_s=_opt_float(opts, "rho_s", 2200.0),
    )
    rho_at = params.material_at(src.location)[2]

    def init(points):
        return np.zeros(points.shape[:-1] + (5,))

    # state carries velocity, so the momentum source is divided by rho
    return ScenarioSetup(
        model=Elastic2D(params),
        init=init,
        transform=elastic2d_table_transform,
        measured_names=("u", "v", "sxx", "syy", "sxy"),
        sources=[(src.location, 4, lambda t: lamb_time_factor(t, src) / rho_at)],
    )


def _scn_gaussian3d(model_name, opts, mesh, degree):
    if model_name != "elastic3d":
        raise ConfigError("gaussian3d runs on elastic3d")
    params = _elastic_params(opts)
    radius = _opt_float(opts, "radius", 500.0)
    amp = _opt_float(opts, "amplitude", -0.1)
    return ScenarioSetup(
        model=Elastic3D(params),
        init=lambda p: gaussian_w_init(p, radius=radius, amplitude=amp),
        measured_names=tuple(Elastic3D(params).var_names),
    )


def _scn_soliton(model_name, opts, mesh, degree):
    if model_name != "hsgn":
        raise ConfigError("soliton runs on hsgn")
    params = _hsgn_params(opts)
    amplitude = _opt_float(opts, "amplitude", 0.2)
    center = _opt_float(opts, "center", 0.0)
    profile = cached_soliton(amplitude, params)
    period = mesh.hi[0] - mesh.lo[0] if mesh.is_periodic(0) else None

    def reference(points, t):
        return profile.state_2d(points, t=t, center=center, period=period)

    return ScenarioSetup(
        model=Hsgn(params),
        init=lambda p: reference(p, 0.0),
        reference=reference,
        transform=hsgn_primitives_transform,
        measured_names=("h", "u", "p"),
    )


def _scn_step_soliton(model_name, opts, mesh, degree):
    if model_name != "hsgn":
        raise ConfigError("step_soliton runs on hsgn")
    params = _hsgn_params(opts)
    amplitude = _opt_float(opts, "amplitude", 0.0365)
    center = _opt_float(opts, "center", -3.0)
    profile = cached_soliton(amplitude, params)

    def init(points):
        out = profile.state_2d(points, t=0.0, center=center)
        zb = step_bathymetry(points[..., 0])
        out[..., 0] -= zb          # soliton rides on the still surface
        out[..., 5] = zb
        return out

    return ScenarioSetup(model=Hsgn(params), init=init,
                         transform=hsgn_primitives_transform,
                         measured_names=("h", "u", "p"))


def _scn_lake_at_rest(model_name, opts, mesh, degree):
    if model_name != "hsgn":
        raise ConfigError("lake_at_rest runs on hsgn")
    params = _hsgn_params(opts)
    eta0 = _opt_float(opts, "eta0", params.h0)
    kind = opts.get("bathymetry", "flat")

    def init(points):
        out = np.zeros(points.shape[:-1] + (6,))
        if kind == "step":
            zb = step_bathymetry(points[..., 0])
        elif kind == "flat":
            zb = np.zeros(points.shape[:-1])
        else:
            raise ConfigError(f"unknown bathymetry {kind!r}")
        out[..., 0] = eta0 - zb
        out[..., 5] = zb
        return out

    return ScenarioSetup(model=Hsgn(params), init=init,
                         reference=lambda p, t: init(p),
                         transform=hsgn_primitives_transform,
                         measured_names=("h", "u", "p"))


def _scn_sinusoidal(model_name, opts, mesh, degree):
    if model_name != "hsgn":
        raise ConfigError("sinusoidal runs on hsgn")
    params = _hsgn_params(opts)
    wave_length = _opt_float(opts, "wave_length", 200.0)
    amplitude = _opt_float(opts, "amplitude", 1e-3)
    return ScenarioSetup(
        model=Hsgn(params),
        init=lambda p: sinusoidal_init(p, params, wave_length=wave_length,
                                       amplitude=amplitude),
        transform=hsgn_primitives_transform,
        measured_names=("h", "u", "p"),
    )


SCENARIOS = {
    "uniform": _scn_uniform,
    "pswave": _scn_pswave,
    "stiff_inclusion": _scn_stiff_inclusion,
    "lamb": _scn_lamb,
    "gaussian3d": _scn_gaussian3d,
    "soliton": _scn_soliton,
    "step_soliton": _scn_step_soliton,
    "lake_at_rest": _scn_lake_at_rest,
    "sinusoidal": _scn_sinusoidal,
}


def build_scenario(model_name: str, name: str, opts: dict,
                   mesh: CartesianMesh, degree: int) -> ScenarioSetup:
    if name not in SCENARIOS:
        raise ConfigError(f"unknown scenario {name!r}")
    return SCENARIOS[name](model_name, opts, mesh, degree)


def make_mesh(mc) -> CartesianMesh:
    bmap = {}
    for a, (lo_k, hi_k) in enumerate(mc.boundaries):
        bmap[a] = (BoundarySpec(lo_k), BoundarySpec(hi_k))
    return build_mesh(mc.extents, mc.counts, bmap)


# ------------------------------------------------------------------ stepping


class _Recorder:
    def __init__(self, solver, receivers: dict, stride: int):
        self.solver = solver
        self.stride = max(1, stride)
        self.receivers = {}
        for name, coord in receivers.items():
            solver.mesh.to_reference(coord)  # validates: OutsideDomain
            self.receivers[name] = (np.asarray(coord, dtype=float), [], [])

    def sample(self, t: float, step_index: int, force: bool = False):
        if not force and step_index % self.stride != 0:
            return
        for _name, (coord, times, vals) in self.receivers.items():
            if times and times[-1] == t:
                continue
            times.append(t)
            vals.append(self.solver.evaluate_at(coord))

    def result(self) -> dict:
        return {name: (coord, np.array(times), np.array(vals))
                for name, (coord, times, vals) in self.receivers.items()}


def _load_dt_schedule(path: str) -> list:
    with open(path) as f:
        return [float(line) for line in f if line.strip()]


def _write_dts(path: str, dts) -> None:
    with open(path, "w") as f:
        for dt in dts:
            f.write(repr(float(dt)) + "\n")


def run(config: RunConfig) -> RunReport:
    """Advance the configured problem to t_end and write all outputs."""
    if config.threads:
        import numba

        numba.set_num_threads(config.threads)
    ensure_dir(config.output_dir)
    t0 = time.time()
    if config.model == "coupled":
        report = _run_coupled(config)
    else:
        report = _run_single(config)
    report.wall_time = time.time() - t0
    return report


def _field_dump(solver, names, outdir, tag, fmt):
    if fmt in ("csv", "both"):
        write_field_csv(solver, os.path.join(outdir, f"field_{tag}.csv"), names)
    if fmt in ("vtk", "both"):
        write_field_vtk(solver, os.path.join(outdir, f"field_{tag}.vtk"), names)


def _run_single(config: RunConfig) -> RunReport:
    dom = config.domain
    mesh = make_mesh(dom.mesh)
    setup = build_scenario(config.model, config.scenario, dom.options, mesh,
                           dom.degree)
    solver = DomainSolver(mesh, setup.model, dom.degree)
    solver.set_initial(setup.init)
    for loc, var, fn in setup.sources:
        solver.add_point_source(loc, var, fn)
    rec = _Recorder(solver, config.receivers, config.seismogram_stride)
    schedule = _load_dt_schedule(config.dt_schedule) if config.dt_schedule else None
    stops = sorted(set(ft for ft in config.field_times if 0 < ft < config.t_end))
    t = 0.0
    k = 0
    dts = []
    rec.sample(t, 0, force=True)
    pending = list(stops)
    t_end = config.t_end
    while t < t_end:
        if schedule is not None:
            if k >= len(schedule):
                break  # replayed every recorded step; avoid float drift
            dt = schedule[k]
        else:
            dt = solver.compute_dt(dom.cfl, setup.dt_fallback)
        stop = pending[0] if pending else t_end
        landed = t + dt >= stop and schedule is None
        if landed:
            dt = stop - t
        solver.step(t, dt)
        k += 1
        t = stop if landed else t + dt
        dts.append(dt)
        rec.sample(t, k)
        if landed and pending and stop == pending[0]:
            _field_dump(solver, setup.model.var_names, config.output_dir,
                        f"t{stop:g}", config.field_format)
            pending.pop(0)
    rec.sample(t, k, force=True)
    _field_dump(solver, setup.model.var_names, config.output_dir, "final",
                config.field_format)
    np.save(os.path.join(config.output_dir, "dofs_final.npy"), solver.u)
    _write_dts(os.path.join(config.output_dir, "dts.txt"), dts)
    seis = rec.result()
    for name, (coord, times, vals) in seis.items():
        write_seismogram_csv(
            os.path.join(config.output_dir, f"seismo_{name}.csv"),
            times, vals, setup.model.var_names)
    errors = None
    if setup.reference is not None:
        err = solver.l2_error(lambda p: setup.reference(p, t_end),
                              transform=setup.transform)
        errors = dict(zip(setup.measured_names, err))
        with open(os.path.join(config.output_dir, "errors.csv"), "w") as f:
            f.write(",".join(setup.measured_names) + "\n")
            f.write(",".join(repr(float(e)) for e in err) + "\n")
    return RunReport(t_end=t_end, steps=k, dts=dts, wall_time=0.0,
                     seismograms=seis, errors=errors, solver=solver)


def _run_coupled(config: RunConfig) -> RunReport:
    fl = config.fluid
    so = config.solid
    fmesh = make_mesh(fl.mesh)
    fluid_scn = {"coupled_soliton": "soliton",
                 "coupled_sinusoidal": "sinusoidal"}.get(config.scenario)
    if fluid_scn is None:
        raise ConfigError(f"unknown coupled scenario {config.scenario!r}")
    fsetup = build_scenario("hsgn", fluid_scn, fl.options, fmesh, fl.degree)
    fluid = DomainSolver(fmesh, fsetup.model, fl.degree)
    fluid.set_initial(fsetup.init)
    smesh = make_mesh(so.mesh)
    solid_model = Elastic3D(_elastic_params(so.options))
    solid = DomainSolver(smesh, solid_model, so.degree)
    solid.set_initial(lambda p: np.zeros(p.shape[:-1] + (9,)))
    rho_w = float(config.coupling.get("rho_w", 1000.0))
    nonhydro = str(config.coupling.get("include_nonhydrostatic", "false")
                   ).lower() in ("1", "true", "yes")
    coupled = CoupledSolver(fluid, solid, rho_w=rho_w,
                            include_nonhydrostatic=nonhydro)
    rec_s = _Recorder(solid, config.receivers, config.seismogram_stride)
    rec_f = _Recorder(fluid, config.fluid_receivers, config.seismogram_stride)
    traction_stride = int(config.coupling.get("traction_stride", 200))
    t = 0.0
    k = 0
    dts = []
    rec_s.sample(t, 0, force=True)
    rec_f.sample(t, 0, force=True)
    t_end = config.t_end
    tr_max = (0.0, 0.0)
    while t < t_end:
        dt = coupled.compute_dt(fl.cfl, so.cfl)
        landed = t + dt >= t_end
        if landed:
            dt = t_end - t
        coupled.step(t, dt)
        k += 1
        t = t_end if landed else t + dt
        dts.append(dt)
        rec_s.sample(t, k)
        rec_f.sample(t, k)
        if k % traction_stride == 0 or landed:
            rn, rs = coupled.traction_residuals()
            tr_max = (max(tr_max[0], rn), max(tr_max[1], rs))
    rec_s.sample(t, k, force=True)
    rec_f.sample(t, k, force=True)
    outdir = config.output_dir
    np.save(os.path.join(outdir, "fluid_dofs_final.npy"), fluid.u)
    np.save(os.path.join(outdir, "solid_dofs_final.npy"), solid.u)
    _write_dts(os.path.join(outdir, "dts.txt"), dts)
    _field_dump(fluid, fsetup.model.var_names, outdir, "fluid_final",
                config.field_format)
    _field_dump(solid, solid_model.var_names, outdir, "solid_final",
                config.field_format)
    seis_s = rec_s.result()
    for name, (coord, times, vals) in seis_s.items():
        write_seismogram_csv(os.path.join(outdir, f"seismo_{name}.csv"),
                             times, vals, solid_model.var_names)
    seis_f = rec_f.result()
    for name, (coord, times, vals) in seis_f.items():
        write_seismogram_csv(os.path.join(outdir, f"fluid_seismo_{name}.csv"),
                             times, vals, fsetup.model.var_names)
    with open(os.path.join(outdir, "traction.txt"), "w") as f:
        f.write(f"max_normal_residual,{tr_max[0]!r}\n")
        f.write(f"max_shear,{tr_max[1]!r}\n")
    return RunReport(t_end=t_end, steps=k, dts=dts, wall_time=0.0,
                     seismograms=seis_s, fluid_seismograms=seis_f,
                     fluid_solver=fluid, solid_solver=solid,
                     traction_max=tr_max)


# ------------------------------------------------------------------ tables


def convergence_study(config_path: str, levels, output_dir=None):
    """Run the configured scenario at several mesh levels and tabulate orders.

    The mesh counts in the template may contain the placeholder {n}, which
    is substituted by each level; otherwise every axis count is scaled
    proportionally from the first level.
    """
    from .runconfig import load_config

    base_text = open(config_path).read()
    errors = []
    names = None
    degree = None
    for lv in levels:
        text = base_text.replace("{n}", str(lv))
        tmp = config_path + f".lvl{lv}"
        with open(tmp, "w") as f:
            f.write(text)
        try:
            cfg = load_config(tmp)
            if output_dir:
                cfg.output_dir = os.path.join(output_dir, f"n{lv}")
            else:
                cfg.output_dir = os.path.join(cfg.output_dir, f"n{lv}")
            report = run(cfg)
        finally:
            os.remove(tmp)
        if report.errors is None:
            raise ConfigError("convergence study needs a scenario with a reference")
        if names is None:
            names = list(report.errors.keys())
            degree = cfg.domain.degree
        errors.append([report.errors[v] for v in names])
    errors = np.asarray(errors)
    orders = observed_orders(errors, levels)
    return degree, list(levels), errors, orders, names


def write_convergence_outputs(outdir, degree, levels, errors, orders, names):
    from .output import format_convergence_text

    ensure_dir(outdir)
    write_convergence_csv(os.path.join(outdir, "convergence.csv"),
                          degree, levels, errors, orders, names)
    text = format_convergence_text(degree, levels, errors, orders, names)
    with open(os.path.join(outdir, "convergence.txt"), "w") as f:
        f.write(text)
    return text
