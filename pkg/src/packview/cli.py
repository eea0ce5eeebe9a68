"""
Scenario runner: read a declarative config, evaluate the closed forms,
optionally cross-check them with the numerical propagators, and write CSV
series plus an INI summary.

Config format (INI, ``#`` or ``;`` comments)::

    [scenario]
    kind = two_bec            ; two_bec | multi_bec | mirror | well | corner | wedge
    outputs = density, fringes, timescales
    times = 0, 0.5, 1

    [params]
    beta = 0.1
    d = 2
    phi_degrees = 0

    [grid]
    x_min = -40
    x_max = 40
    n_points = 8192

See the README for every key and its default. The summary written by
``run`` starts with the effective config (defaults filled in) and can be
fed back to ``validate`` or ``run`` unchanged; its ``[results]`` section is
ignored on input.

Exit codes: 0 success, 1 config error, 2 runtime or numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import math
import re
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import analysis, analytic, oracle, spectral
from .core import PacketParams, PhysConsts, SpatialGrid, WaveField, WaveField2D, norm
from .errors import ConfigError, NoFringes, PackviewError, UnstableRun

__all__ = ["ScenarioConfig", "validate_config", "run_scenario", "format_config", "main"]

SCENARIOS = ("two_bec", "multi_bec", "mirror", "well", "corner", "wedge")
OUTPUTS = ("density", "momentum_density", "fringes", "autocorrelation", "timescales",
           "oracle_compare")
ALLOWED_OUTPUTS = {
    "two_bec": {"density", "momentum_density", "fringes", "timescales", "oracle_compare"},
    "multi_bec": {"density", "momentum_density", "fringes", "oracle_compare"},
    "mirror": {"density", "timescales", "oracle_compare"},
    "well": {"density", "autocorrelation", "timescales", "oracle_compare"},
    "corner": {"density", "oracle_compare"},
    "wedge": {"density", "oracle_compare"},
}
TWO_D = ("corner", "wedge")

# section -> known keys
KEYS = {
    "scenario": ("kind", "outputs", "times"),
    "params": ("beta", "d", "phi_degrees", "hbar", "mass", "centers", "phases_degrees",
               "x0", "y0", "angle_degrees"),
    "grid": ("x_min", "x_max", "n_points", "y_min", "y_max", "n_points_y"),
    "oracle": ("dt",),
    "autocorrelation": ("t_max_revivals", "samples", "threshold"),
}
RESULT_PREFIX = "results"

# default oracle step as a fraction of the simulated time span
DT_FRACTION = {"1d-free": 1e-4, "1d-dirichlet": 5e-5, "2d": 4e-3}

FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Fully validated run description with every default filled in.

    Angles are kept in the degrees the user wrote so the echoed config
    reproduces them exactly; ``params.phi`` holds the radian value.
    """

    scenario: str
    params: PacketParams
    times: tuple
    grid: SpatialGrid
    outputs: frozenset
    phi_degrees: float = 0.0
    centers: tuple = ()
    phases_degrees: tuple = ()
    x0: float | None = None
    y0: float | None = None
    angle_degrees: float | None = None
    grid_y: SpatialGrid | None = None
    oracle_dt: float | None = None
    t_max_revivals: float = 1.0
    samples: int = 2001
    threshold: float = 0.99

    @property
    def is_2d(self) -> bool:
        return self.scenario in TWO_D

    @property
    def oracle(self) -> oracle.PropagatorConfig | None:
        """Time stepping over the whole requested span, or None without oracle_compare."""
        if "oracle_compare" not in self.outputs:
            return None
        span = self.times[-1] - self.times[0]
        return oracle.PropagatorConfig.spanning(
            span, self.oracle_dt, boundary=_boundary(self.scenario), consts=self.params.consts
        )


def _boundary(scenario):
    if scenario in ("two_bec", "multi_bec"):
        return "free"
    if scenario in TWO_D:
        return "dirichlet-mask-2d"
    return "dirichlet"


# --------------------------------------------------------------- validation


def _key_lines(text):
    """Map (section, key) and section names to 1-based line numbers."""
    lines = {}
    section = None
    for no, line in enumerate(text.splitlines(), start=1):
        m = re.match(r"\s*\[([^\]]+)\]", line)
        if m:
            section = m.group(1).strip()
            lines.setdefault((section, None), no)
            continue
        m = re.match(r"\s*([^=:#;\s][^=:]*?)\s*[=:]", line)
        if m and section is not None:
            lines.setdefault((section, m.group(1).strip().lower()), no)
    return lines


class _Collector:
    def __init__(self, parser, lines):
        self.parser = parser
        self.lines = lines
        self.errors = []

    def error(self, section, key, message):
        no = self.lines.get((section, key)) or self.lines.get((section, None))
        where = f"line {no}" if no else "config"
        self.errors.append(f"{where}: [{section}] {key + ': ' if key else ''}{message}")

    def has(self, section, key):
        return self.parser.has_option(section, key)

    def raw(self, section, key):
        return self.parser.get(section, key).strip()

    def get(self, section, key, conv, default=None, required=False, check=None, rule=""):
        if not self.has(section, key):
            if required:
                self.error(section, key, "required key is missing")
            return default
        text = self.raw(section, key)
        try:
            value = conv(text)
        except (TypeError, ValueError):
            self.error(section, key, f"cannot parse {text!r} as {conv.__name__}")
            return default
        if check is not None and not check(value):
            self.error(section, key, f"{text!r} violates: {rule}")
            return default
        return value


def _float(text):
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(text)
    return value


def _int(text):
    return int(text)


def _floats(text):
    if not text:
        return ()
    return tuple(_float(v) for v in text.split(","))


_floats.__name__ = "comma-separated floats"


def _names(text):
    return tuple(v.strip() for v in text.split(",") if v.strip())


_names.__name__ = "comma-separated names"


def _grid(c, names, defaults):
    lo_key, hi_key, n_key = names
    lo = c.get("grid", lo_key, _float, defaults[0])
    hi = c.get("grid", hi_key, _float, defaults[1])
    n = c.get("grid", n_key, _int, defaults[2])
    try:
        return SpatialGrid(lo, hi, n)
    except PackviewError as exc:
        c.error("grid", None, str(exc))
        return None


def _default_grid(kind, d):
    if kind == "well":
        return (-d, 0.0, 4096) if d else (-1.0, 0.0, 4096)
    if kind == "mirror":
        return (-40.0, 0.0, 8192)
    if kind in TWO_D:
        return (0.0, 20.0, 512)
    return (-40.0, 40.0, 8192)


def validate_config(text: str) -> ScenarioConfig:
    """
    Parse and check a config, returning the effective :class:`ScenarioConfig`.

    All problems are collected before raising :class:`ConfigError`, whose
    ``errors`` list holds one line-numbered message per problem. Text that
    is not valid INI produces a single syntax error.
    """
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#", ";"), strict=True
    )
    try:
        parser.read_string(text, source="config")
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        msg = str(exc).splitlines()[0]
        raise ConfigError([f"line {lineno}: syntax error: {msg}" if lineno
                           else f"config: syntax error: {msg}"]) from None

    c = _Collector(parser, _key_lines(text))

    for section in parser.sections():
        if section.startswith(RESULT_PREFIX):
            continue
        if section not in KEYS:
            c.error(section, None, f"unknown section; expected one of {sorted(KEYS)}")
            continue
        for key in parser.options(section):
            if key not in KEYS[section]:
                c.error(section, key, f"unknown key; valid keys are {', '.join(KEYS[section])}")

    for section in ("scenario", "params"):
        if not parser.has_section(section):
            need = "kind, outputs, times" if section == "scenario" else "beta"
            c.errors.append(f"config: missing section [{section}] (required keys: {need})")
            parser.add_section(section)
    for section in ("grid", "oracle", "autocorrelation"):
        if not parser.has_section(section):
            parser.add_section(section)

    kind = c.get("scenario", "kind", str, required=True, check=lambda k: k in SCENARIOS,
                 rule=f"kind must be one of {', '.join(SCENARIOS)}")
    outputs = c.get("scenario", "outputs", _names, (), required=True)
    bad = [o for o in outputs if o not in OUTPUTS]
    if bad:
        c.error("scenario", "outputs", f"unknown output(s) {', '.join(bad)}; "
                f"valid outputs are {', '.join(OUTPUTS)}")
    if not outputs and c.has("scenario", "outputs"):
        c.error("scenario", "outputs", "at least one output is required")
    outputs = frozenset(o for o in outputs if o in OUTPUTS)
    if kind is not None:
        for o in sorted(outputs - ALLOWED_OUTPUTS[kind]):
            c.error("scenario", "outputs", f"output {o!r} is not available for {kind}; "
                    f"choose from {', '.join(sorted(ALLOWED_OUTPUTS[kind]))}")
    times = c.get("scenario", "times", _floats, (), required=True)
    if c.has("scenario", "times"):
        if not times:
            c.error("scenario", "times", "at least one time is required")
        elif any(t < 0 for t in times):
            c.error("scenario", "times", "times must be >= 0")
        elif any(b <= a for a, b in zip(times, times[1:])):
            c.error("scenario", "times", "times must be strictly ascending")

    positive = dict(check=lambda v: v > 0, rule="must be > 0")
    beta = c.get("params", "beta", _float, required=True, **positive)
    hbar = c.get("params", "hbar", _float, 1.0, **positive)
    mass = c.get("params", "mass", _float, 1.0, **positive)

    def allowed_here(key, kinds):
        if kind is not None and c.has("params", key) and kind not in kinds:
            c.error("params", key, f"not used by scenario {kind}")

    allowed_here("d", ("two_bec", "mirror", "well"))
    allowed_here("phi_degrees", ("two_bec",))
    allowed_here("centers", ("multi_bec",))
    allowed_here("phases_degrees", ("multi_bec",))
    allowed_here("x0", ("mirror", "well", "corner", "wedge"))
    allowed_here("y0", ("corner", "wedge"))
    allowed_here("angle_degrees", ("wedge",))

    need_d = kind in ("two_bec", "mirror", "well")
    d_check = (lambda v: v > 0) if kind in ("mirror", "well") else (lambda v: v >= 0)
    d = c.get("params", "d", _float, 0.0, required=need_d, check=d_check,
              rule="d must be > 0" if kind in ("mirror", "well") else "d must be >= 0")
    phi_deg = c.get("params", "phi_degrees", _float, 0.0, check=lambda v: 0 <= v < 360,
                    rule="phi_degrees must lie in [0, 360)")
    centers = c.get("params", "centers", _floats, (), required=kind == "multi_bec")
    phases = c.get("params", "phases_degrees", _floats, None)
    if kind == "multi_bec" and centers:
        if phases is None:
            phases = (0.0,) * len(centers)
        elif len(phases) != len(centers):
            c.error("params", "phases_degrees", f"needs {len(centers)} values, one per center")
    phases = phases or ()
    x0 = c.get("params", "x0", _float, None, required=kind in TWO_D)
    y0 = c.get("params", "y0", _float, None, required=kind in TWO_D)
    angle = c.get("params", "angle_degrees", _float, None, required=kind == "wedge",
                  check=lambda v: v in analytic.WedgeGeometry.SUPPORTED,
                  rule=f"angle_degrees must be one of {analytic.WedgeGeometry.SUPPORTED}")
    if kind in ("mirror", "well") and x0 is None and d:
        x0 = -d / 2.0

    params = None
    if beta is not None and hbar is not None and mass is not None:
        try:
            params = PacketParams(beta, d or 0.0, math.radians(phi_deg or 0.0),
                                  PhysConsts(hbar, mass))
        except PackviewError as exc:
            c.error("params", None, str(exc))

    grid = grid_y = None
    if kind is not None:
        defaults = _default_grid(kind, d)
        grid = _grid(c, ("x_min", "x_max", "n_points"), defaults)
        if kind in TWO_D:
            grid_y = _grid(c, ("y_min", "y_max", "n_points_y"), defaults)
        else:
            for key in ("y_min", "y_max", "n_points_y"):
                if c.has("grid", key):
                    c.error("grid", key, f"not used by 1D scenario {kind}")

    # geometry consistency; closed-form norms surface degenerate states here
    if params is not None and kind is not None and grid is not None:
        try:
            if kind == "two_bec":
                analytic.two_bec_norm(params)
            elif kind == "multi_bec" and centers and len(phases) == len(centers):
                analytic.multi_packet_norm(
                    [(cc, math.radians(p)) for cc, p in zip(centers, phases)], params
                )
            elif kind == "mirror" and x0 is not None:
                analytic.mirror_norm(analytic.GaussianTerm(x0, params))
                if grid.x_max != 0.0:
                    c.error("grid", "x_max", "the mirror wall sits at x = 0, so x_max must be 0")
            elif kind == "well" and x0 is not None and d:
                if grid.x_min != -d or grid.x_max != 0.0:
                    c.error("grid", None, f"the well grid must span exactly [{-d!r}, 0.0]")
                analytic.well_image_norm(analytic.GaussianTerm(x0, params), (-d, 0.0))
            elif kind == "corner" and x0 is not None and y0 is not None:
                analytic.corner_norm(analytic.GaussianTerm2D((x0, y0), params))
            elif kind == "wedge" and None not in (x0, y0, angle):
                analytic.wedge_norm(analytic.WedgeGeometry(angle),
                                    analytic.GaussianTerm2D((x0, y0), params))
        except PackviewError as exc:
            c.error("params", None, f"{type(exc).__name__}: {exc}")
        if kind in TWO_D and grid_y is not None and (grid.x_min != 0.0 or grid_y.x_min != 0.0):
            c.error("grid", None, "2D geometries have their walls on x = 0 and y = 0; "
                    "x_min and y_min must be 0")
        if kind == "two_bec" and "fringes" in outputs and not d:
            c.error("params", "d", "fringes need two separated packets (d > 0)")

    dt = c.get("oracle", "dt", _float, None, **positive)
    if "oracle_compare" not in outputs and c.has("oracle", "dt"):
        c.error("oracle", "dt", "dt given but oracle_compare is not requested")
    if "oracle_compare" in outputs and dt is None and times and kind is not None:
        span = times[-1] - times[0]
        key = "2d" if kind in TWO_D else ("1d-free" if _boundary(kind) == "free"
                                          else "1d-dirichlet")
        dt = DT_FRACTION[key] * span if span > 0 else 1e-3

    t_max = c.get("autocorrelation", "t_max_revivals", _float, 1.0, **positive)
    samples = c.get("autocorrelation", "samples", _int, 2001, check=lambda v: v >= 3,
                    rule="samples must be >= 3")
    threshold = c.get("autocorrelation", "threshold", _float, 0.99,
                      check=lambda v: 0 < v < 1, rule="threshold must lie in (0, 1)")
    if "autocorrelation" not in outputs:
        for key in KEYS["autocorrelation"]:
            if c.has("autocorrelation", key):
                c.error("autocorrelation", key, "autocorrelation output is not requested")

    if c.errors:
        raise ConfigError(c.errors)
    return ScenarioConfig(
        scenario=kind, params=params, times=tuple(times), grid=grid, outputs=outputs,
        phi_degrees=phi_deg, centers=tuple(centers), phases_degrees=tuple(phases),
        x0=x0, y0=y0, angle_degrees=angle, grid_y=grid_y, oracle_dt=dt,
        t_max_revivals=t_max, samples=samples, threshold=threshold,
    )


def _fmt(v):
    return repr(float(v)) if not isinstance(v, (int, np.integer)) else str(v)


def format_config(cfg: ScenarioConfig) -> str:
    """Effective config as INI text; validates back to an equal ScenarioConfig."""
    p = cfg.params
    out = ["[scenario]", f"kind = {cfg.scenario}",
           "outputs = " + ", ".join(o for o in OUTPUTS if o in cfg.outputs),
           "times = " + ", ".join(_fmt(t) for t in cfg.times), "",
           "[params]", f"beta = {_fmt(p.beta)}",
           f"hbar = {_fmt(p.consts.hbar)}", f"mass = {_fmt(p.consts.mass)}"]
    if cfg.scenario in ("two_bec", "mirror", "well"):
        out.append(f"d = {_fmt(p.d)}")
    if cfg.scenario == "two_bec":
        out.append(f"phi_degrees = {_fmt(cfg.phi_degrees)}")
    if cfg.scenario == "multi_bec":
        out.append("centers = " + ", ".join(_fmt(v) for v in cfg.centers))
        out.append("phases_degrees = " + ", ".join(_fmt(v) for v in cfg.phases_degrees))
    if cfg.x0 is not None:
        out.append(f"x0 = {_fmt(cfg.x0)}")
    if cfg.y0 is not None:
        out.append(f"y0 = {_fmt(cfg.y0)}")
    if cfg.angle_degrees is not None:
        out.append(f"angle_degrees = {_fmt(cfg.angle_degrees)}")
    g = cfg.grid
    out += ["", "[grid]", f"x_min = {_fmt(g.x_min)}", f"x_max = {_fmt(g.x_max)}",
            f"n_points = {g.n_points}"]
    if cfg.grid_y is not None:
        gy = cfg.grid_y
        out += [f"y_min = {_fmt(gy.x_min)}", f"y_max = {_fmt(gy.x_max)}",
                f"n_points_y = {gy.n_points}"]
    if "oracle_compare" in cfg.outputs:
        out += ["", "[oracle]", f"dt = {_fmt(cfg.oracle_dt)}"]
    if "autocorrelation" in cfg.outputs:
        out += ["", "[autocorrelation]", f"t_max_revivals = {_fmt(cfg.t_max_revivals)}",
                f"samples = {cfg.samples}", f"threshold = {_fmt(cfg.threshold)}"]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------------ running


def _write_csv(path: Path, header, columns):
    data = np.column_stack([np.asarray(c, dtype=float).ravel() for c in columns])
    np.savetxt(path, data, fmt=FLOAT_FMT, delimiter=",", header=",".join(header), comments="")


def _analytic_field(cfg: ScenarioConfig, t: float):
    p, kind = cfg.params, cfg.scenario
    x = cfg.grid.points
    if kind == "two_bec":
        return WaveField(cfg.grid, t, analytic.two_bec_wavefunction(p, x, t))
    if kind == "multi_bec":
        terms = [(c, math.radians(ph)) for c, ph in zip(cfg.centers, cfg.phases_degrees)]
        return WaveField(cfg.grid, t, analytic.multi_packet_wavefunction(terms, p, x, t))
    if kind == "mirror":
        return WaveField(cfg.grid, t, analytic.mirror_wavefunction(
            analytic.GaussianTerm(cfg.x0, p), x, t))
    if kind == "well":
        return WaveField(cfg.grid, t, analytic.well_image_wavefunction(
            analytic.GaussianTerm(cfg.x0, p), (-p.d, 0.0), x, t))
    X, Y = np.meshgrid(x, cfg.grid_y.points, indexing="ij")
    base = analytic.GaussianTerm2D((cfg.x0, cfg.y0), p)
    if kind == "corner":
        psi = analytic.corner_wavefunction(base, X, Y, t)
    else:
        psi = analytic.wedge_wavefunction(analytic.WedgeGeometry(cfg.angle_degrees), base, X, Y, t)
    return WaveField2D(cfg.grid, cfg.grid_y, t, psi)


def _propagate(cfg: ScenarioConfig, wave, t_next: float):
    step = oracle.PropagatorConfig.spanning(
        t_next - wave.time, cfg.oracle_dt, boundary=_boundary(cfg.scenario),
        consts=cfg.params.consts,
        mask=(oracle.wedge_mask(analytic.WedgeGeometry(cfg.angle_degrees), cfg.grid, cfg.grid_y)
              if cfg.scenario == "wedge" else None),
    )
    if step.boundary == "free":
        return oracle.propagate_free(wave, step)
    if step.boundary == "dirichlet":
        return oracle.propagate_dirichlet(wave, step)
    return oracle.propagate_dirichlet_2d(wave, step)


def _fringe_window(cfg: ScenarioConfig, t: float):
    if cfg.scenario == "two_bec":
        return 0.0, 2.0 * analytic.fringe_wavelength_farfield(cfg.params, t)
    return float(np.mean(cfg.centers)), None


@dataclass
class RunResult:
    out_dir: Path
    files: list = field(default_factory=list)
    summary: Path | None = None
    results: dict = field(default_factory=dict)


def run_scenario(cfg: ScenarioConfig, out_dir) -> RunResult:
    """
    Execute a validated scenario, writing CSVs and ``summary.ini`` to ``out_dir``.

    Output files (only the requested ones)::

        norm.csv                 t,norm
        density_NNN.csv          x,re_psi,im_psi,density   (2D: x,y,re_psi,im_psi,density)
        momentum_NNN.csv         p,density
        fringes.csv              t,local_wavelength,farfield_wavelength,exact_wavelength,visibility,n_peaks
        autocorrelation.csv      t,abs_autocorr
        oracle.csv               t,l2_error

    ``NNN`` indexes ``cfg.times``. Raises :class:`UnstableRun` if a
    propagator loses its norm.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    res = RunResult(out)
    r = res.results
    p = cfg.params

    def emit(name, header, columns):
        path = out / name
        _write_csv(path, header, columns)
        res.files.append(path)

    fields = [_analytic_field(cfg, t) for t in cfg.times]
    emit("norm.csv", ("t", "norm"), (cfg.times, [norm(f) for f in fields]))

    if "density" in cfg.outputs:
        for i, f in enumerate(fields):
            psi = f.amplitudes
            if cfg.is_2d:
                X, Y = f.mesh()
                emit(f"density_{i:03d}.csv", ("x", "y", "re_psi", "im_psi", "density"),
                     (X, Y, psi.real, psi.imag, f.density))
            else:
                emit(f"density_{i:03d}.csv", ("x", "re_psi", "im_psi", "density"),
                     (f.x, psi.real, psi.imag, f.density))

    if "momentum_density" in cfg.outputs:
        for i, f in enumerate(fields):
            pgrid, rho = oracle.momentum_density(f, p.consts)
            emit(f"momentum_{i:03d}.csv", ("p", "density"), (pgrid, rho))
            if cfg.scenario == "two_bec":
                exact = analytic.two_bec_momentum_density(p, pgrid)
                dp = pgrid[1] - pgrid[0]
                r[f"momentum_l2_vs_closed_form_{i:03d}"] = math.sqrt(
                    np.trapezoid((rho - exact) ** 2, dx=dp))

    if "fringes" in cfg.outputs:
        rows = []
        for i, f in enumerate(fields):
            t = f.time
            far = exact = lam = vis = math.nan
            npk = 0
            if cfg.scenario == "two_bec" and t > 0:
                far = analytic.fringe_wavelength_farfield(p, t)
                exact = 2 * math.pi / analytic.fringe_wavenumber(p, t)
            try:
                center, hw = _fringe_window(cfg, t) if t > 0 else (0.0, None)
                rep = analysis.extract_fringes(f.x, f.density, center, hw, t)
                lam, vis, npk = rep.local_wavelength, rep.visibility, len(rep.peak_positions)
            except NoFringes as exc:
                r[f"fringes_{i:03d}"] = f"no fringes ({exc})"
            rows.append((t, lam, far, exact, vis, npk))
            if math.isfinite(lam):
                r[f"fringe_wavelength_{i:03d}"] = lam
                r[f"fringe_visibility_{i:03d}"] = vis
                if math.isfinite(far):
                    r[f"farfield_wavelength_{i:03d}"] = far
                    r[f"fringe_relative_deviation_{i:03d}"] = lam / far - 1.0
        emit("fringes.csv", ("t", "local_wavelength", "farfield_wavelength", "exact_wavelength",
                             "visibility", "n_peaks"), list(zip(*rows)))

    if "timescales" in cfg.outputs:
        ts = spectral.timescales(p)
        r.update(t0=ts.t0, T_overlap=ts.T_overlap, T_rev=ts.T_rev,
                 ratio_rev_overlap=ts.ratio_rev_overlap,
                 ratio_overlap_t0_sq=ts.ratio_overlap_t0_sq)

    if "autocorrelation" in cfg.outputs:
        f0 = _analytic_field(cfg, 0.0)
        exp = spectral.project_packet(f0, d=p.d, consts=p.consts)
        t_rev = exp.revival_time
        tt = np.linspace(0.0, cfg.t_max_revivals * t_rev, cfg.samples)
        trace = np.abs(spectral.autocorrelation(exp, tt))
        emit("autocorrelation.csv", ("t", "abs_autocorr"), (tt, trace))
        rev = analysis.detect_revivals(tt, trace, cfg.threshold)
        r["T_rev"] = t_rev
        r["captured_probability"] = exp.captured
        r["revival_times"] = ", ".join(_fmt(v) for v in rev.times_of_maxima)
        r["revival_times_over_T_rev"] = ", ".join(_fmt(v / t_rev) for v in rev.times_of_maxima)
        r["revival_magnitudes"] = ", ".join(_fmt(v) for v in rev.magnitudes)
        if len(rev.times_of_maxima):
            r["first_revival_over_T_rev"] = float(rev.times_of_maxima[0] / t_rev)
        r["abs_autocorr_at_T_rev"] = abs(spectral.autocorrelation(exp, t_rev))
        for i, f in enumerate(fields):
            eig = spectral.evolve_eigenbasis(exp, f.time, cfg.grid)
            r[f"eigenbasis_l2_{i:03d}"] = oracle.l2_error(f, eig)

    if "oracle_compare" in cfg.outputs:
        r["oracle_boundary"] = _boundary(cfg.scenario)
        r["oracle_dt"] = cfg.oracle_dt
        wave = fields[0]
        errs = []
        for i, f in enumerate(fields):
            if i:
                wave = _propagate(cfg, wave, f.time)
            e = oracle.l2_error(f, wave)
            errs.append(e)
            r[f"oracle_l2_{i:03d}"] = e
            if cfg.is_2d:
                dens = np.abs(wave.amplitudes) ** 2
                r[f"oracle_wall_max_abs_{i:03d}"] = float(np.sqrt(max(
                    dens[0, :].max(), dens[:, 0].max())))
            if cfg.scenario == "corner" and i:
                box = oracle.propagate_dirichlet_box_2d(
                    fields[0], oracle.PropagatorConfig(f.time - fields[0].time, 1,
                                                       consts=p.consts))
                r[f"oracle_box_l2_{i:03d}"] = oracle.l2_error(f, box)
        r["oracle_l2_max"] = max(errs)
        emit("oracle.csv", ("t", "l2_error"), (cfg.times, errs))

    summary = out / "summary.ini"
    lines = [format_config(cfg), f"[{RESULT_PREFIX}]"]
    for k, v in r.items():
        lines.append(f"{k} = {v if isinstance(v, str) else _fmt(v)}")
    summary.write_text("\n".join(lines) + "\n")
    res.summary = summary
    return res


# ---------------------------------------------------------------------- CLI


def _run_one(path: str, out_dir: str):
    """Worker for one config: returns (exit code, messages)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        return 1, [f"{path}: {exc}"]
    try:
        cfg = validate_config(text)
    except ConfigError as exc:
        return 1, [f"{path}:{e}" for e in exc.errors]
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            res = run_scenario(cfg, out_dir)
        msgs = [f"{path}: warning: {w.message}" for w in caught]
        msgs.append(f"{path}: wrote {len(res.files)} CSV files and {res.summary}")
        return 0, msgs
    except UnstableRun as exc:
        return 2, [f"{path}: numerical failure: {exc}"]
    except (PackviewError, ValueError, ArithmeticError, MemoryError, OSError) as exc:
        return 2, [f"{path}: runtime failure: {type(exc).__name__}: {exc}"]


def _cmd_run(args) -> int:
    stems = [Path(p).stem for p in args.configs]
    if len(set(stems)) != len(stems):
        print("error: config file names must be distinct; each run writes to "
              "<out-dir>/<config name>/", file=sys.stderr)
        return 1
    jobs = [(p, str(Path(args.out_dir) / s)) for p, s in zip(args.configs, stems)]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            outcomes = list(pool.map(_run_one, *zip(*jobs)))
    else:
        outcomes = [_run_one(p, o) for p, o in jobs]
    code = 0
    for status, msgs in outcomes:
        for m in msgs:
            print(m, file=sys.stderr if status else sys.stdout)
        code = max(code, status)
    return code


def _cmd_validate(args) -> int:
    try:
        cfg = validate_config(Path(args.config).read_text())
    except OSError as exc:
        print(f"{args.config}: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        for e in exc.errors:
            print(f"{args.config}:{e}", file=sys.stderr)
        return 1
    sys.stdout.write(format_config(cfg))
    return 0


def _cmd_timescales(args) -> int:
    try:
        ts = spectral.timescales(PacketParams(args.beta, args.d, 0.0,
                                              PhysConsts(args.hbar, args.mass)))
    except PackviewError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name in ("t0", "T_overlap", "T_rev", "ratio_rev_overlap", "ratio_overlap_t0_sq"):
        print(f"{name} = {_fmt(getattr(ts, name))}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packview",
        description="Gaussian matter-wave packet scenarios: closed forms and numerical cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one or more scenario configs")
    run.add_argument("configs", nargs="+", metavar="config")
    run.add_argument("--out-dir", default="out",
                     help="parent directory; each config writes to <out-dir>/<config name>/")
    run.add_argument("--jobs", type=int, default=1, help="run configs in parallel processes")
    run.set_defaults(func=_cmd_run)

    val = sub.add_parser("validate", help="check a config and print its effective form")
    val.add_argument("config")
    val.set_defaults(func=_cmd_validate)

    ts = sub.add_parser("timescales", help="print t0, T_overlap, T_rev and their ratios")
    ts.add_argument("--beta", type=float, required=True)
    ts.add_argument("--d", type=float, required=True)
    ts.add_argument("--hbar", type=float, default=1.0)
    ts.add_argument("--mass", type=float, default=1.0)
    ts.set_defaults(func=_cmd_timescales)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors; 2 is reserved for runtime failures
        return 0 if exc.code in (0, None) else 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
