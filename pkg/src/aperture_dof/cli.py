"""Command-line front end: config parsing, analysis commands, file outputs.

Subcommands: svd, sbp-sweep, kspace, fresnel, resolution.  Each reads a
sectioned key = value config file (units accepted on lengths and angles),
writes CSV tables (canonical) and, for svd, an optional SVG plot.  Exit
code 0 only when every requested analysis completed and the built-in
consistency checks passed; config errors exit 2 and name the offending key.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _svg
from .fresnel import (
    ApertureFunction,
    effective_aperture,
    fresnel_dof,
    fresnel_equivalence_check,
    sbp_g3_fresnel,
)
from .geometry import Aperture, SceneSegment, WaveContext
from .kspace import (
    bandwidth,
    mono_spectrum,
    multi_spectrum,
    project_points_onto_line,
    scene_projection_angle,
)
from .operator import (
    MONOSTATIC,
    MULTISTATIC,
    ArrayLayout,
    build_operator,
    dof_knee,
    sigma_bar,
    sigma_bar_sq,
    svd,
)
from .recon import resolution_sweep
from .sbp import compute_sbp, sbp_numeric, theta_heu, theta_max


class ConfigError(Exception):
    """Invalid experiment config; message names the offending section/key."""


_LENGTH_UNITS = {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6}
_NUM_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*([a-zA-Z]*)\s*$")


def _parse_length(text: str, where: str) -> float:
    m = _NUM_RE.match(text)
    if m:
        try:
            value = float(m.group(1))
        except ValueError:
            m = None
    if not m:
        raise ConfigError(f"{where}: cannot parse length {text!r}")
    unit = m.group(2)
    if unit and unit not in _LENGTH_UNITS:
        raise ConfigError(f"{where}: unknown length unit {unit!r}")
    return value * (_LENGTH_UNITS[unit] if unit else 1.0)


def _parse_angle(text: str, where: str) -> float:
    """Angle in radians; bare numbers are degrees, 'deg'/'rad' suffixes honored."""
    m = _NUM_RE.match(text)
    if m:
        try:
            value = float(m.group(1))
        except ValueError:
            m = None
    if not m:
        raise ConfigError(f"{where}: cannot parse angle {text!r}")
    unit = m.group(2).lower()
    if unit in ("", "deg"):
        return math.radians(value)
    if unit == "rad":
        return value
    raise ConfigError(f"{where}: unknown angle unit {unit!r}")


def _parse_int(text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{where}: expected integer, got {text!r}") from exc


def _parse_bool(text: str, where: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{where}: expected boolean, got {text!r}")


_ARCH_TOKENS = {
    "mono": MONOSTATIC,
    "monostatic": MONOSTATIC,
    "multi": MULTISTATIC,
    "multistatic": MULTISTATIC,
    "both": "both",
}

_ANALYSES = ("svd", "sbp-sweep", "kspace", "fresnel", "resolution")

# every key the parser accepts; anything else is rejected by name
_SCHEMA = {
    "geometry": ("lambda", "L1", "L2", "D", "theta", "t"),
    "array": ("architecture", "n_elements", "spacing"),
    "discretization": ("n_scene", "kspace_samples", "sbp_points"),
    "run": ("out_dir", "seed", "svg", "analyses"),
    "sweep": ("param", "values", "include_fresnel", "include_theta"),
    "resolution": ("n_targets", "oversample", "methods"),
    "kspace": ("point_u",),
}


@dataclass
class ExperimentConfig:
    """Fully resolved experiment parameters (SI units, radians)."""

    wavelength: float = 0.005
    L1: float = 0.15
    L2: float = 0.10
    D: float = 0.20
    theta: float = 0.0
    t: float = 0.0
    architecture: str = "both"
    n_elements: int = 200
    n_scene: int = 400
    kspace_samples: int = 512
    sbp_points: int = 512
    out_dir: str = "results"
    seed: int = 0
    svg: bool = True
    analyses: tuple | None = None
    sweep_param: str | None = None
    sweep_values: tuple = ()
    sweep_include_fresnel: bool = False
    sweep_include_theta: bool = False
    res_n_targets: int = 21
    res_oversample: int = 4
    res_methods: tuple = ("pinv", "mf")
    kspace_point_u: float = 0.0
    source: str = field(default="<defaults>", repr=False)

    def validate(self):
        if self.wavelength <= 0.0:
            raise ConfigError("[geometry] lambda: must be positive")
        if self.L1 <= 0.0:
            raise ConfigError("[geometry] L1: must be positive")
        if self.L2 <= 0.0:
            raise ConfigError("[geometry] L2: empty scene, must be positive")
        if self.D <= 0.0:
            raise ConfigError("[geometry] D: must be positive")
        if abs(self.theta) > 0.5 * math.pi:
            raise ConfigError("[geometry] theta: |theta| must be <= 90 deg")
        if self.n_elements < 1:
            raise ConfigError("[array] n_elements: must be >= 1")
        if self.n_scene < 2:
            raise ConfigError("[discretization] n_scene: must be >= 2")
        if self.kspace_samples < 2:
            raise ConfigError("[discretization] kspace_samples: must be >= 2")
        if self.sbp_points < 16:
            raise ConfigError("[discretization] sbp_points: must be >= 16")
        if self.res_oversample < 1:
            raise ConfigError("[resolution] oversample: must be >= 1")
        if self.res_n_targets < 1:
            raise ConfigError("[resolution] n_targets: must be >= 1")
        for m in self.res_methods:
            if m not in ("pinv", "mf"):
                raise ConfigError(f"[resolution] methods: unknown method {m!r}")
        if abs(self.kspace_point_u) > self.L2 / 2.0:
            raise ConfigError("[kspace] point_u: outside the scene segment")

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str  # keep key case: L1 vs l1 must not alias
        read = parser.read(path)
        if not read:
            raise ConfigError(f"config file not found: {path}")
        cfg = cls(source=str(path))

        for section in parser.sections():
            if section not in _SCHEMA:
                raise ConfigError(f"[{section}]: unknown section")
            for key in parser[section]:
                if key not in _SCHEMA[section]:
                    raise ConfigError(f"[{section}] {key}: unknown key")

        def get(section, key):
            return parser.get(section, key, fallback=None)

        g = lambda k: get("geometry", k)
        if g("lambda") is not None:
            cfg.wavelength = _parse_length(g("lambda"), "[geometry] lambda")
        if g("L1") is not None:
            cfg.L1 = _parse_length(g("L1"), "[geometry] L1")
        if g("L2") is not None:
            cfg.L2 = _parse_length(g("L2"), "[geometry] L2")
        if g("D") is not None:
            cfg.D = _parse_length(g("D"), "[geometry] D")
        if g("theta") is not None:
            cfg.theta = _parse_angle(g("theta"), "[geometry] theta")
        if g("t") is not None:
            cfg.t = _parse_length(g("t"), "[geometry] t")

        arch = get("array", "architecture")
        if arch is not None:
            token = arch.strip().lower()
            if token not in _ARCH_TOKENS:
                raise ConfigError(f"[array] architecture: unknown value {arch!r}")
            cfg.architecture = _ARCH_TOKENS[token]
        n_el = get("array", "n_elements")
        spacing = get("array", "spacing")
        if n_el is not None:
            cfg.n_elements = _parse_int(n_el, "[array] n_elements")
        if spacing is not None:
            pitch = _parse_length(spacing, "[array] spacing")
            if pitch <= 0.0:
                raise ConfigError("[array] spacing: must be positive")
            derived = max(1, round(cfg.L1 / pitch))
            if n_el is not None and derived != cfg.n_elements:
                raise ConfigError(
                    "[array] spacing: inconsistent with n_elements "
                    f"({cfg.n_elements} elements vs L1/spacing = {cfg.L1 / pitch:.3f})"
                )
            cfg.n_elements = derived

        for key, attr in (("n_scene", "n_scene"), ("kspace_samples", "kspace_samples"),
                          ("sbp_points", "sbp_points")):
            val = get("discretization", key)
            if val is not None:
                setattr(cfg, attr, _parse_int(val, f"[discretization] {key}"))

        if get("run", "out_dir") is not None:
            cfg.out_dir = get("run", "out_dir").strip()
        if get("run", "seed") is not None:
            cfg.seed = _parse_int(get("run", "seed"), "[run] seed")
        if get("run", "svg") is not None:
            cfg.svg = _parse_bool(get("run", "svg"), "[run] svg")
        if get("run", "analyses") is not None:
            items = tuple(
                s.strip() for s in get("run", "analyses").split(",") if s.strip()
            )
            for item in items:
                if item not in _ANALYSES:
                    raise ConfigError(f"[run] analyses: unknown analysis {item!r}")
            cfg.analyses = items

        if parser.has_section("sweep"):
            param = get("sweep", "param")
            if param is not None:
                param = param.strip()
                if param not in ("t", "D", "L2", "theta"):
                    raise ConfigError(f"[sweep] param: must be one of t, D, L2, theta")
                cfg.sweep_param = param
            raw_values = get("sweep", "values")
            if raw_values is not None:
                if cfg.sweep_param is None:
                    raise ConfigError("[sweep] values: param must be set first")
                parse = _parse_angle if cfg.sweep_param == "theta" else _parse_length
                cfg.sweep_values = tuple(
                    parse(v.strip(), "[sweep] values")
                    for v in raw_values.split(",") if v.strip()
                )
            if get("sweep", "include_fresnel") is not None:
                cfg.sweep_include_fresnel = _parse_bool(
                    get("sweep", "include_fresnel"), "[sweep] include_fresnel")
            if get("sweep", "include_theta") is not None:
                cfg.sweep_include_theta = _parse_bool(
                    get("sweep", "include_theta"), "[sweep] include_theta")

        if get("resolution", "n_targets") is not None:
            cfg.res_n_targets = _parse_int(get("resolution", "n_targets"),
                                           "[resolution] n_targets")
        if get("resolution", "oversample") is not None:
            cfg.res_oversample = _parse_int(get("resolution", "oversample"),
                                            "[resolution] oversample")
        if get("resolution", "methods") is not None:
            cfg.res_methods = tuple(
                m.strip() for m in get("resolution", "methods").split(",") if m.strip()
            )
        if get("kspace", "point_u") is not None:
            cfg.kspace_point_u = _parse_length(get("kspace", "point_u"),
                                               "[kspace] point_u")

        cfg.validate()
        return cfg

    # geometry builders -------------------------------------------------
    def wave(self) -> WaveContext:
        return WaveContext(self.wavelength)

    def aperture(self) -> Aperture:
        return Aperture.centered(self.L1, self.D)

    def scene(self) -> SceneSegment:
        return SceneSegment(self.L2 / 2.0, self.theta, self.t)

    def architectures(self, override: str | None = None) -> tuple:
        token = override if override else self.architecture
        if token in _ARCH_TOKENS:
            token = _ARCH_TOKENS[token]
        if token == "both":
            return (MONOSTATIC, MULTISTATIC)
        return (token,)

    def layout(self, architecture: str) -> ArrayLayout:
        return ArrayLayout.uniform(self.aperture(), self.n_elements, architecture)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.9g}"


def _write_csv(path: Path, header: list, rows) -> Path:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, str) else v for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def _write_json(path: Path, payload: dict) -> Path:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def _arch_token(architecture: str) -> str:
    return "mono" if architecture == MONOSTATIC else "multi"


def _geometry_payload(cfg: ExperimentConfig) -> dict:
    return {
        "lambda": cfg.wavelength,
        "L1": cfg.L1,
        "L2": cfg.L2,
        "D": cfg.D,
        "theta_deg": math.degrees(cfg.theta),
        "t": cfg.t,
        "n_elements": cfg.n_elements,
        "n_scene": cfg.n_scene,
    }


def _check(condition: bool, message: str):
    """Internal consistency check; failures make the command exit nonzero."""
    if not condition:
        raise RuntimeError(f"internal consistency check failed: {message}")


def cmd_svd(cfg: ExperimentConfig, out: Path, archs: tuple) -> list:
    wave, aperture, scene = cfg.wave(), cfg.aperture(), cfg.scene()
    sbp_res = compute_sbp(scene, aperture, wave, cfg.sbp_points)
    written = []
    arch_payload = {}
    svg_series = []
    for arch in archs:
        op = build_operator(scene, cfg.layout(arch), wave, cfg.n_scene)
        spectrum = svd(op)
        sig = spectrum.singular_values
        expected = (
            cfg.L1 * cfg.L2 if arch == MONOSTATIC else cfg.L1 ** 2 * cfg.L2
        )
        _check(
            abs(spectrum.hs_norm_sq - expected) <= 0.01 * expected,
            f"{arch} operator norm deviates from the analytic value",
        )
        token = _arch_token(arch)
        written.append(_write_csv(
            out / f"svd_{token}.csv",
            ["index", "sigma", "sigma_normalized"],
            ((i + 1, sig[i], sig[i] / sig[0]) for i in range(sig.size)),
        ))
        arch_payload[token] = {
            "sigma_bar": sigma_bar(spectrum),
            "sigma_bar_sq": sigma_bar_sq(spectrum),
            "knee_index": dof_knee(spectrum),
            "n_singular_values": int(sig.size),
            "hs_norm_sq": spectrum.hs_norm_sq,
        }
        svg_series.append({
            "x": np.arange(1, sig.size + 1),
            "y": sig / sig[0],
            "label": token,
        })
    payload = {
        "geometry": _geometry_payload(cfg),
        "geometry_class": scene.geometry_class,
        "sbp": sbp_res.value,
        "sbp_method": sbp_res.method,
        "fresnel_dof": fresnel_dof(cfg.L1, cfg.L2, cfg.D, cfg.wavelength),
        "architectures": arch_payload,
    }
    written.append(_write_json(out / "dof.json", payload))
    if cfg.svg:
        doc = _svg.plot_lines(
            svg_series,
            title="Normalized singular values",
            xlabel="index",
            ylabel="sigma / sigma_1",
            ylog=True,
            vlines=[(sbp_res.value, f"SBP = {sbp_res.value:.1f}")],
            y_floor=1e-10,
        )
        svg_path = out / "svd.svg"
        svg_path.write_text(doc)
        written.append(svg_path)
    return written


def cmd_sbp_sweep(cfg: ExperimentConfig, out: Path, sweep: dict | None = None) -> list:
    param = sweep["param"] if sweep else cfg.sweep_param
    values = sweep["values"] if sweep else cfg.sweep_values
    if not param or not len(values):
        raise ConfigError("[sweep] param/values: required for sbp-sweep")
    if param not in ("t", "D", "L2", "theta"):
        raise ConfigError(f"[sweep] param: must be one of t, D, L2, theta")

    wave = cfg.wave()
    header = ["param_value", "sbp"]
    if cfg.sweep_include_fresnel:
        header.append("fresnel_approx")
    if cfg.sweep_include_theta:
        header.extend(["theta_heu", "theta_max"])

    rows = []
    for value in values:
        L1, L2, D, theta, t = cfg.L1, cfg.L2, cfg.D, cfg.theta, cfg.t
        if param == "t":
            t = value
        elif param == "D":
            D = value
        elif param == "L2":
            L2 = value
        else:
            theta = value
        aperture = Aperture.centered(L1, D)
        scene = SceneSegment(L2 / 2.0, theta, t)
        res = compute_sbp(scene, aperture, wave, cfg.sbp_points)
        row = [value, res.value]
        if cfg.sweep_include_fresnel:
            row.append(sbp_g3_fresnel(L1, L2, D, cfg.wavelength, theta))
        if cfg.sweep_include_theta:
            row.append(theta_heu(t, D))
            row.append(theta_max(t, scene, aperture, wave, cfg.sbp_points))
        rows.append(row)
    return [_write_csv(out / "sbp_sweep.csv", header, rows)]


def cmd_kspace(cfg: ExperimentConfig, out: Path) -> list:
    wave, aperture, scene = cfg.wave(), cfg.aperture(), cfg.scene()
    point = scene.point(cfg.kspace_point_u)
    mono = mono_spectrum(point, aperture, wave)
    n = cfg.kspace_samples
    mono_pts = mono.arc_samples(n)

    # the written multi grid is decimated; checks below use the full density
    n_axis = min(n, 96)
    multi_out = multi_spectrum(point, aperture, wave, n_axis)

    rng = np.random.default_rng(cfg.seed)
    multi_full = multi_spectrum(point, aperture, wave, n)
    k = wave.k
    angles = [scene_projection_angle(scene), 0.0]
    angles.extend(rng.uniform(-0.5 * math.pi, 0.5 * math.pi, 3))
    for ang in angles:
        lo_m, hi_m = project_points_onto_line(mono.arc_samples(n), ang)
        lo_x, hi_x = project_points_onto_line(multi_full.samples, ang)
        _check(
            abs((hi_m - lo_m) - (hi_x - lo_x)) <= 1e-9 * k,
            f"mono/multi projected widths diverge at line angle {ang:.3f}",
        )

    written = [
        _write_csv(out / "kspace_mono.csv", ["kx", "kz"], mono_pts),
        _write_csv(out / "kspace_multi.csv", ["kx", "kz"], multi_out.samples),
    ]
    u_grid = np.linspace(-scene.half_length, scene.half_length, 101)
    rows = []
    for u in u_grid:
        p = scene.point(u)
        b = bandwidth(p, scene, aperture, wave)
        rows.append([u, p[0], p[1], b, 1.0 / b if b > 0 else math.inf])
    written.append(_write_csv(
        out / "bandwidth.csv", ["u", "x", "z", "bandwidth", "reciprocal"], rows
    ))
    return written


def cmd_fresnel(cfg: ExperimentConfig, out: Path) -> list:
    wave = cfg.wave()
    if cfg.theta != 0.0:
        raise ConfigError("[geometry] theta: fresnel analysis needs a parallel scene")
    layout = cfg.layout(MULTISTATIC)
    scene = cfg.scene()
    report_f = fresnel_equivalence_check(layout, scene, wave, n_scene=cfg.n_scene)
    report_e = fresnel_equivalence_check(layout, scene, wave, kernel="exact",
                                         n_scene=cfg.n_scene)
    _check(
        report_f.max_rel_discrepancy <= 1e-6,
        "effective-aperture equivalence broken for the Fresnel kernel",
    )

    tol = cfg.wavelength / 1000.0
    eff = effective_aperture(
        ApertureFunction.from_positions(layout.tx_positions, tol),
        ApertureFunction.from_positions(layout.rx_positions, tol),
        merge_tol=tol,
    )
    payload = {
        "geometry": _geometry_payload(cfg),
        "fresnel_dof": fresnel_dof(cfg.L1, cfg.L2, cfg.D, cfg.wavelength),
        "sbp_g3_fresnel_at_theta": sbp_g3_fresnel(
            cfg.L1, cfg.L2, cfg.D, cfg.wavelength, cfg.theta),
        "sbp_closed_form_g1": compute_sbp(
            SceneSegment(cfg.L2 / 2.0), cfg.aperture(), wave).value,
        "equivalence": {
            "fresnel_kernel_max_rel_discrepancy": report_f.max_rel_discrepancy,
            "exact_kernel_max_rel_discrepancy": report_e.max_rel_discrepancy,
        },
        "effective_aperture_size": int(eff.positions.size),
        "effective_aperture_total": eff.total,
    }
    return [
        _write_json(out / "fresnel.json", payload),
        _write_csv(out / "effective_aperture.csv",
                   ["position", "multiplicity"],
                   zip(eff.positions, eff.multiplicities)),
    ]


def cmd_resolution(cfg: ExperimentConfig, out: Path, archs: tuple) -> list:
    wave, aperture, scene = cfg.wave(), cfg.aperture(), cfg.scene()
    written = []
    curves = {}
    for arch in archs:
        curve = resolution_sweep(
            scene, aperture, wave, cfg.layout(arch),
            methods=cfg.res_methods,
            n_scene=cfg.n_scene,
            n_targets=cfg.res_n_targets,
            oversample=cfg.res_oversample,
            keep_profiles=True,
        )
        curves[arch] = curve
        token = _arch_token(arch)
        for method in cfg.res_methods:
            mags = np.abs(curve.profiles[method])
            header = ["u"] + [f"scat_{p:.9g}" for p in curve.positions]
            rows = np.column_stack([curve.profile_coords, mags])
            written.append(_write_csv(
                out / f"psf_{method}_{token}.csv", header, rows))

    first = curves[archs[0]]
    for u, b in zip(first.positions, first.reciprocal_bandwidth):
        _check(
            abs(b - 1.0 / bandwidth(scene.point(u), scene, aperture, wave)) <= 1e-12,
            "reciprocal bandwidth column inconsistent with the kspace module",
        )

    header = ["position", "reciprocal_bandwidth"]
    cols = [first.positions, first.reciprocal_bandwidth]
    for arch in archs:
        token = _arch_token(arch)
        for method in cfg.res_methods:
            header.append(f"width_{method}_{token}")
            cols.append(curves[arch].widths[method])
            header.append(f"flag_{method}_{token}")
            cols.append(curves[arch].flagged[method].astype(int))
    rows = list(zip(*cols))
    written.append(_write_csv(out / "resolution.csv", header, rows))
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aperture-dof",
        description="DoF, SBP, k-space and resolution analysis of 1D imaging arrays",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("svd", "singular-value spectrum, DoF estimators, dof.json"),
        ("sbp-sweep", "space-bandwidth product over a parameter sweep"),
        ("kspace", "k-space sample sets and per-point bandwidth"),
        ("fresnel", "Fresnel DoF and effective-aperture equivalence"),
        ("resolution", "PSF beamwidths against the 1/B benchmark"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--arch", default=None, choices=["mono", "multi", "both"],
                       help="architecture override")
    return parser


def main(argv: list | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.from_file(args.config)
        if cfg.analyses is not None and args.command not in cfg.analyses:
            raise ConfigError(
                f"[run] analyses: {args.command!r} not enabled in this config")
        out = Path(args.out if args.out else cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        archs = cfg.architectures(args.arch)
        if args.command == "svd":
            files = cmd_svd(cfg, out, archs)
        elif args.command == "sbp-sweep":
            files = cmd_sbp_sweep(cfg, out)
        elif args.command == "kspace":
            files = cmd_kspace(cfg, out)
        elif args.command == "fresnel":
            files = cmd_fresnel(cfg, out)
        else:
            files = cmd_resolution(cfg, out, archs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for f in files:
        print(f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
