"""Experiment runner: reproduces the study's figures as CSV + PNG files.

Each subcommand reads a flat JSON config, runs the corresponding estimator,
and writes a CSV (the canonical, byte-reproducible output), a PNG rendering,
and a JSON manifest with the resolved config and output digests.

Exit codes: 0 success, 2 config error, 3 non-convergence in a required
optimizer call.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import __version__, plotting
from .distill import (
    estimate_df,
    estimate_p,
    energy_histogram,
    classify_magnetized,
    find_nonconvexity_witness,
    independence_check,
    thermal_boundary,
    thermal_concurrence_grid,
)
from .hamiltonians import (
    EnergyRange,
    ModelSpec,
    build,
    state_energy_bounds,
    target_energy_bounds_analytic,
)
from .optimize import target_energy_range
from .states import StateSampler, target_state


class ConfigError(ValueError):
    """Bad or inconsistent run configuration (exit code 2)."""


MODEL_KEYS = (
    "family", "gamma", "g", "delta", "theta", "n_sites", "local_dim",
    "alpha", "beta", "n1", "n2",
)
RUN_KEYS = ("seed", "workers", "out", "n_samples", "bins")
OPT_KEYS = ("restarts", "maxiter")

_DEFAULT_G_GRID = [round(0.25 * k, 4) for k in range(13)]  # 0 .. 3
_DEFAULT_BETA_GRID = [round(0.1 * k, 4) for k in range(1, 51)]  # 0.1 .. 5
_DEFAULT_THETA_GRID = [round(2 * np.pi * k / 24, 10) for k in range(24)]

COMMAND_KEYS: dict[str, set[str]] = {
    "spectrum": {*MODEL_KEYS, *RUN_KEYS, "g_grid", "gamma_values", "delta_values", "theta_values"},
    "p-curve": {
        *MODEL_KEYS, *RUN_KEYS, *OPT_KEYS,
        "sampler", "rank", "rank_values", "gamma_values", "delta_values",
        "g_grid", "target", "delta_p",
    },
    "hist": {*MODEL_KEYS, *RUN_KEYS, "sampler", "rank", "rank_values", "g_values"},
    "thermal": {*MODEL_KEYS, *RUN_KEYS, "g_grid", "beta_grid", "target"},
    "bell-volume": {
        *MODEL_KEYS, *RUN_KEYS, "axes", "fixed", "grid_points", "g_values",
        "target", "witness_samples",
    },
    "qutrit": {*MODEL_KEYS, *RUN_KEYS, *OPT_KEYS, "theta_grid", "g_grid"},
    "df": {*RUN_KEYS, "rank_values"},
    "independence": {*MODEL_KEYS, *RUN_KEYS, "rank", "min_bin_count"},
    "prange": {*MODEL_KEYS, *RUN_KEYS, *OPT_KEYS, "target", "g_grid"},
}


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt(row.get(k)) for k in fieldnames])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def write_manifest(
    out_dir: Path, command: str, config: dict, outputs: list[Path], started: float,
    extra: dict | None = None,
) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "config": config,
        "wall_time_s": round(time.perf_counter() - started, 3),
        "outputs": {p.name: _sha256(p) for p in sorted(outputs)},
    }
    if extra:
        manifest.update(extra)
    path = out_dir / f"{command}.manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def model_from_config(cfg: dict, **overrides: Any) -> ModelSpec:
    kwargs = {k: cfg[k] for k in MODEL_KEYS if k in cfg}
    kwargs.update(overrides)
    for key in ("alpha", "beta", "n1", "n2"):
        if key in kwargs:
            kwargs[key] = tuple(kwargs[key])
    try:
        return ModelSpec(**kwargs)
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err


def default_target_name(sampler: StateSampler) -> str:
    if sampler.family == "ghz_class":
        return "ghz3"
    if sampler.family == "w_class":
        return "w3"
    if sampler.dims == (3, 3):
        return "phi"
    if sampler.dims == (2, 2):
        return "psi_minus"
    raise ConfigError(f"no default target for sampler dims {sampler.dims}; set 'target'")


def _target(name: str, dims: tuple[int, ...]):
    if name == "phi":
        return target_state("phi", dims[0])
    return target_state(name)


#: targets whose reachable interval is independent of the field strength
_FIELD_FREE_TARGETS = ("psi_minus", "phi", "ghz3")


class _RangeResolver:
    """Reachable-interval lookup: analytic first, optimizer as fallback."""

    def __init__(self, target_name: str, restarts: int, maxiter: int, seed: int):
        self.target_name = target_name
        self.restarts = restarts
        self.maxiter = maxiter
        self.seed = seed
        self._cache: dict[tuple, EnergyRange] = {}
        self.nonconverged: list[str] = []

    def resolve(self, spec: ModelSpec) -> EnergyRange:
        g_free = self.target_name in _FIELD_FREE_TARGETS
        key_spec = spec.replace(g=0.0) if g_free else spec
        key = (key_spec,)
        if key in self._cache:
            return self._cache[key]
        rng = target_energy_bounds_analytic(spec, self.target_name)
        if rng is None:
            result = target_energy_range(
                key_spec,
                _target(self.target_name, spec.dims),
                restarts=self.restarts,
                maxiter=self.maxiter,
                seed=self.seed,
            )
            if not result.converged:
                self.nonconverged.append(f"{spec.family} target {self.target_name} at {key_spec}")
            rng = result.range
        self._cache[key] = rng
        return rng


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    family = cfg.get("family", "transverse_xy")
    g_grid = cfg.get("g_grid", _DEFAULT_G_GRID)
    sweep_field, sweep_key = {
        "xxz": ("delta", "delta_values"),
        "bilinear_biquadratic": ("theta", "theta_values"),
    }.get(family, ("gamma", "gamma_values"))
    sweep = cfg.get(sweep_key, [cfg.get(sweep_field, 1.0)])
    rows = []
    for val in sweep:
        for g in g_grid:
            spec = model_from_config(cfg, family=family, g=float(g), **{sweep_field: float(val)})
            w = np.linalg.eigvalsh(build(spec))
            row = {"family": family, "gamma": spec.gamma, "delta": spec.delta,
                   "theta": spec.theta, "g": g}
            row.update({f"lam{k + 1}": float(x) for k, x in enumerate(w)})
            rows.append(row)
    fields = ["family", "gamma", "delta", "theta", "g"] + [
        f"lam{k + 1}" for k in range(len(rows[0]) - 5)
    ]
    csv_path = out_dir / "spectrum.csv"
    write_csv(csv_path, fields, rows)
    outputs = [csv_path]
    if plot:
        png = out_dir / "spectrum.png"
        plotting.plot_spectrum(rows, png, sweep_field)
        outputs.append(png)
    return outputs, {}, []


def _sampler_from_config(cfg: dict, dims: tuple[int, ...], rank: int | None) -> StateSampler:
    family = cfg.get("sampler", "pure")
    try:
        return StateSampler(family, dims=dims, rank=rank)
    except ValueError as err:
        raise ConfigError(str(err)) from err


def cmd_p_curve(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    n = int(cfg.get("n_samples", 100_000))
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    g_grid = cfg.get("g_grid", _DEFAULT_G_GRID)
    family = cfg.get("family", "transverse_xy")
    csv_path = out_dir / "p-curve.csv"
    outputs = [csv_path]

    if cfg.get("delta_p"):
        if family != "transverse_xy":
            raise ConfigError("delta_p mode compares the transverse and longitudinal XY models")
        gammas = cfg.get("gamma_values", [cfg.get("gamma", 1.0)])
        sampler = StateSampler("pure", dims=(2, 2))
        rows = []
        for gamma in gammas:
            for g in g_grid:
                ps = {}
                for fam in ("transverse_xy", "longitudinal_xy"):
                    spec = model_from_config(cfg, family=fam, gamma=float(gamma), g=float(g))
                    rng = target_energy_bounds_analytic(spec, "psi_minus")
                    assert rng is not None
                    ps[fam] = estimate_p(sampler, spec, rng, n, seed, workers=workers)
                rows.append({
                    "gamma": gamma, "g": g,
                    "p_transverse": ps["transverse_xy"].estimate,
                    "p_longitudinal": ps["longitudinal_xy"].estimate,
                    "delta_p": ps["transverse_xy"].estimate - ps["longitudinal_xy"].estimate,
                    "std_error": float(np.hypot(ps["transverse_xy"].std_error,
                                                ps["longitudinal_xy"].std_error)),
                    "n": n,
                })
        write_csv(csv_path, ["gamma", "g", "p_transverse", "p_longitudinal",
                             "delta_p", "std_error", "n"], rows)
        if plot:
            png = out_dir / "p-curve.png"
            plotting.plot_delta_p(rows, png)
            outputs.append(png)
        return outputs, {}, []

    sweep_field, sweep_key = ("delta", "delta_values") if family == "xxz" else ("gamma", "gamma_values")
    sweep = cfg.get(sweep_key, [cfg.get(sweep_field, 1.0)])
    ranks = cfg.get("rank_values", [cfg.get("rank")])
    restarts = int(cfg.get("restarts", 32))
    maxiter = int(cfg.get("maxiter", 5000))

    rows = []
    nonconverged: list[str] = []
    for val in sweep:
        spec0 = model_from_config(cfg, family=family, **{sweep_field: float(val)})
        for rank in ranks:
            sampler = _sampler_from_config(cfg, spec0.dims, rank)
            target_name = cfg.get("target", default_target_name(sampler))
            resolver = _RangeResolver(target_name, restarts, maxiter, seed)
            for g in g_grid:
                spec = spec0.replace(g=float(g))
                rng = resolver.resolve(spec)
                try:
                    rep = estimate_p(sampler, spec, rng, n, seed, workers=workers)
                except ValueError as err:
                    raise ConfigError(str(err)) from err
                rows.append({
                    "family": family, "sampler": sampler.family, "rank": rank,
                    "gamma": spec.gamma, "delta": spec.delta, "g": g,
                    "eps1": rng.lo, "eps2": rng.hi,
                    "p": rep.estimate, "std_error": rep.std_error, "n": n,
                })
            nonconverged.extend(resolver.nonconverged)
    write_csv(csv_path, ["family", "sampler", "rank", "gamma", "delta", "g",
                         "eps1", "eps2", "p", "std_error", "n"], rows)
    if plot:
        png = out_dir / "p-curve.png"
        plotting.plot_p_curve(rows, png)
        outputs.append(png)
    return outputs, {}, nonconverged


def cmd_hist(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    n = int(cfg.get("n_samples", 100_000))
    bins = int(cfg.get("bins", 200))
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    family = cfg.get("family", "transverse_xy")
    ranks = cfg.get("rank_values", [cfg.get("rank")])
    g_values = cfg.get("g_values", [cfg.get("g", 1.0)])
    rows = []
    for rank in ranks:
        for g in g_values:
            spec = model_from_config(cfg, family=family, g=float(g))
            sampler = _sampler_from_config(cfg, spec.dims, rank)
            rep = energy_histogram(sampler, spec, bins, n, seed, workers=workers)
            assert rep.counts is not None and rep.bin_edges is not None
            dens = rep.density()
            for k in range(bins):
                rows.append({
                    "rank": rank, "g": g,
                    "bin_lo": float(rep.bin_edges[k]), "bin_hi": float(rep.bin_edges[k + 1]),
                    "count": int(rep.counts[k]), "density": float(dens[k]),
                })
    csv_path = out_dir / "hist.csv"
    write_csv(csv_path, ["rank", "g", "bin_lo", "bin_hi", "count", "density"], rows)
    outputs = [csv_path]
    if plot:
        png = out_dir / "hist.png"
        plotting.plot_hist(rows, png)
        outputs.append(png)
    return outputs, {}, []


def cmd_thermal(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    family = cfg.get("family", "transverse_xy")
    g_grid = [float(g) for g in cfg.get("g_grid", _DEFAULT_G_GRID)]
    beta_grid = [float(b) for b in cfg.get("beta_grid", _DEFAULT_BETA_GRID)]
    spec = model_from_config(cfg, family=family)
    target_name = cfg.get("target", "psi_minus")
    rng = target_energy_bounds_analytic(spec, target_name)
    if rng is None:
        raise ConfigError(f"no analytic target interval for {family} + {target_name}")
    try:
        boundary = thermal_boundary(spec, g_grid, rng)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    grid = thermal_concurrence_grid(spec, g_grid, beta_grid, rng)

    grid_rows = [
        {"g": g, "beta": b, "energy": e, "concurrence": c, "wcec": ok}
        for (g, b, e, c, ok) in grid
    ]
    bnd_rows = [
        {"g": g, "beta_star": bs, "has_boundary": bs is not None} for (g, bs) in boundary
    ]
    grid_path = out_dir / "thermal_grid.csv"
    bnd_path = out_dir / "thermal_boundary.csv"
    write_csv(grid_path, ["g", "beta", "energy", "concurrence", "wcec"], grid_rows)
    write_csv(bnd_path, ["g", "beta_star", "has_boundary"], bnd_rows)
    outputs = [grid_path, bnd_path]
    if plot:
        png = out_dir / "thermal.png"
        plotting.plot_thermal(grid_rows, bnd_rows, png)
        outputs.append(png)
    return outputs, {}, []


_MAG_AXES = ("cxx", "cyy", "czz", "m1", "m2")


def cmd_bell_volume(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    axes = cfg.get("axes", ["m1", "m2"])
    if len(axes) != 2 or any(a not in _MAG_AXES for a in axes) or axes[0] == axes[1]:
        raise ConfigError(f"axes must be two distinct names among {_MAG_AXES}")
    fixed = {"cxx": 0.5, "cyy": 0.2, "czz": 0.3, "m1": 0.0, "m2": 0.0}
    fixed.update(cfg.get("fixed", {}))
    unknown = set(cfg.get("fixed", {})) - set(_MAG_AXES)
    if unknown:
        raise ConfigError(f"unknown fixed parameters {sorted(unknown)}")
    npts = int(cfg.get("grid_points", 201))
    g_values = [float(g) for g in cfg.get("g_values", [1.0, 2.0])]
    family = cfg.get("family", "transverse_xy")
    target_name = cfg.get("target", "psi_minus")
    seed = int(cfg["seed"])

    coords = np.linspace(-1.0, 1.0, npts)
    xv, yv = np.meshgrid(coords, coords, indexing="ij")
    params = np.tile([fixed[a] for a in _MAG_AXES], (npts * npts, 1))
    ix, iy = _MAG_AXES.index(axes[0]), _MAG_AXES.index(axes[1])
    params[:, ix] = xv.ravel()
    params[:, iy] = yv.ravel()

    rows = []
    witness = None
    for g in g_values:
        spec = model_from_config(cfg, family=family, g=g)
        rng = target_energy_bounds_analytic(spec, target_name)
        if rng is None:
            raise ConfigError(f"no analytic target interval for {family} + {target_name}")
        labels = classify_magnetized(params, spec, rng)
        for (x, y, lab) in zip(xv.ravel(), yv.ravel(), labels):
            rows.append({"g": g, "x": float(x), "y": float(y), "label": lab})
        if witness is None:
            witness = find_nonconvexity_witness(
                spec, rng, n=int(cfg.get("witness_samples", 100_000)), seed=seed
            )
    csv_path = out_dir / "bell-volume.csv"
    write_csv(csv_path, ["g", "x", "y", "label"], rows)
    outputs = [csv_path]
    extra: dict[str, Any] = {"axes": list(axes), "fixed": fixed}
    if witness is not None:
        wit_path = out_dir / "bell-volume.witness.json"
        wit_path.write_text(json.dumps(witness.to_dict(), indent=2, sort_keys=True) + "\n")
        outputs.append(wit_path)
        extra["nonconvexity_witness_found"] = True
    else:
        extra["nonconvexity_witness_found"] = False
    if plot:
        png = out_dir / "bell-volume.png"
        plotting.plot_bell_volume(rows, png, axes[0], axes[1])
        outputs.append(png)
    return outputs, extra, []


def cmd_qutrit(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    n = int(cfg.get("n_samples", 100_000))
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    theta_grid = [float(t) for t in cfg.get("theta_grid", _DEFAULT_THETA_GRID)]
    g_grid = [float(g) for g in cfg.get("g_grid", _DEFAULT_G_GRID[::2])]
    restarts = int(cfg.get("restarts", 32))
    maxiter = int(cfg.get("maxiter", 5000))
    sampler = StateSampler("pure", dims=(3, 3))
    phi3 = target_state("phi", 3)
    rows = []
    nonconverged = []
    for theta in theta_grid:
        spec0 = model_from_config(cfg, family="bilinear_biquadratic", theta=theta, g=0.0)
        # the maximally entangled target feels no field: one interval per theta
        res = target_energy_range(spec0, phi3, restarts=restarts, maxiter=maxiter, seed=seed)
        if not res.converged:
            nonconverged.append(f"theta={theta}")
        for g in g_grid:
            spec = spec0.replace(g=g)
            rep = estimate_p(sampler, spec, res.range, n, seed, workers=workers)
            rows.append({
                "theta": theta, "g": g, "eps1": res.range.lo, "eps2": res.range.hi,
                "p": rep.estimate, "std_error": rep.std_error, "n": n,
            })
    csv_path = out_dir / "qutrit.csv"
    write_csv(csv_path, ["theta", "g", "eps1", "eps2", "p", "std_error", "n"], rows)
    outputs = [csv_path]
    if plot:
        png = out_dir / "qutrit.png"
        plotting.plot_qutrit(rows, png)
        outputs.append(png)
    return outputs, {}, nonconverged


def cmd_df(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    n = int(cfg.get("n_samples", 1_000_000))
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    ranks = [int(r) for r in cfg.get("rank_values", [2, 3, 4])]
    rows = []
    for rank in ranks:
        rep = estimate_df(rank, n, seed, workers=workers)
        rows.append({"rank": rank, "eta": rep.estimate, "std_error": rep.std_error, "n": n})
    csv_path = out_dir / "df.csv"
    write_csv(csv_path, ["rank", "eta", "std_error", "n"], rows)
    json_path = out_dir / "df.json"
    json_path.write_text(json.dumps({"seed": seed, "ranks": rows}, indent=2, sort_keys=True) + "\n")
    outputs = [csv_path, json_path]
    if plot:
        png = out_dir / "df.png"
        plotting.plot_df(rows, png)
        outputs.append(png)
    return outputs, {}, []


def cmd_independence(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    n = int(cfg.get("n_samples", 1_000_000))
    bins = int(cfg.get("bins", 20))
    rank = int(cfg.get("rank", 4))
    seed = int(cfg["seed"])
    workers = int(cfg["workers"])
    spec = model_from_config(cfg, family=cfg.get("family", "transverse_xy"))
    rep = independence_check(
        rank, spec, n, bins, seed, workers=workers,
        min_bin_count=int(cfg.get("min_bin_count", 10_000)),
    )
    fractions = rep.fractions
    rows = []
    for k in range(bins):
        rows.append({
            "bin_lo": float(rep.bin_edges[k]), "bin_hi": float(rep.bin_edges[k + 1]),
            "count": int(rep.counts[k]), "dist_count": int(rep.dist_counts[k]),
            "fraction": None if rep.counts[k] == 0 else float(fractions[k]),
            "populated": bool(rep.well_populated[k]),
        })
    csv_path = out_dir / "independence.csv"
    write_csv(csv_path, ["bin_lo", "bin_hi", "count", "dist_count", "fraction", "populated"], rows)
    json_path = out_dir / "independence.json"
    json_path.write_text(json.dumps({
        "rank": rank, "n_samples": n, "seed": seed,
        "eta_global": rep.eta_global,
        "max_abs_deviation": rep.max_abs_deviation,
        "min_bin_count": rep.min_bin_count,
    }, indent=2, sort_keys=True) + "\n")
    outputs = [csv_path, json_path]
    if plot:
        png = out_dir / "independence.png"
        plotting.plot_independence(rows, rep.eta_global, png)
        outputs.append(png)
    return outputs, {}, []


def cmd_prange(cfg: dict, out_dir: Path, plot: bool) -> tuple[list[Path], dict]:
    family = cfg.get("family", "transverse_xy")
    seed = int(cfg["seed"])
    restarts = int(cfg.get("restarts", 32))
    maxiter = int(cfg.get("maxiter", 5000))
    spec0 = model_from_config(cfg, family=family)
    sampler_dims = spec0.dims
    target_name = cfg.get("target")
    if target_name is None:
        target_name = {(2, 2): "psi_minus", (3, 3): "phi", (2, 2, 2): "ghz3"}.get(sampler_dims)
        if target_name is None:
            raise ConfigError("set 'target' explicitly for this model")
    target = _target(target_name, sampler_dims)
    g_grid = cfg.get("g_grid")
    if g_grid is None:
        g_grid = _DEFAULT_G_GRID if target_name == "w3" else [spec0.g]
    rows = []
    nonconverged = []
    for g in [float(g) for g in g_grid]:
        spec = spec0.replace(g=g)
        res = target_energy_range(spec, target, restarts=restarts, maxiter=maxiter, seed=seed)
        if not res.converged:
            nonconverged.append(f"g={g}")
        bounds = state_energy_bounds(spec)
        rows.append({
            "g": g, "eps1": res.range.lo, "eps2": res.range.hi,
            "state_lo": bounds.lo, "state_hi": bounds.hi,
            "converged": res.converged, "restarts": res.restarts_used,
        })
    csv_path = out_dir / "prange.csv"
    write_csv(csv_path, ["g", "eps1", "eps2", "state_lo", "state_hi", "converged", "restarts"], rows)
    outputs = [csv_path]
    if plot:
        png = out_dir / "prange.png"
        plotting.plot_prange(rows, png)
        outputs.append(png)
    problems = [f"{family} target {target_name}: {m}" for m in nonconverged]
    return outputs, {}, problems


COMMANDS: dict[str, Callable[[dict, Path, bool], tuple[list[Path], dict, list[str]]]] = {
    "spectrum": cmd_spectrum,
    "p-curve": cmd_p_curve,
    "hist": cmd_hist,
    "thermal": cmd_thermal,
    "bell-volume": cmd_bell_volume,
    "qutrit": cmd_qutrit,
    "df": cmd_df,
    "independence": cmd_independence,
    "prange": cmd_prange,
}


def load_config(command: str, args: argparse.Namespace) -> dict:
    cfg: dict[str, Any] = {}
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file {path} does not exist")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file {path} is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        cfg.update(data)
    unknown = set(cfg) - COMMAND_KEYS[command]
    if unknown:
        raise ConfigError(
            f"unknown config keys for {command}: {sorted(unknown)}; "
            f"allowed: {sorted(COMMAND_KEYS[command])}"
        )
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.workers is not None:
        cfg["workers"] = args.workers
    if args.out is not None:
        cfg["out"] = args.out
    cfg.setdefault("seed", 0)
    cfg.setdefault("workers", 1)
    cfg.setdefault("out", "out")
    if int(cfg["seed"]) < 0:
        raise ConfigError("seed must be nonnegative")
    if int(cfg["workers"]) < 1:
        raise ConfigError("workers must be at least 1")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="candist",
        description="Energy-constrained distillability experiments (CSV + PNG reports)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", help="flat JSON run configuration")
        p.add_argument("--seed", type=int, help="master RNG seed (overrides config)")
        p.add_argument("--workers", type=int, help="worker threads (overrides config)")
        p.add_argument("--out", help="output directory (overrides config)")
        p.add_argument("--no-plot", action="store_true", help="skip PNG rendering")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = load_config(args.command, args)
        out_dir = Path(cfg["out"])
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs, extra, problems = COMMANDS[args.command](cfg, out_dir, not args.no_plot)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    if problems:
        extra = {**extra, "nonconverged": problems}
    write_manifest(out_dir, args.command, cfg, outputs, started, extra)
    for path in outputs:
        print(path)
    if problems:
        print("optimizer did not converge: " + "; ".join(problems), file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
