"""Command-line front end: batch experiments that emit CSV/JSON/SVG files.

Three commands cover the standard experiments:

* ``simulate`` -- one run, populations and norm over time,
* ``compare``  -- the same run with and without the third level, plus the
  absolute |b>-population difference and its horizon average,
* ``sweep``    -- that average over a grid of coupling ratios and level
  placements.

Configuration is a flat JSON object; every command-line flag overrides
its JSON counterpart, and every run writes ``run.json`` with all
resolved values, which can be fed back via ``--config`` to reproduce the
output bit for bit.  Exit codes: 0 success, 2 invalid configuration,
3 numerical failure (norm drift / truncation overflow), 4 sweep finished
with failed cells.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import (
    DEFAULT_PLACEMENTS,
    DEFAULT_RATIOS,
    compare,
    sweep,
)
from .dynamics import IntegrationError, IntegratorConfig, evolve
from .model import ModelParams, initial_state
from .svg import Curve, line_chart

__all__ = ["main", "entry", "RunConfig", "default_config", "load_config"]

_MODEL_KEYS = (
    "omega_ab",
    "omega_ac",
    "omega_0",
    "g_ab",
    "g_ac",
    "n_bar",
    "alpha_phase",
    "n_max",
    "init_mass_tol",
)
_INTEGRATOR_KEYS = ("dt", "t_end", "sample_every", "norm_tol", "tail_tol")
_OTHER_KEYS = ("ratios", "placements", "workers", "emit_svg")

# flag destination -> config key
_FLAG_KEYS = {
    "g_ab": "g_ab",
    "g_ac": "g_ac",
    "w_ac": "omega_ac",
    "w0": "omega_0",
    "nbar": "n_bar",
    "nmax": "n_max",
    "dt": "dt",
    "t_end": "t_end",
    "workers": "workers",
}


def default_config() -> dict:
    """The full flat configuration with every default resolved."""
    cfg: dict = {}
    model = ModelParams()
    for key in _MODEL_KEYS:
        cfg[key] = getattr(model, key)
    integ = IntegratorConfig()
    for key in _INTEGRATOR_KEYS:
        cfg[key] = getattr(integ, key)
    cfg["ratios"] = [float(r) for r in DEFAULT_RATIOS]
    cfg["placements"] = [float(w) for w in DEFAULT_PLACEMENTS]
    cfg["workers"] = 1
    cfg["emit_svg"] = False
    return cfg


def load_config(path: str | os.PathLike | None) -> dict:
    """Defaults overlaid with the JSON file at `path` (if given).

    Unknown keys are rejected so typos cannot silently fall back to
    defaults; the "command" key written into run.json is tolerated, which
    lets a run.json be fed straight back in.
    """
    cfg = default_config()
    if path is None:
        return cfg
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = set(cfg) | {"command"}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ValueError(f"unknown config keys: {', '.join(unknown)}")
    data.pop("command", None)
    cfg.update(data)
    return cfg


@dataclass(frozen=True)
class RunConfig:
    """Validated bundle of everything one command needs."""

    model: ModelParams
    integrator: IntegratorConfig
    ratios: tuple
    placements: tuple
    workers: int
    emit_svg: bool
    out_dir: Path


def _build_run_config(args: argparse.Namespace) -> RunConfig:
    cfg = load_config(args.config)
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest)
        if value is not None:
            cfg[key] = value
    if args.svg:
        cfg["emit_svg"] = True

    model = ModelParams(**{k: cfg[k] for k in _MODEL_KEYS})
    integrator = IntegratorConfig(**{k: cfg[k] for k in _INTEGRATOR_KEYS})
    workers = int(cfg["workers"])
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return RunConfig(
        model=model,
        integrator=integrator,
        ratios=tuple(float(r) for r in cfg["ratios"]),
        placements=tuple(float(w) for w in cfg["placements"]),
        workers=workers,
        emit_svg=bool(cfg["emit_svg"]),
        out_dir=Path(args.out),
    )


def _resolved_flat(rc: RunConfig, command: str) -> dict:
    out: dict = {"command": command}
    for key in _MODEL_KEYS:
        out[key] = getattr(rc.model, key)
    for key in _INTEGRATOR_KEYS:
        out[key] = getattr(rc.integrator, key)
    out["ratios"] = list(rc.ratios)
    out["placements"] = list(rc.placements)
    out["workers"] = rc.workers
    out["emit_svg"] = rc.emit_svg
    return out


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _write_csv(path: Path, header: str, columns) -> None:
    lines = [header]
    for row in zip(*columns):
        lines.append(",".join(_fmt(float(v)) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def _write_json(path: Path, obj) -> None:
    _write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def cmd_simulate(rc: RunConfig) -> int:
    series = evolve(initial_state(rc.model), rc.model, rc.integrator)
    rc.out_dir.mkdir(parents=True, exist_ok=True)
    _write_csv(
        rc.out_dir / "timeseries.csv",
        "t,p_a,p_b,p_c,norm",
        (series.times, series.p_a, series.p_b, series.p_c, series.norm),
    )
    _write_json(rc.out_dir / "run.json", _resolved_flat(rc, "simulate"))
    if rc.emit_svg:
        chart = line_chart(
            [Curve("P_b", series.times, series.p_b, color="#d62728")],
            title="Population of |b>",
            x_label="t [1/omega_ab]",
            y_label="P_b",
        )
        _write_text(rc.out_dir / "pb.svg", chart)
    return 0


def cmd_compare(rc: RunConfig) -> int:
    if rc.model.g_ac == 0.0:
        raise ValueError(
            "compare needs g_ac > 0: with g_ac = 0 both runs are identical"
        )
    result = compare(rc.model, rc.integrator)
    rc.out_dir.mkdir(parents=True, exist_ok=True)
    three, two = result.three_level, result.two_level
    _write_csv(
        rc.out_dir / "compare.csv",
        "t,p_b_3l,p_b_2l,abs_diff",
        (three.times, three.p_b, two.p_b, result.diff),
    )
    _write_json(rc.out_dir / "summary.json", {"mean_abs_diff": result.mean_abs_diff})
    _write_json(rc.out_dir / "run.json", _resolved_flat(rc, "compare"))
    if rc.emit_svg:
        chart = line_chart(
            [
                Curve("two-level", two.times, two.p_b, color="#2ca02c", dash="6,3"),
                Curve("three-level", three.times, three.p_b, color="#d62728"),
                Curve("|difference|", three.times, result.diff, color="#1f77b4", dash="2,3"),
            ],
            title="Two-level vs three-level population of |b>",
            x_label="t [1/omega_ab]",
            y_label="P_b",
        )
        _write_text(rc.out_dir / "compare.svg", chart)
    return 0


def cmd_sweep(rc: RunConfig) -> int:
    surface = sweep(
        rc.model,
        rc.integrator,
        ratios=rc.ratios,
        placements=rc.placements,
        worker_count=rc.workers,
    )
    rc.out_dir.mkdir(parents=True, exist_ok=True)
    g_col, w_col, e_col = [], [], []
    for i, r in enumerate(surface.coupling_ratios):
        for j, w in enumerate(surface.placements):
            g_col.append(r)
            w_col.append(w)
            e_col.append(surface.errors[i, j])
    _write_csv(
        rc.out_dir / "surface.csv", "g_ratio,w_ratio,mean_abs_diff", (g_col, w_col, e_col)
    )
    failures = [
        {
            "g_ratio": float(surface.coupling_ratios[f.ratio_index]),
            "w_ratio": float(surface.placements[f.placement_index]),
            "message": f.message,
        }
        for f in surface.failures
    ]
    _write_json(rc.out_dir / "surface_errors.json", {"failures": failures})
    _write_json(rc.out_dir / "run.json", _resolved_flat(rc, "sweep"))
    if rc.emit_svg:
        palette = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
        curves = []
        for i, r in enumerate(surface.coupling_ratios):
            row = surface.errors[i]
            good = ~np.isnan(row)
            if good.any():
                curves.append(
                    Curve(
                        f"g_ac/g_ab = {r:g}",
                        surface.placements[good],
                        row[good],
                        color=palette[i % len(palette)],
                    )
                )
        chart = line_chart(
            curves,
            title="Two-level approximation error vs level placement",
            x_label="omega_ac / omega_ab",
            y_label="mean |P_b difference|",
        )
        _write_text(rc.out_dir / "surface.svg", chart)
    if failures:
        print(f"sweep finished with {len(failures)} failed cells", file=sys.stderr)
        return 4
    return 0


_COMMANDS = {"simulate": cmd_simulate, "compare": cmd_compare, "sweep": cmd_sweep}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vrabi",
        description=(
            "Population dynamics of a V-type three-level atom coupled to a "
            "quantized field beyond the rotating-wave approximation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "run one model and write the population time series"),
        ("compare", "run with and without the third level and write the difference"),
        ("sweep", "map the mean population difference over a parameter grid"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", metavar="PATH", help="flat JSON configuration file")
        p.add_argument("--out", metavar="DIR", required=True, help="output directory")
        p.add_argument("--g-ab", dest="g_ab", type=float, help="coupling on a-b")
        p.add_argument("--g-ac", dest="g_ac", type=float, help="coupling on a-c")
        p.add_argument("--w-ac", dest="w_ac", type=float, help="a-c transition frequency")
        p.add_argument("--w0", dest="w0", type=float, help="field frequency")
        p.add_argument("--nbar", dest="nbar", type=float, help="mean photon number")
        p.add_argument("--nmax", dest="nmax", type=int, help="Fock truncation")
        p.add_argument("--dt", dest="dt", type=float, help="integrator step")
        p.add_argument("--t-end", dest="t_end", type=float, help="integration horizon")
        p.add_argument("--workers", dest="workers", type=int, help="sweep worker count")
        p.add_argument("--svg", action="store_true", help="also write SVG plots")
        p.set_defaults(func=_COMMANDS[name])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        rc = _build_run_config(args)
        rc.out_dir.mkdir(parents=True, exist_ok=True)
    except (ValueError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"vrabi: configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(rc)
    except ValueError as exc:
        print(f"vrabi: configuration error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"vrabi: numerical failure: {exc}", file=sys.stderr)
        return 3


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
