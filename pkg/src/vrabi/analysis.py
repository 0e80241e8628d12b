"""Two-level vs three-level comparison metrics and the parameter sweep.

The error a third level induces on the two-level picture is measured by
evolving the same initial condition twice, with the |c> coupling as
given and with it switched off, on identical time grids, and averaging
the absolute difference of the |b> populations uniformly over the
horizon.  The sweep engine maps that scalar over a grid of coupling
ratios g_ac/g_ab and level placements omega_ac/omega_ab.

Since the two-level reference does not depend on g_ac or omega_ac at
all, one baseline run serves every cell of a sweep; results are
bit-identical to recomputing it per cell.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .dynamics import IntegrationError, IntegratorConfig, TimeSeries, evolve
from .model import ModelParams, initial_state

__all__ = [
    "ComparisonResult",
    "CellFailure",
    "ErrorSurface",
    "compare",
    "sweep",
    "DEFAULT_RATIOS",
    "DEFAULT_PLACEMENTS",
]

DEFAULT_RATIOS = (0.1, 0.5, 1.0)
DEFAULT_PLACEMENTS = tuple(np.round(np.linspace(1.1, 2.0, 19), 10))


def two_level_params(params: ModelParams) -> ModelParams:
    """The same model with the additional level decoupled."""
    return replace(params, g_ac=0.0)


def _check_baseline(params: ModelParams, cfg: IntegratorConfig, base: TimeSeries):
    ref = two_level_params(params)
    got = base.params
    # omega_ac is irrelevant once g_ac = 0; everything else must match
    if (
        got.g_ac != 0.0
        or replace(got, omega_ac=ref.omega_ac) != ref
        or base.config != cfg
    ):
        raise ValueError("two-level baseline was produced with incompatible settings")


@dataclass(frozen=True)
class ComparisonResult:
    """Paired runs with and without the third level, on one time grid."""

    three_level: TimeSeries
    two_level: TimeSeries
    diff: np.ndarray
    mean_abs_diff: float


def compare(
    params: ModelParams,
    cfg: IntegratorConfig,
    two_level: TimeSeries | None = None,
) -> ComparisonResult:
    """Absolute |b>-population difference with vs without the third level.

    A precomputed two-level baseline may be passed in to avoid rerunning
    it (it only depends on params with g_ac = 0); it is validated against
    params and cfg.  The averaged metric is the plain uniform mean of
    |P_b difference| over all samples of the horizon.
    """
    if two_level is None:
        p2 = two_level_params(params)
        two_level = evolve(initial_state(p2), p2, cfg)
    else:
        _check_baseline(params, cfg, two_level)
    three_level = evolve(initial_state(params), params, cfg)
    diff = np.abs(three_level.p_b - two_level.p_b)
    return ComparisonResult(
        three_level=three_level,
        two_level=two_level,
        diff=diff,
        mean_abs_diff=float(diff.mean()),
    )


@dataclass(frozen=True)
class CellFailure:
    ratio_index: int
    placement_index: int
    message: str


@dataclass(frozen=True)
class ErrorSurface:
    """Mean absolute population difference over a (ratio, placement) grid.

    errors[i, j] belongs to coupling_ratios[i] and placements[j]; cells
    whose run aborted hold NaN and are listed in failures.  The config
    records the averaging window the surface was computed over.
    """

    coupling_ratios: np.ndarray
    placements: np.ndarray
    errors: np.ndarray
    base_params: ModelParams
    config: IntegratorConfig
    failures: tuple[CellFailure, ...] = ()


def cell_params(base: ModelParams, ratio: float, placement: float) -> ModelParams:
    """Model for one sweep cell: g_ac and omega_ac set from the grid axes."""
    return replace(
        base,
        g_ac=ratio * base.g_ab,
        omega_ac=placement * base.omega_ab,
    )


# worker-process context, set once per worker by the pool initializer
_CTX: dict = {}


def _init_worker(cfg: IntegratorConfig, baseline: TimeSeries) -> None:
    _CTX["cfg"] = cfg
    _CTX["baseline"] = baseline


def _run_cell(task):
    i, j, params = task
    try:
        res = compare(params, _CTX["cfg"], two_level=_CTX["baseline"])
        return i, j, res.mean_abs_diff, None
    except IntegrationError as exc:
        return i, j, float("nan"), f"{type(exc).__name__}: {exc}"


def sweep(
    base: ModelParams,
    cfg: IntegratorConfig,
    ratios=None,
    placements=None,
    worker_count: int = 1,
) -> ErrorSurface:
    """Fill the error surface cell by cell; cells are independent runs.

    Grid points may be distributed over a process pool; assembly is
    indexed by grid position, so the surface is bit-identical for any
    worker_count.  A cell whose run aborts is recorded as NaN with its
    diagnostic, and the sweep continues.  Failure of the shared two-level
    baseline aborts the whole sweep (every cell needs it).
    """
    ratios = np.asarray(DEFAULT_RATIOS if ratios is None else ratios, dtype=float)
    placements = np.asarray(
        DEFAULT_PLACEMENTS if placements is None else placements, dtype=float
    )
    if ratios.size == 0 or placements.size == 0:
        raise ValueError("sweep axes must be non-empty")
    if np.any(ratios < 0):
        raise ValueError("coupling ratios must be nonnegative")
    if np.any(placements <= 1):
        raise ValueError("placements must exceed 1 (level above the b transition)")
    if worker_count < 1:
        raise ValueError("worker_count must be >= 1")

    p2 = two_level_params(base)
    baseline = evolve(initial_state(p2), p2, cfg)

    tasks = [
        (i, j, cell_params(base, r, w))
        for i, r in enumerate(ratios)
        for j, w in enumerate(placements)
    ]
    errors = np.full((ratios.size, placements.size), np.nan)
    failures: list[CellFailure] = []

    if worker_count == 1:
        _init_worker(cfg, baseline)
        collected = [_run_cell(task) for task in tasks]
    else:
        with ProcessPoolExecutor(
            max_workers=worker_count,
            initializer=_init_worker,
            initargs=(cfg, baseline),
        ) as pool:
            collected = list(pool.map(_run_cell, tasks))

    for i, j, value, message in collected:
        errors[i, j] = value
        if message is not None:
            failures.append(CellFailure(i, j, message))
    failures.sort(key=lambda f: (f.ratio_index, f.placement_index))

    return ErrorSurface(
        coupling_ratios=ratios,
        placements=placements,
        errors=errors,
        base_params=base,
        config=cfg,
        failures=tuple(failures),
    )
