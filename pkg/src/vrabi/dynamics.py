"""Fixed-step integration of the parity-chain amplitude equations.

The equations of motion live in the interaction picture, so the stiff
free-evolution frequencies are already folded into explicit phase
factors e^{+-i (omega +- omega_0) t}; what remains is integrated with
classic fourth-order Runge-Kutta at a fixed step chosen to resolve the
fastest counter-rotating phase (about 230 steps per period at the
defaults).  The two chains share no data and are advanced independently.

Every sampled point records the three level populations and the total
norm.  Two self-diagnostics abort a run that cannot be trusted:

* NormDrift          -- the norm moved away from its initial value by
                        more than norm_tol (step too large),
* TruncationOverflow -- population reached the top 5% of the Fock
                        ladder (n_max too small for the dynamics).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .model import ChainState, ModelParams, SystemState, initial_state

__all__ = [
    "IntegratorConfig",
    "TimeSeries",
    "IntegrationError",
    "NormDrift",
    "TruncationOverflow",
    "ConvergenceReport",
    "chain_rhs",
    "advance_chain",
    "evolve",
    "convergence_check",
]


class IntegrationError(RuntimeError):
    """A run aborted by one of the self-diagnostics; carries the time."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


class NormDrift(IntegrationError):
    pass


class TruncationOverflow(IntegrationError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    """Step size, horizon, sampling and abort thresholds for one run.

    All times are in units of 1/omega_ab.
    """

    dt: float = 0.01
    t_end: float = 2500.0
    sample_every: float = 0.5
    norm_tol: float = 1e-9
    tail_tol: float = 1e-6

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.sample_every < self.dt:
            raise ValueError("sample_every must be >= dt")
        if self.norm_tol <= 0 or self.tail_tol <= 0:
            raise ValueError("tolerances must be positive")

    def sample_times(self) -> np.ndarray:
        """Multiples of sample_every up to t_end, with t_end always last."""
        n = int(math.floor(self.t_end / self.sample_every + 1e-9))
        ts = np.arange(n + 1) * self.sample_every
        if self.t_end - ts[-1] > 1e-9 * self.sample_every:
            ts = np.append(ts, self.t_end)
        else:
            ts[-1] = self.t_end
        return ts


@dataclass(frozen=True)
class TimeSeries:
    """Sampled populations and norm of one run, with full provenance."""

    times: np.ndarray
    p_a: np.ndarray
    p_b: np.ndarray
    p_c: np.ndarray
    norm: np.ndarray
    params: ModelParams
    config: IntegratorConfig

    def __len__(self) -> int:
        return len(self.times)


class _Work:
    """Split real/imag planes of one chain, in kernel layout."""

    def __init__(self, chain: ChainState):
        y = chain.stacked()
        self.re = np.ascontiguousarray(y.real)
        self.im = np.ascontiguousarray(y.imag)

    def density(self) -> np.ndarray:
        return self.re**2 + self.im**2

    def complex_rows(self) -> np.ndarray:
        return self.re + 1j * self.im


def _kernel_args(params: ModelParams):
    sq = np.sqrt(np.arange(params.n_max + 2, dtype=np.float64))
    return (
        params.g_ab * sq,
        params.g_ac * sq,
        params.delta_ab,
        params.delta_ab_prime,
        params.delta_ac,
        params.delta_ac_prime,
    )


def chain_rhs(
    t: float, chain: ChainState, params: ModelParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Time derivative (da, db, dc) of one chain's amplitudes at time t."""
    if chain.n_max != params.n_max:
        raise ValueError("chain truncation does not match params.n_max")
    w = _Work(chain)
    outr = np.empty_like(w.re)
    outi = np.empty_like(w.im)
    _kernels.chain_rhs(t, w.re, w.im, outr, outi, *_kernel_args(params))
    out = outr + 1j * outi
    return out[0], out[1], out[2]


def _segment_split(span: float, dt: float) -> tuple[int, float]:
    """Split a time span into full dt steps plus a shortened last step."""
    n_full = int(math.floor(span / dt + 1e-9))
    h_last = span - n_full * dt
    if h_last <= 1e-9 * dt:
        h_last = 0.0
    return n_full, h_last


def _advance(w: _Work, t0: float, t1: float, dt: float, args) -> None:
    n_full, h_last = _segment_split(t1 - t0, dt)
    if n_full:
        _kernels.rk4_advance(w.re, w.im, t0, n_full, dt, *args)
    if h_last:
        _kernels.rk4_advance(w.re, w.im, t0 + n_full * dt, 1, h_last, *args)


def advance_chain(
    chain: ChainState, params: ModelParams, t_to: float, dt: float
) -> ChainState:
    """Integrate one chain from its current time to t_to; returns a new state."""
    if t_to < chain.t:
        raise ValueError("cannot integrate backwards")
    w = _Work(chain)
    _advance(w, chain.t, t_to, dt, _kernel_args(params))
    y = w.complex_rows()
    return ChainState(parity=chain.parity, a=y[0], b=y[1], c=y[2], t=t_to)


def _tail_start(n_max: int) -> int:
    # top 5% of the Fock ladder, at least one slot
    return n_max + 1 - max(1, (n_max + 1) // 20)


def evolve(state: SystemState, params: ModelParams, cfg: IntegratorConfig) -> TimeSeries:
    """Advance both chains to t_end, sampling populations and norm.

    The final sample always lands exactly on t_end (the last step of a
    sampling segment is shortened when the grid requires it).  Raises
    NormDrift or TruncationOverflow as soon as a sampled point violates
    the corresponding tolerance.
    """
    if state.t != 0.0:
        raise ValueError("evolve expects the state at t = 0")
    if state.n_max != params.n_max:
        raise ValueError("state truncation does not match params.n_max")

    times = cfg.sample_times()
    args = _kernel_args(params)
    even = _Work(state.even_chain)
    odd = _Work(state.odd_chain)

    n_samples = len(times)
    p_a = np.empty(n_samples)
    p_b = np.empty(n_samples)
    p_c = np.empty(n_samples)
    norm = np.empty(n_samples)
    tail0 = _tail_start(params.n_max)

    norm_ref = 0.0
    for k, t_k in enumerate(times):
        if k:
            _advance(even, times[k - 1], t_k, cfg.dt, args)
            _advance(odd, times[k - 1], t_k, cfg.dt, args)
        dens = even.density() + odd.density()
        p_a[k], p_b[k], p_c[k] = dens.sum(axis=1)
        norm[k] = p_a[k] + p_b[k] + p_c[k]
        if k == 0:
            norm_ref = norm[0]
        elif abs(norm[k] - norm_ref) > cfg.norm_tol:
            raise NormDrift(
                f"norm drifted to {norm[k]:.15g} (start {norm_ref:.15g}) at "
                f"t={t_k:g}; reduce dt",
                t=float(t_k),
            )
        tail = float(dens[:, tail0:].sum())
        if tail > cfg.tail_tol:
            raise TruncationOverflow(
                f"population {tail:.3g} in Fock indices >= {tail0} at t={t_k:g}; "
                f"increase n_max",
                t=float(t_k),
            )

    return TimeSeries(
        times=times,
        p_a=p_a,
        p_b=p_b,
        p_c=p_c,
        norm=norm,
        params=params,
        config=cfg,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    dt: float
    dt_half: float
    max_pb_deviation: float
    tolerance: float
    passed: bool


def convergence_check(
    params: ModelParams, cfg: IntegratorConfig, tolerance: float = 1e-6
) -> ConvergenceReport:
    """Step-halving self-test: rerun at dt/2 and compare P_b samplewise."""
    coarse = evolve(initial_state(params), params, cfg)
    fine_cfg = replace(cfg, dt=cfg.dt / 2.0)
    fine = evolve(initial_state(params), params, fine_cfg)
    dev = float(np.max(np.abs(coarse.p_b - fine.p_b)))
    return ConvergenceReport(
        dt=cfg.dt,
        dt_half=fine_cfg.dt,
        max_pb_deviation=dev,
        tolerance=tolerance,
        passed=dev < tolerance,
    )
