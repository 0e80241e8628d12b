"""Slow-but-sure reference solutions used to validate the integrator.

Two independent routes:

* a dense propagator that diagonalizes the full Hamiltonian on the flat
  truncated basis |n, l> once and evaluates e^{-iHt} exactly for any t,
  then strips the free evolution to land in the same interaction picture
  as the chain integrator;
* the closed-form resonant RWA solution for the two-level reduction with
  the atom initially excited, P_b(t) = sum_n p_n cos^2(g sqrt(n+1) t)
  with Poisson weights p_n.

Both are deliberately independent of the production code path: the dense
route never touches the chain layout or the Runge-Kutta kernels.  Dense
work is restricted to small truncations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import ModelParams, coherent_weights

__all__ = [
    "DenseHamiltonian",
    "build_hamiltonian",
    "DensePropagator",
    "propagate_dense",
    "rwa_pb",
]

# flat basis index: 3*n + level with levels ordered (a, b, c)
_LEVEL_INDEX = {"a": 0, "b": 1, "c": 2}

MAX_DENSE_N = 256


def flat_index(n: int, level: str) -> int:
    return 3 * n + _LEVEL_INDEX[level]


@dataclass(frozen=True)
class DenseHamiltonian:
    """Full Hamiltonian and its non-interacting diagonal on the flat basis."""

    matrix: np.ndarray
    free_diag: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


def build_hamiltonian(params: ModelParams) -> DenseHamiltonian:
    """Dense Hamiltonian on the flat basis |n, l>, n <= n_max, l in (a, b, c).

    Diagonal: n*omega_0 for |n, a>, plus omega_ab (omega_ac) for the b (c)
    levels.  The field quadrature couples |n, a> to both |n+1, l> and
    |n-1, l> for l in (b, c) with matrix element g * sqrt of the larger
    photon number; entries are assigned symmetrically so Hermiticity is
    exact.
    """
    n_states = params.n_max + 1
    dim = 3 * n_states
    h = np.zeros((dim, dim))
    free = np.zeros(dim)
    for n in range(n_states):
        free[flat_index(n, "a")] = n * params.omega_0
        free[flat_index(n, "b")] = params.omega_ab + n * params.omega_0
        free[flat_index(n, "c")] = params.omega_ac + n * params.omega_0
    h[np.diag_indices(dim)] = free
    for n in range(params.n_max):
        amp = np.sqrt(n + 1.0)
        for level, g in (("b", params.g_ab), ("c", params.g_ac)):
            # counter-rotating: |n, a> <-> |n+1, l>
            i, j = flat_index(n, "a"), flat_index(n + 1, level)
            h[i, j] = h[j, i] = g * amp
            # co-rotating: |n+1, a> <-> |n, l>
            i, j = flat_index(n + 1, "a"), flat_index(n, level)
            h[i, j] = h[j, i] = g * amp
    return DenseHamiltonian(matrix=h, free_diag=free)


class DensePropagator:
    """Exact e^{-iHt} for the truncated model via one eigendecomposition.

    The returned amplitudes carry the interaction-picture convention of
    the chain integrator: each Schroedinger-picture coefficient is
    multiplied by e^{+i E0 t} with E0 the free-evolution diagonal, so
    they are directly comparable with the evolved chain amplitudes.
    """

    def __init__(self, params: ModelParams):
        if params.n_max > MAX_DENSE_N:
            raise ValueError(
                f"dense propagation capped at n_max <= {MAX_DENSE_N} "
                f"(got {params.n_max}); use the chain integrator instead"
            )
        self.params = params
        self.hamiltonian = build_hamiltonian(params)
        self._evals, self._evecs = np.linalg.eigh(self.hamiltonian.matrix)
        w = coherent_weights(
            params.n_bar, params.alpha_phase, params.n_max, params.init_mass_tol
        )
        psi0 = np.zeros(self.hamiltonian.dimension, dtype=np.complex128)
        psi0[1::3] = w  # atom starts in |b>
        self._modes = self._evecs.conj().T @ psi0

    def schrodinger_state(self, t: float) -> np.ndarray:
        """Schroedinger-picture coefficients at time t, flat layout."""
        return self._evecs @ (np.exp(-1j * self._evals * t) * self._modes)

    def amplitudes(self, t: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interaction-picture ladders (a, b, c) at time t."""
        amps = np.exp(1j * self.hamiltonian.free_diag * t) * self.schrodinger_state(t)
        return amps[0::3], amps[1::3], amps[2::3]

    def populations(self, t: float) -> tuple[float, float, float]:
        dens = np.abs(self.schrodinger_state(t)) ** 2
        return float(dens[0::3].sum()), float(dens[1::3].sum()), float(dens[2::3].sum())

    def pb_series(self, times: np.ndarray) -> np.ndarray:
        """P_b sampled on an array of times (one matmul per call)."""
        times = np.asarray(times, dtype=float)
        # columns: modal coefficients evolved to each sample time
        phases = np.exp(-1j * np.outer(self._evals, times)) * self._modes[:, None]
        psi = self._evecs @ phases
        return np.sum(np.abs(psi[1::3, :]) ** 2, axis=0)


def propagate_dense(
    params: ModelParams, t: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One-shot interaction-picture amplitudes at time t (a, b, c ladders)."""
    return DensePropagator(params).amplitudes(t)


def rwa_pb(params: ModelParams, t) -> np.ndarray | float:
    """Resonant RWA two-level solution for P_b, atom initially in |b>.

    Valid regime: g_ac = 0, omega_0 = omega_ab, g_ab << omega_ab; the
    caller is responsible for staying in it.  Accepts scalar or array t.
    """
    p = np.abs(coherent_weights(params.n_bar, params.alpha_phase, params.n_max)) ** 2
    rabi = params.g_ab * np.sqrt(np.arange(1, params.n_max + 2, dtype=float))
    t_arr = np.asarray(t, dtype=float)
    out = np.cos(np.outer(t_arr, rabi)) ** 2 @ p
    return float(out[0]) if np.isscalar(t) else out.reshape(t_arr.shape)
