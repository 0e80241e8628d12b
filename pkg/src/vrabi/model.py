"""Physical parameters and the parity-chain state layout.

The system is a V-type three-level atom coupled to one quantized field
mode: ground state |a> couples upward to the excited states |b> and |c>,
with real coupling constants g_ab and g_ac and no direct b-c coupling.
The atom starts in |b>, the field in a coherent state with mean photon
number n_bar.  All frequencies are expressed in units of the a-b
transition frequency (omega_ab = 1) and time in its inverse.

Because the interaction only connects |n, a> with |n+-1, b> and
|n+-1, c> (counter-rotating terms included), the joint parity of photon
number and atomic level is conserved.  The state therefore splits into
two closed chains that never mix: even photon number in |a> together
with odd photon number in |b>, |c>, and the converse.  Each chain is
stored as three dense ladders of length n_max + 1 whose wrong-parity
slots are identically zero; the 2x memory cost is negligible and keeps
ladder indexing trivial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "LEVELS",
    "ModelParams",
    "ChainParity",
    "ChainState",
    "SystemState",
    "coherent_weights",
    "initial_state",
    "population",
    "merged_amplitudes",
]

LEVELS = ("a", "b", "c")


@dataclass(frozen=True)
class ModelParams:
    """Physical constants plus the numerical controls tied to the state.

    Attributes
    ----------
    omega_ab, omega_ac : float
        Transition frequencies of |a>-|b> and |a>-|c>.  omega_ab is the
        frequency unit and should normally stay at 1.
    omega_0 : float
        Field mode frequency.
    g_ab, g_ac : float
        Real, nonnegative couplings of the field to the two transitions
        (any coupling phase is absorbed into the level states).
    n_bar : float
        Mean photon number of the initial coherent state.
    alpha_phase : float
        Phase of the coherent amplitude alpha = sqrt(n_bar) e^{i phase}.
    n_max : int
        Inclusive photon-number truncation of the Fock ladder.
    init_mass_tol : float
        Largest tolerated probability mass clipped off the initial
        coherent state by the truncation.  Raising it permits deliberately
        tight truncations (used when cross-checking against the dense
        reference propagator at small n_max).
    """

    omega_ab: float = 1.0
    omega_ac: float = 1.7
    omega_0: float = 1.0
    g_ab: float = 0.02
    g_ac: float = 0.01
    n_bar: float = 10.0
    alpha_phase: float = 0.0
    n_max: int = 200
    init_mass_tol: float = 1e-6

    def __post_init__(self):
        if self.omega_ab <= 0 or self.omega_ac <= 0 or self.omega_0 <= 0:
            raise ValueError("frequencies omega_ab, omega_ac, omega_0 must be positive")
        if self.g_ab < 0 or self.g_ac < 0:
            raise ValueError("couplings g_ab, g_ac must be nonnegative")
        if self.n_bar < 0:
            raise ValueError("n_bar must be nonnegative")
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError("n_max must be an integer >= 1")
        object.__setattr__(self, "n_max", int(self.n_max))
        if self.init_mass_tol <= 0:
            raise ValueError("init_mass_tol must be positive")

    # Detunings of the co-rotating (omega - omega_0) and counter-rotating
    # (omega + omega_0) interaction terms.
    @property
    def delta_ab(self) -> float:
        return self.omega_ab - self.omega_0

    @property
    def delta_ab_prime(self) -> float:
        return self.omega_ab + self.omega_0

    @property
    def delta_ac(self) -> float:
        return self.omega_ac - self.omega_0

    @property
    def delta_ac_prime(self) -> float:
        return self.omega_ac + self.omega_0


class ChainParity(Enum):
    """Which of the two decoupled parity chains a state belongs to.

    EVEN_A: even photon number in |a>, odd in |b> and |c>.
    ODD_A:  odd photon number in |a>, even in |b> and |c>.
    """

    EVEN_A = "even_a"
    ODD_A = "odd_a"

    def level_parity(self, level: str) -> int:
        """Photon-number parity (0 even, 1 odd) this chain stores for `level`."""
        if level not in LEVELS:
            raise ValueError(f"unknown level {level!r}")
        a_parity = 0 if self is ChainParity.EVEN_A else 1
        return a_parity if level == "a" else 1 - a_parity

    def owns(self, n: int, level: str) -> bool:
        """True if basis label (n, level) lives on this chain."""
        return n % 2 == self.level_parity(level)


def _as_ladder(x, n_max: int) -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.shape != (n_max + 1,):
        raise ValueError(f"ladder must have shape ({n_max + 1},), got {arr.shape}")
    return arr


@dataclass(frozen=True)
class ChainState:
    """Amplitudes of one parity chain on the truncated Fock ladder.

    a, b, c hold the ladders for the three levels; entries at indices of
    the wrong parity are zero by construction and stay zero under
    evolution.  Treated as immutable value data: evolution copies, never
    mutates in place.
    """

    parity: ChainParity
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        n_max = len(self.a) - 1
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, _as_ladder(getattr(self, name), n_max))

    @property
    def n_max(self) -> int:
        return len(self.a) - 1

    def stacked(self) -> np.ndarray:
        """Copy of the amplitudes as a (3, n_max + 1) array, rows a, b, c."""
        return np.stack((self.a, self.b, self.c))

    def norm(self) -> float:
        return float(
            np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2 + np.abs(self.c) ** 2)
        )

    def parity_defect(self) -> float:
        """Largest amplitude magnitude sitting on a forbidden-parity slot."""
        n = np.arange(self.n_max + 1)
        defect = 0.0
        for level, ladder in zip(LEVELS, (self.a, self.b, self.c)):
            wrong = n % 2 != self.parity.level_parity(level)
            if wrong.any():
                defect = max(defect, float(np.max(np.abs(ladder[wrong]))))
        return defect


@dataclass(frozen=True)
class SystemState:
    """Full interaction-picture state: the pair of decoupled parity chains."""

    even_chain: ChainState
    odd_chain: ChainState
    t: float = 0.0

    def __post_init__(self):
        if self.even_chain.parity is not ChainParity.EVEN_A:
            raise ValueError("even_chain must have EVEN_A parity")
        if self.odd_chain.parity is not ChainParity.ODD_A:
            raise ValueError("odd_chain must have ODD_A parity")
        if self.even_chain.t != self.t or self.odd_chain.t != self.t:
            raise ValueError("both chains must carry the system time")
        if self.even_chain.n_max != self.odd_chain.n_max:
            raise ValueError("chains must share one truncation")

    @property
    def n_max(self) -> int:
        return self.even_chain.n_max

    def norm(self) -> float:
        return self.even_chain.norm() + self.odd_chain.norm()


def coherent_weights(
    n_bar: float, alpha_phase: float, n_max: int, mass_tol: float = 1e-6
) -> np.ndarray:
    """Fock expansion w_n = e^{-n_bar/2} alpha^n / sqrt(n!) of |alpha>.

    alpha = sqrt(n_bar) e^{i alpha_phase}.  Built by the stable recurrence
    w_{n+1} = w_n alpha / sqrt(n+1); n! is never formed.  Rejects
    truncations that clip more than `mass_tol` of the state's norm.
    """
    if n_bar < 0:
        raise ValueError("n_bar must be nonnegative")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    alpha = math.sqrt(n_bar) * complex(math.cos(alpha_phase), math.sin(alpha_phase))
    w = np.zeros(n_max + 1, dtype=np.complex128)
    w[0] = math.exp(-0.5 * n_bar)
    for n in range(n_max):
        w[n + 1] = w[n] * alpha / math.sqrt(n + 1)
    mass = float(np.sum(np.abs(w) ** 2))
    if mass < 1.0 - mass_tol:
        raise ValueError(
            f"truncation n_max={n_max} clips the coherent state: "
            f"captured norm {mass:.12g} < 1 - {mass_tol:g}"
        )
    return w


def initial_state(params: ModelParams) -> SystemState:
    """Atom in |b>, field coherent; amplitudes routed onto the two chains.

    b_n with even n lives where |b> holds even photon numbers, i.e. the
    ODD_A chain; odd-n amplitudes go to the EVEN_A chain.
    """
    w = coherent_weights(
        params.n_bar, params.alpha_phase, params.n_max, params.init_mass_tol
    )
    n = np.arange(params.n_max + 1)
    even_n = n % 2 == 0
    zeros = np.zeros_like(w)
    even_chain = ChainState(
        parity=ChainParity.EVEN_A,
        a=zeros.copy(),
        b=np.where(~even_n, w, 0.0),
        c=zeros.copy(),
    )
    odd_chain = ChainState(
        parity=ChainParity.ODD_A,
        a=zeros.copy(),
        b=np.where(even_n, w, 0.0),
        c=zeros.copy(),
    )
    return SystemState(even_chain=even_chain, odd_chain=odd_chain)


def population(state: SystemState, level: str) -> float:
    """Total population of one atomic level, summed over both chains.

    The per-index contributions of the two chains are added elementwise
    before the single reduction, so the result is bit-identical to the
    same sum taken over a flat, unchained layout.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    x = getattr(state.even_chain, level)
    y = getattr(state.odd_chain, level)
    return float(np.sum(np.abs(x) ** 2 + np.abs(y) ** 2))


def merged_amplitudes(state: SystemState) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flat (unchained) ladders: the two chains occupy disjoint slots."""
    return (
        state.even_chain.a + state.odd_chain.a,
        state.even_chain.b + state.odd_chain.b,
        state.even_chain.c + state.odd_chain.c,
    )
