"""Integrator contracts: sampling, conservation laws, failure diagnostics."""

import numpy as np
import pytest

from vrabi.dynamics import (
    IntegratorConfig,
    NormDrift,
    TruncationOverflow,
    advance_chain,
    chain_rhs,
    convergence_check,
    evolve,
)
from vrabi.model import (
    ChainParity,
    ChainState,
    ModelParams,
    initial_state,
)


def random_chain(parity, n_max, seed, parity_clean=True, unit_norm=True):
    rng = np.random.default_rng(seed)
    n = np.arange(n_max + 1)
    ladders = []
    for level in ("a", "b", "c"):
        amp = rng.normal(size=n_max + 1) + 1j * rng.normal(size=n_max + 1)
        if parity_clean:
            amp[n % 2 != parity.level_parity(level)] = 0.0
        ladders.append(amp)
    chain = ChainState(parity, *ladders)
    if unit_norm:
        s = np.sqrt(chain.norm())
        chain = ChainState(parity, chain.a / s, chain.b / s, chain.c / s)
    return chain


class TestIntegratorConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"dt": 0.0},
            {"dt": -0.1},
            {"t_end": 0.0},
            {"dt": 0.5, "sample_every": 0.1},
            {"norm_tol": 0.0},
            {"tail_tol": -1.0},
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            IntegratorConfig(**kwargs)

    def test_sample_times_regular(self):
        ts = IntegratorConfig(t_end=2500.0, sample_every=0.5).sample_times()
        assert len(ts) == 5001
        assert ts[0] == 0.0
        assert ts[-1] == 2500.0
        assert np.all(np.diff(ts) > 0)

    def test_sample_times_ragged_end(self):
        ts = IntegratorConfig(t_end=10.3, sample_every=0.5).sample_times()
        assert ts[-1] == 10.3
        assert ts[-2] == 10.0
        assert np.all(np.diff(ts) > 0)


class TestChainRhs:
    def test_zero_coupling_gives_zero(self):
        p = ModelParams(g_ab=0.0, g_ac=0.0, n_max=12)
        chain = random_chain(ChainParity.EVEN_A, 12, seed=1)
        da, db, dc = chain_rhs(0.3, chain, p)
        assert np.all(da == 0) and np.all(db == 0) and np.all(dc == 0)

    def test_single_a1_amplitude(self):
        # one quantum in |1, a>: at t=0 only b/c neighbours at n=0, 2 respond
        p = ModelParams(g_ab=0.02, g_ac=0.007, n_max=6)
        a = np.zeros(7, complex)
        a[1] = 1.0
        z = np.zeros(7, complex)
        chain = ChainState(ChainParity.ODD_A, a, z.copy(), z.copy())
        da, db, dc = chain_rhs(0.0, chain, p)
        assert np.all(da == 0)
        assert db[0] == -1j * 0.02 * np.sqrt(1)
        assert db[2] == pytest.approx(-1j * 0.02 * np.sqrt(2), abs=1e-17)
        assert dc[0] == -1j * 0.007 * np.sqrt(1)
        assert dc[2] == pytest.approx(-1j * 0.007 * np.sqrt(2), abs=1e-17)
        mask = np.ones(7, bool)
        mask[[0, 2]] = False
        assert np.all(db[mask] == 0) and np.all(dc[mask] == 0)

    @pytest.mark.parametrize("parity", list(ChainParity))
    @pytest.mark.parametrize("t", [0.0, 0.37, 12.9])
    def test_norm_preservation_identity(self, parity, t):
        # Hermitian generator: Re<y, dy/dt> = 0 for any state
        p = ModelParams(g_ab=0.05, g_ac=0.03, omega_ac=1.4, omega_0=0.97, n_max=24)
        chain = random_chain(parity, 24, seed=42, parity_clean=False)
        da, db, dc = chain_rhs(t, chain, p)
        inner = (
            np.vdot(chain.a, da) + np.vdot(chain.b, db) + np.vdot(chain.c, dc)
        )
        assert abs(inner.real) < 1e-14

    def test_parity_closure(self):
        # a parity-clean state has a parity-clean derivative
        p = ModelParams(g_ab=0.05, g_ac=0.03, n_max=15)
        for parity in ChainParity:
            chain = random_chain(parity, 15, seed=3)
            da, db, dc = chain_rhs(1.7, chain, p)
            deriv = ChainState(parity, da, db, dc)
            assert deriv.parity_defect() == 0.0

    def test_truncation_matches_params(self):
        p = ModelParams(n_max=8)
        chain = random_chain(ChainParity.EVEN_A, 10, seed=5)
        with pytest.raises(ValueError):
            chain_rhs(0.0, chain, p)


class TestEvolve:
    def test_zero_coupling_keeps_pb_flat(self):
        p = ModelParams(g_ab=0.0, g_ac=0.0, n_bar=4.0, n_max=60)
        ts = evolve(initial_state(p), p, IntegratorConfig(dt=0.01, t_end=5.0))
        assert np.all(ts.p_b == ts.p_b[0])
        assert np.all(ts.p_a == 0.0)
        assert abs(ts.p_b[0] - 1.0) < 1e-12

    def test_grid_and_provenance(self):
        p = ModelParams(n_bar=2.0, n_max=40)
        cfg = IntegratorConfig(dt=0.01, t_end=3.2, sample_every=0.5)
        ts = evolve(initial_state(p), p, cfg)
        assert ts.times[0] == 0.0
        assert ts.times[-1] == 3.2
        assert ts.params == p
        assert ts.config == cfg
        assert len(ts) == len(ts.p_b) == len(ts.norm)

    def test_requires_t0(self):
        p = ModelParams(n_bar=0.0, n_max=6)
        state = initial_state(p)
        moved = advance_chain(state.odd_chain, p, 1.0, 0.01)
        from vrabi.model import SystemState

        shifted = SystemState(
            even_chain=advance_chain(state.even_chain, p, 1.0, 0.01),
            odd_chain=moved,
            t=1.0,
        )
        with pytest.raises(ValueError):
            evolve(shifted, p, IntegratorConfig(t_end=2.0))

    def test_zero_chain_stays_exactly_zero(self):
        # vacuum initial condition leaves the EVEN_A chain empty; it must stay so
        p = ModelParams(g_ab=0.1, g_ac=0.05, n_bar=0.0, n_max=12)
        state = initial_state(p)
        assert state.even_chain.norm() == 0.0
        out = advance_chain(state.even_chain, p, 37.7, 0.01)
        assert np.all(out.a == 0) and np.all(out.b == 0) and np.all(out.c == 0)

    def test_two_level_reduction_exact(self):
        # with g_ac = 0 the c ladder never populates and omega_ac is inert
        runs = []
        for omega_ac in (1.3, 1.7):
            p = ModelParams(g_ab=0.02, g_ac=0.0, omega_ac=omega_ac, n_bar=10, n_max=200)
            ts = evolve(initial_state(p), p, IntegratorConfig(dt=0.01, t_end=30.0))
            assert np.all(ts.p_c == 0.0)
            runs.append(ts)
        assert runs[0].p_b.tobytes() == runs[1].p_b.tobytes()

    def test_norm_conservation_production_slice(self):
        p = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, n_bar=10, n_max=200)
        ts = evolve(initial_state(p), p, IntegratorConfig(dt=0.01, t_end=100.0))
        assert np.max(np.abs(ts.norm - ts.norm[0])) < 1e-10

    def test_advance_chain_consistent_with_evolve(self):
        p = ModelParams(g_ab=0.05, g_ac=0.02, omega_ac=1.5, n_bar=1.0, n_max=24)
        cfg = IntegratorConfig(dt=0.01, t_end=3.0, sample_every=0.5)
        series = evolve(initial_state(p), p, cfg)
        state = initial_state(p)
        even = advance_chain(state.even_chain, p, 3.0, cfg.dt)
        odd = advance_chain(state.odd_chain, p, 3.0, cfg.dt)
        pb = float(np.sum(np.abs(even.b) ** 2 + np.abs(odd.b) ** 2))
        # sample-segmented vs single-segment stepping differ only in the
        # floating representation of intermediate stage times
        assert pb == pytest.approx(series.p_b[-1], abs=1e-12)

    def test_norm_drift_aborts(self):
        p = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, n_bar=10, n_max=200)
        cfg = IntegratorConfig(dt=1.0, t_end=50.0, sample_every=1.0)
        with pytest.raises(NormDrift) as err:
            evolve(initial_state(p), p, cfg)
        assert err.value.t > 0

    def test_truncation_overflow_aborts(self):
        # vacuum + very strong coupling climbs the ladder into the monitor band
        p = ModelParams(g_ab=0.5, g_ac=0.0, n_bar=0.0, n_max=6)
        cfg = IntegratorConfig(dt=0.001, t_end=50.0, sample_every=0.5)
        with pytest.raises(TruncationOverflow) as err:
            evolve(initial_state(p), p, cfg)
        assert err.value.t > 0


class TestConvergence:
    def test_passes_at_production_step(self):
        p = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, n_bar=10, n_max=200)
        cfg = IntegratorConfig(dt=0.01, t_end=100.0, sample_every=0.5)
        report = convergence_check(p, cfg)
        assert report.passed
        assert report.max_pb_deviation < 1e-6

    def test_zero_coupling_trivially_converged(self):
        p = ModelParams(g_ab=0.0, g_ac=0.0, n_bar=2.0, n_max=40)
        report = convergence_check(p, IntegratorConfig(dt=0.01, t_end=5.0))
        assert report.passed
        assert report.max_pb_deviation == 0.0

    def test_absurd_step_fails(self):
        # dt = 1 cannot resolve the counter-rotating phase at ~2 omega_ab
        p = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, n_bar=10, n_max=200)
        cfg = IntegratorConfig(dt=1.0, t_end=50.0, sample_every=1.0)
        with pytest.raises(NormDrift):
            convergence_check(p, cfg)

    def test_fourth_order_step_halving(self):
        # error against a dt/4 reference should shrink ~16x per halving
        p = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, n_bar=10, n_max=200)
        base = 0.025
        runs = []
        for k in (1, 2, 4):
            cfg = IntegratorConfig(dt=base / k, t_end=100.0, sample_every=1.0)
            runs.append(evolve(initial_state(p), p, cfg))
        err_coarse = np.max(np.abs(runs[0].p_b - runs[2].p_b))
        err_half = np.max(np.abs(runs[1].p_b - runs[2].p_b))
        ratio = err_coarse / err_half
        assert 8.0 < ratio < 24.0
