"""Comparison metric and sweep engine contracts."""

from dataclasses import replace

import numpy as np
import pytest

from vrabi.analysis import (
    cell_params,
    compare,
    sweep,
    two_level_params,
)
from vrabi.dynamics import IntegratorConfig, evolve
from vrabi.model import ModelParams, initial_state

BASE = ModelParams(g_ab=0.02, g_ac=0.01, omega_ac=1.7, omega_0=1.0, n_bar=10.0, n_max=200)
FAST = IntegratorConfig(dt=0.01, t_end=50.0, sample_every=0.5)


def test_cell_params_scales_axes():
    p = cell_params(BASE, ratio=0.25, placement=1.4)
    assert p.g_ac == 0.25 * BASE.g_ab
    assert p.omega_ac == 1.4 * BASE.omega_ab
    assert p.g_ab == BASE.g_ab


def test_two_level_params_only_drops_gac():
    p2 = two_level_params(BASE)
    assert p2.g_ac == 0.0
    assert replace(p2, g_ac=BASE.g_ac) == BASE


class TestCompare:
    def test_identical_grids_and_diff_definition(self):
        res = compare(BASE, FAST)
        assert np.array_equal(res.three_level.times, res.two_level.times)
        assert np.array_equal(res.diff, np.abs(res.three_level.p_b - res.two_level.p_b))
        assert res.mean_abs_diff == float(res.diff.mean())
        assert 0.0 <= res.mean_abs_diff <= 1.0

    def test_gac_zero_is_exactly_degenerate(self):
        res = compare(two_level_params(BASE), FAST)
        assert res.mean_abs_diff == 0.0
        assert np.all(res.diff == 0.0)

    def test_precomputed_baseline_is_bit_exact(self):
        p2 = two_level_params(BASE)
        baseline = evolve(initial_state(p2), p2, FAST)
        fresh = compare(BASE, FAST)
        reused = compare(BASE, FAST, two_level=baseline)
        assert fresh.mean_abs_diff == reused.mean_abs_diff
        assert fresh.diff.tobytes() == reused.diff.tobytes()
        assert fresh.two_level.p_b.tobytes() == reused.two_level.p_b.tobytes()

    def test_baseline_with_foreign_settings_rejected(self):
        p2 = two_level_params(BASE)
        other_cfg = IntegratorConfig(dt=0.01, t_end=40.0, sample_every=0.5)
        baseline = evolve(initial_state(p2), p2, other_cfg)
        with pytest.raises(ValueError, match="baseline"):
            compare(BASE, FAST, two_level=baseline)
        three = evolve(initial_state(BASE), BASE, FAST)
        with pytest.raises(ValueError, match="baseline"):
            compare(BASE, FAST, two_level=three)

    def test_metric_stable_under_grid_refinement(self):
        cfg = IntegratorConfig(dt=0.01, t_end=500.0, sample_every=0.5)
        coarse = compare(BASE, cfg).mean_abs_diff
        finer_samples = compare(
            BASE, replace(cfg, sample_every=0.25)
        ).mean_abs_diff
        finer_step = compare(BASE, replace(cfg, dt=0.005)).mean_abs_diff
        assert abs(coarse - finer_samples) < 1e-6
        assert abs(coarse - finer_step) < 1e-6

    def test_error_shrinks_with_coupling_ratio(self):
        cfg = IntegratorConfig(dt=0.01, t_end=500.0, sample_every=0.5)
        p2 = two_level_params(BASE)
        baseline = evolve(initial_state(p2), p2, cfg)
        errs = [
            compare(replace(BASE, g_ac=r * BASE.g_ab), cfg, two_level=baseline).mean_abs_diff
            for r in (0.01, 0.1, 1.0)
        ]
        assert errs[0] < errs[1] < errs[2]


class TestSweep:
    def test_axis_validation(self):
        with pytest.raises(ValueError):
            sweep(BASE, FAST, ratios=[], placements=[1.3])
        with pytest.raises(ValueError):
            sweep(BASE, FAST, ratios=[0.5], placements=[])
        with pytest.raises(ValueError):
            sweep(BASE, FAST, ratios=[-0.1], placements=[1.3])
        with pytest.raises(ValueError):
            sweep(BASE, FAST, ratios=[0.5], placements=[1.0])
        with pytest.raises(ValueError):
            sweep(BASE, FAST, ratios=[0.5], placements=[1.3], worker_count=0)

    def test_zero_ratio_row_is_zero(self):
        surf = sweep(BASE, FAST, ratios=[0.0, 0.5], placements=[1.3, 1.7])
        assert np.all(surf.errors[0] == 0.0)
        assert np.all(surf.errors[1] > 0.0)

    def test_worker_count_does_not_change_bits(self):
        grids = dict(ratios=[0.25, 1.0], placements=[1.3, 1.7])
        serial = sweep(BASE, FAST, worker_count=1, **grids)
        pooled = sweep(BASE, FAST, worker_count=2, **grids)
        assert serial.errors.tobytes() == pooled.errors.tobytes()
        assert serial.failures == pooled.failures

    def test_cell_equals_standalone_compare(self):
        surf = sweep(BASE, FAST, ratios=[0.5], placements=[1.3])
        standalone = compare(cell_params(BASE, 0.5, 1.3), FAST)
        assert surf.errors[0, 0] == standalone.mean_abs_diff

    def test_failed_cell_is_isolated(self, monkeypatch):
        # one cell aborts mid-run; its neighbours and the summary must survive
        import vrabi.analysis as analysis
        from vrabi.dynamics import TruncationOverflow

        real_compare = analysis.compare

        def flaky_compare(params, cfg, two_level=None):
            if params.omega_ac == 1.7:
                raise TruncationOverflow("population 1 in Fock indices >= 6 at t=3", t=3.0)
            return real_compare(params, cfg, two_level=two_level)

        monkeypatch.setattr(analysis, "compare", flaky_compare)
        surf = sweep(BASE, FAST, ratios=[0.5], placements=[1.3, 1.7], worker_count=1)
        assert len(surf.failures) == 1
        failure = surf.failures[0]
        assert (failure.ratio_index, failure.placement_index) == (0, 1)
        assert "TruncationOverflow" in failure.message
        assert np.isnan(surf.errors[0, 1])
        assert np.isfinite(surf.errors[0, 0])

    def test_surface_carries_provenance(self):
        surf = sweep(BASE, FAST, ratios=[0.5], placements=[1.3, 1.7])
        assert surf.base_params == BASE
        assert surf.config == FAST
        assert surf.errors.shape == (1, 2)
