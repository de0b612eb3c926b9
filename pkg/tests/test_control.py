"""Three-stage controller: stage behavior, budgets, voting, enumeration."""

import numpy as np
import pytest

from mediamatch.channel import SurfaceConfig
from mediamatch.control import (DEFAULT_VOLTAGE_SET, ControlState, ControlTrace,
                                brute_force_baseline, column_groups, config_hash,
                                element_groups, run_controller,
                                stage1_uniform_probe, stage2_majority_voting,
                                stage3_fine_tune)

import oracles

V1, V0 = 30.0, 0.0


def onoff_oracle(h, h_env=0j, s_on=1.0, s_off=0.0, on_voltage=V1):
    """Feedback for a synthetic channel with binary element response."""
    h = np.asarray(h, dtype=complex)

    def oracle(cfg: SurfaceConfig) -> float:
        s = np.array([s_on if v == on_voltage else s_off for v in cfg.voltages])
        mag = abs(h_env + np.sum(s * h))
        return 20 * np.log10(mag) if mag > 0 else float("-inf")

    return oracle


class TestStage1:
    def test_extremes_on_monotone_toy(self):
        """Response magnitude rising as the voltage falls: v1 = 0 V, v0 = 30 V."""
        level = {v: i + 1.0 for i, v in enumerate(DEFAULT_VOLTAGE_SET)}

        def oracle(cfg):
            return 20 * np.log10(level[cfg.voltages[0]])

        v1, v0, trace = stage1_uniform_probe(oracle, DEFAULT_VOLTAGE_SET, 4)
        assert v1 == 0.0 and v0 == 30.0
        assert trace.stage_probe_count(1) == len(DEFAULT_VOLTAGE_SET)

    def test_constant_oracle_flagged(self):
        v1, v0, trace = stage1_uniform_probe(lambda cfg: -3.0, DEFAULT_VOLTAGE_SET, 4)
        assert trace.low_contrast
        assert v1 == v0 == 30.0  # ties break toward the higher voltage

    def test_probe_count_is_set_size(self):
        _, _, trace = stage1_uniform_probe(lambda cfg: cfg.voltages[0], (30.0, 10.0, 0.0), 2)
        assert trace.budget_used == 3


class TestStage2:
    def test_two_element_opposed_channel(self):
        """h = (+1, -1): the optimum turns on exactly one element (|h| = 1).

        Enumeration of the 4 on/off configs shows both single-element configs
        tie at the top; seed 0 is one of the seeds whose random draw makes the
        vote resolve to a single element.
        """
        oracle = onoff_oracle([1.0, -1.0])
        on, off, trace = stage2_majority_voting(oracle, V1, V0, 2, n_configs=4, rng_seed=0)
        assert len(on) == 1
        assert on | off == {0, 1}
        cfg = SurfaceConfig(tuple(V1 if i in on else V0 for i in range(2)))
        assert oracle(cfg) == pytest.approx(0.0, abs=1e-12)  # |h_TR| = 1

    def test_probe_count_exact(self):
        oracle = onoff_oracle(np.ones(8))
        _, _, trace = stage2_majority_voting(oracle, V1, V0, 8, n_configs=16, rng_seed=1)
        assert trace.stage_probe_count(2) == 16

    def test_aligned_channel_on_fraction_grows(self):
        """All paths in phase: every element should be on; the voting
        majority approaches all-on as the config budget grows."""
        oracle = onoff_oracle(np.ones(32))
        fractions = {}
        for n_cfg in (64, 1024):
            on_counts = []
            for seed in range(30):
                on, _, _ = stage2_majority_voting(oracle, V1, V0, 32,
                                                  n_configs=n_cfg, rng_seed=seed)
                on_counts.append(len(on) / 32)
            fractions[n_cfg] = float(np.median(on_counts))
        assert fractions[1024] > fractions[64]
        assert fractions[1024] == 1.0

    def test_aligned_all_on_at_large_budget(self):
        """At 32x the element count the full-on config is recovered almost
        always (98/100 seeds at N = 32)."""
        oracle = onoff_oracle(np.ones(32))
        hits = 0
        for seed in range(100):
            on, _, _ = stage2_majority_voting(oracle, V1, V0, 32,
                                              n_configs=1024, rng_seed=seed)
            hits += int(len(on) == 32)
        assert hits >= 95

    def test_equal_voltages_rejected(self):
        with pytest.raises(ValueError):
            stage2_majority_voting(lambda c: 0.0, 5.0, 5.0, 4)

    def test_group_granularity(self):
        oracle = onoff_oracle(np.ones(8))
        groups = column_groups(2, 4)
        on, off, _ = stage2_majority_voting(oracle, V1, V0, 8, n_configs=32,
                                            rng_seed=3, groups=groups)
        # group membership is preserved: each column is all-on or all-off
        for col in groups:
            assert set(col) <= on or set(col) <= off


class TestStage3:
    def test_adopts_strict_improvement(self):
        """Feedback prefers (20 V, 2.5 V) over the stage-2 (30 V, 0 V) pick."""
        target = {(20.0, 2.5): 0.0}

        def oracle(cfg):
            key = (max(cfg.voltages), min(cfg.voltages))
            return target.get(key, -10.0)

        state = ControlState(v1=30.0, v0=0.0, on_set=frozenset({0}), off_set=frozenset({1}))
        trace = ControlTrace()
        final = stage3_fine_tune(oracle, DEFAULT_VOLTAGE_SET, state, 2, trace)
        assert max(final.voltages) == 20.0 and min(final.voltages) == 2.5
        assert trace.stage_probe_count(3) <= 9

    def test_keeps_stage2_config_when_no_improvement(self):
        oracle = onoff_oracle([1.0, 1.0])
        state = ControlState(v1=V1, v0=V0, on_set=frozenset({0, 1}), off_set=frozenset())
        trace = ControlTrace()
        trace.record(2, SurfaceConfig((V1, V1)), oracle(SurfaceConfig((V1, V1))))
        final = stage3_fine_tune(oracle, DEFAULT_VOLTAGE_SET, state, 2, trace)
        assert final.voltages == (V1, V1)

    def test_probe_budget(self):
        state = ControlState(v1=15.0, v0=5.0, on_set=frozenset({0}), off_set=frozenset({1}))
        trace = ControlTrace()
        stage3_fine_tune(lambda c: 0.0, DEFAULT_VOLTAGE_SET, state, 2, trace)
        assert trace.stage_probe_count(3) == 9  # interior voltages: full 3x3 grid


class TestRunController:
    def test_budget_for_default_array(self):
        rng = np.random.default_rng(0)
        h = rng.normal(size=64) + 1j * rng.normal(size=64)
        oracle = onoff_oracle(h)
        cfg, trace = run_controller(oracle, 64, rng_seed=5)
        assert trace.stage_probe_count(1) == len(DEFAULT_VOLTAGE_SET)
        assert trace.stage_probe_count(2) == 128
        assert trace.stage_probe_count(3) <= 9
        assert trace.budget_used <= 145

    def test_final_is_argmax_over_all_probes(self):
        rng = np.random.default_rng(1)
        h = rng.normal(size=16) + 1j * rng.normal(size=16)
        oracle = onoff_oracle(h)
        cfg, trace = run_controller(oracle, 16, rng_seed=6)
        assert oracle(cfg) == pytest.approx(max(p.rss_db for p in trace.probes), abs=1e-12)

    def test_deterministic_trace(self):
        rng = np.random.default_rng(2)
        h = rng.normal(size=16) + 1j * rng.normal(size=16)
        a_cfg, a_trace = run_controller(onoff_oracle(h), 16, rng_seed=7)
        b_cfg, b_trace = run_controller(onoff_oracle(h), 16, rng_seed=7)
        assert a_cfg == b_cfg
        assert a_trace.serialize() == b_trace.serialize()

    def test_constant_oracle_survives(self):
        cfg, trace = run_controller(lambda c: -1.0, 8, rng_seed=8)
        assert trace.low_contrast
        assert len(cfg) == 8


class TestBruteForce:
    def test_single_group_two_probes(self):
        oracle = onoff_oracle(np.ones(4))
        cfg, rss, trace = brute_force_baseline(oracle, [[0, 1, 2, 3]], V1, V0, 4)
        assert trace.budget_used == 2
        assert cfg.voltages == (V1,) * 4

    def test_eight_groups_256_probes_and_optimal(self):
        rng = np.random.default_rng(3)
        h = rng.normal(size=8) + 1j * rng.normal(size=8)
        oracle = onoff_oracle(h)
        cfg, rss, trace = brute_force_baseline(oracle, element_groups(8), V1, V0, 8)
        assert trace.budget_used == 256
        want = oracles.best_subset_gain(0j, h, 1.0, 0.0, 1.0)  # oracle enumerates too
        base = 20 * np.log10(abs(h.sum()))
        assert rss - base == pytest.approx(want, abs=1e-9)

    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            brute_force_baseline(lambda c: 0.0, element_groups(17), V1, V0, 17)


class TestTraceSerialization:
    def test_line_format(self):
        trace = ControlTrace()
        trace.record(1, SurfaceConfig((30.0, 0.0)), -12.5)
        text = trace.serialize()
        lines = text.strip().split("\n")
        assert lines[0] == "stage,probe_index,config_hash,rss_db"
        stage, idx, digest, rss = lines[1].split(",")
        assert (stage, idx) == ("1", "0")
        assert digest == config_hash((30.0, 0.0))
        assert float(rss) == -12.5

    def test_hash_is_canonical(self):
        assert config_hash((30.0, 0.0)) == config_hash([30, 0])
        assert config_hash((30.0, 0.0)) != config_hash((0.0, 30.0))
