"""Three-stage surface control against a black-box RSS feedback oracle.

Stage 1 probes every control voltage applied uniformly and keeps the two
extreme states (v1 maximizing feedback, v0 minimizing).  Stage 2 runs
randomized majority voting over on/off (v1/v0) configurations.  Stage 3
fine-tunes v1 and v0 to adjacent control voltages without touching the
on/off split.  The returned configuration is the argmax over everything the
controller ever probed, so it can never regress below a measured state.

The oracle is any callable SurfaceConfig -> rss_db.  Probes are issued
strictly one at a time in trace order (feedback is stateful in a real
deployment); only whole controller runs may execute concurrently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .channel import SurfaceConfig

#: Control voltage alphabet (descending).  The hardware bias range allows
#: finer steps; these levels cover the realizable susceptance span.
DEFAULT_VOLTAGE_SET = (30.0, 20.0, 15.0, 10.0, 5.0, 2.5, 0.0)

ENUMERATION_CAP = 65536


def config_hash(voltages) -> str:
    """Canonical 12-hex-digit hash of an element-voltage vector.

    Canonical form: voltages rendered with format(v, '.6g'), joined by
    commas, UTF-8 encoded, SHA-256, first 12 hex digits.
    """
    text = ",".join(format(float(v), ".6g") for v in voltages)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:12]


@dataclass(frozen=True)
class ProbeRecord:
    stage: int
    probe_index: int
    config: SurfaceConfig
    rss_db: float


@dataclass
class ControlTrace:
    """Everything the controller measured, in the order it measured it."""

    probes: list[ProbeRecord] = field(default_factory=list)
    low_contrast: bool = False
    notes: list[str] = field(default_factory=list)

    def record(self, stage: int, config: SurfaceConfig, rss_db: float) -> float:
        self.probes.append(ProbeRecord(stage, len(self.probes), config, float(rss_db)))
        return float(rss_db)

    def stage_probe_count(self, stage: int) -> int:
        return sum(1 for p in self.probes if p.stage == stage)

    @property
    def budget_used(self) -> int:
        return len(self.probes)

    def best_probe(self, through_stage: int | None = None) -> ProbeRecord:
        pool = self.probes if through_stage is None else [
            p for p in self.probes if p.stage <= through_stage]
        best = pool[0]
        for p in pool[1:]:
            if p.rss_db > best.rss_db:
                best = p
        return best

    def serialize(self) -> str:
        """Line-oriented records: stage,probe_index,config_hash,rss_db."""
        lines = ["stage,probe_index,config_hash,rss_db"]
        for p in self.probes:
            lines.append(f"{p.stage},{p.probe_index},{config_hash(p.config.voltages)},"
                         f"{p.rss_db:.10g}")
        return "\n".join(lines) + "\n"


@dataclass
class ControlState:
    """Interim controller state threaded through the stages."""

    v1: float
    v0: float
    on_set: frozenset[int] = frozenset()
    off_set: frozenset[int] = frozenset()
    budget_used: int = 0
    best_seen: tuple[SurfaceConfig, float] | None = None


def element_groups(n_elements: int) -> list[list[int]]:
    """Element-wise control: every element is its own group."""
    return [[i] for i in range(n_elements)]


def column_groups(rows: int, cols: int) -> list[list[int]]:
    """Column-wise control of a row-major rows x cols array."""
    return [[r * cols + c for r in range(rows)] for c in range(cols)]


def _group_config(groups, on_mask, v1: float, v0: float, n_elements: int) -> SurfaceConfig:
    voltages = np.full(n_elements, v0, dtype=float)
    for gi, members in enumerate(groups):
        if on_mask[gi]:
            voltages[members] = v1
    return SurfaceConfig(tuple(voltages))


def _validate_voltage_set(voltages) -> tuple[float, ...]:
    vs = tuple(float(v) for v in voltages)
    if len(vs) < 2:
        raise ValueError("need at least two control voltages")
    if any(b >= a for a, b in zip(vs, vs[1:])):
        raise ValueError("control voltages must be strictly decreasing")
    return vs


def stage1_uniform_probe(oracle, voltages, n_elements: int,
                         trace: ControlTrace | None = None):
    """Probe each control voltage uniformly; pick the extreme responders.

    Ties go to the higher voltage for both v1 and v0 (which means a constant
    oracle degenerates to v1 == v0; the run is then flagged low-contrast).
    Returns (v1, v0, trace).
    """
    vs = _validate_voltage_set(voltages)
    trace = trace if trace is not None else ControlTrace()
    seen = []
    for v in vs:  # descending order makes strict comparisons resolve ties upward
        cfg = SurfaceConfig.uniform(v, n_elements)
        rss = trace.record(1, cfg, oracle(cfg))
        seen.append((v, rss))
    v1, r1 = seen[0]
    v0, r0 = seen[0]
    for v, r in seen[1:]:
        if r > r1:
            v1, r1 = v, r
        if r < r0:
            v0, r0 = v, r
    if r1 - r0 < 1e-12:
        trace.low_contrast = True
        trace.notes.append("stage1: low-contrast feedback, extreme states are ties")
    return v1, v0, trace


def stage2_majority_voting(oracle, v1: float, v0: float, n_elements: int,
                           n_configs: int | None = None, rng_seed: int = 0,
                           groups=None, trace: ControlTrace | None = None):
    """Randomized majority voting over on/off configurations.

    Draws n_configs (default 2x the number of control groups) uniform random
    on/off assignments, measures each, and lets every configuration whose
    feedback is strictly above the median cast one vote for each group it
    turned on.  A group ends up on when it collects votes from more than half
    of the voting configurations; exactly half goes to off.

    Returns (on_set, off_set, trace) with element index sets.
    """
    if v1 == v0:
        raise ValueError("stage 2 needs distinct on/off voltages (v1 != v0)")
    groups = groups if groups is not None else element_groups(n_elements)
    n_groups = len(groups)
    if n_configs is None:
        n_configs = 2 * n_groups
    if n_configs < 1:
        raise ValueError("n_configs must be >= 1")
    trace = trace if trace is not None else ControlTrace()

    rng = np.random.default_rng(rng_seed)
    masks = rng.integers(0, 2, size=(n_configs, n_groups))
    rss = np.empty(n_configs)
    for i in range(n_configs):
        cfg = _group_config(groups, masks[i], v1, v0, n_elements)
        rss[i] = trace.record(2, cfg, oracle(cfg))

    median = np.median(rss)
    voting = rss > median
    n_voting = int(np.count_nonzero(voting))
    votes = masks[voting].sum(axis=0) if n_voting else np.zeros(n_groups, dtype=int)
    on_mask = votes > n_voting / 2.0  # strict majority of the voting configs

    on_set, off_set = set(), set()
    for gi, members in enumerate(groups):
        (on_set if on_mask[gi] else off_set).update(members)
    return frozenset(on_set), frozenset(off_set), trace


def stage3_fine_tune(oracle, voltages, state: ControlState, n_elements: int,
                     trace: ControlTrace | None = None) -> SurfaceConfig:
    """Fine-tune v1/v0 over adjacent control voltages, on/off split fixed.

    Probes the 3x3 grid of (adjacent-lower, same, adjacent-higher) moves for
    v1 and v0 (up to 9 probes; fewer at the ends of the voltage set) and
    returns the best configuration over the entire trace, so anything stage 1
    or 2 measured can still win.
    """
    vs = _validate_voltage_set(voltages)
    trace = trace if trace is not None else ControlTrace()

    def neighborhood(v: float):
        i = vs.index(v)
        return sorted({vs[j] for j in (i - 1, i, i + 1) if 0 <= j < len(vs)}, reverse=True)

    on = np.zeros(n_elements, dtype=bool)
    on[list(state.on_set)] = True
    for cand1 in neighborhood(state.v1):
        for cand0 in neighborhood(state.v0):
            voltages_vec = np.where(on, cand1, cand0)
            cfg = SurfaceConfig(tuple(voltages_vec))
            rss = trace.record(3, cfg, oracle(cfg))
            if state.best_seen is None or rss > state.best_seen[1]:
                state.best_seen = (cfg, rss)

    best = trace.best_probe()
    return best.config


def run_controller(oracle, n_elements: int, voltages=DEFAULT_VOLTAGE_SET,
                   n_configs: int | None = None, rng_seed: int = 0,
                   groups=None):
    """Run the three stages in order; returns (final config, trace).

    Total probes are bounded by len(voltages) + n_configs + 9.  A constant
    (low-contrast) stage-1 outcome would leave v1 == v0; the controller then
    substitutes the lowest control voltage for v0 so the later stages stay
    well-defined.
    """
    trace = ControlTrace()
    v1, v0, _ = stage1_uniform_probe(oracle, voltages, n_elements, trace)
    if v1 == v0:
        v0 = min(voltages)
        trace.notes.append(f"degenerate stage1, forcing v0={v0}")
    on_set, off_set, _ = stage2_majority_voting(
        oracle, v1, v0, n_elements, n_configs=n_configs, rng_seed=rng_seed,
        groups=groups, trace=trace)
    state = ControlState(v1=v1, v0=v0, on_set=on_set, off_set=off_set)
    final = stage3_fine_tune(oracle, voltages, state, n_elements, trace)
    state.budget_used = trace.budget_used
    best = trace.best_probe()
    state.best_seen = (best.config, best.rss_db)
    return final, trace


def brute_force_baseline(oracle, groups, v1: float, v0: float, n_elements: int,
                         cap: int = ENUMERATION_CAP,
                         trace: ControlTrace | None = None):
    """Exhaustive argmax over all 2^len(groups) on/off assignments.

    Refuses group counts whose enumeration would exceed the cap.  Returns
    (config, rss_db, trace).
    """
    n_groups = len(groups)
    if 2 ** n_groups > cap:
        raise ValueError(
            f"enumeration of 2^{n_groups} configs exceeds cap {cap}; "
            "use randomized voting instead")
    trace = trace if trace is not None else ControlTrace()
    best_cfg, best_rss = None, float("-inf")
    for code in range(2 ** n_groups):
        mask = [(code >> g) & 1 for g in range(n_groups)]
        cfg = _group_config(groups, mask, v1, v0, n_elements)
        rss = trace.record(2, cfg, oracle(cfg))
        if rss > best_rss:
            best_cfg, best_rss = cfg, rss
    return best_cfg, best_rss, trace
