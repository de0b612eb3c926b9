"""Scenario-driven commands: match, sweep, links, backscatter, bench-controller.

Every command consumes a Scenario, writes CSV artifacts plus a plain-text
summary into an output directory, and returns a RunReport.  All randomness is
derived from the scenario seed, so a command is reproducible from the
(scenario file, seeds) pair alone; reports embed the scenario hash.

Medians and percentiles use the lower-interpolation rule throughout
(numpy percentile method="lower").
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .cascade import clamp_db
from .channel import backscatter_gain, baseline_channel, oneway_gain
from .control import (brute_force_baseline, column_groups, run_controller,
                      stage1_uniform_probe, stage3_fine_tune, ControlState,
                      ControlTrace)
from .matching import SweepGrid, best_admittance, best_voltage, reflection_spectrum, sweep_through_power
from .scenario import (FeedbackOracle, ProductFeedbackOracle, Scenario,
                       scenario_from_dict)


class BudgetError(RuntimeError):
    """A controller trace violated the per-stage probe budget."""


def percentile_lower(values, q: float) -> float:
    return float(np.percentile(np.asarray(values, dtype=float), q, method="lower"))


def median_lower(values) -> float:
    return percentile_lower(values, 50.0)


@dataclass
class RunReport:
    command: str
    scenario_name: str
    scenario_hash: str
    summary: dict = field(default_factory=dict)
    csv_paths: list[str] = field(default_factory=list)

    def render(self) -> str:
        lines = [f"command = {self.command}",
                 f"scenario = {self.scenario_name}",
                 f"scenario_hash = {self.scenario_hash}"]
        for key, value in self.summary.items():
            if isinstance(value, float):
                lines.append(f"{key} = {value:.6g}")
            else:
                lines.append(f"{key} = {value}")
        for p in self.csv_paths:
            lines.append(f"artifact = {p}")
        return "\n".join(lines) + "\n"


def _write_csv(path: Path, header: str, rows) -> str:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(format(x, ".12g") if isinstance(x, float) else str(x)
                              for x in row) + "\n")
    return str(path)


def _finish(report: RunReport, out_dir: Path) -> RunReport:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "summary.txt").write_text(report.render())
    return report


def validate_trace(trace: ControlTrace, n_voltages: int, n_stage2: int) -> None:
    """Assert the 8/2N/9-style probe budget from the trace itself."""
    s1 = trace.stage_probe_count(1)
    s2 = trace.stage_probe_count(2)
    s3 = trace.stage_probe_count(3)
    if s1 != n_voltages or s2 != n_stage2 or s3 > 9:
        raise BudgetError(
            f"budget violation: stages {s1}/{s2}/{s3}, expected "
            f"{n_voltages}/{n_stage2}/<=9")


# ---------------------------------------------------------------------------
# match

def cmd_match(scenario: Scenario, out_dir) -> RunReport:
    """Continuous + voltage matching and the reflection-reduction spectra."""
    out_dir = Path(out_dir)
    stack = scenario.stack()
    f = scenario.frequency

    adm = best_admittance(stack, f)
    volt = best_voltage(stack, scenario.circuit, f, scenario.voltage_set)

    spectrum_a = reflection_spectrum(stack, scenario.spectrum, ys=adm.best_admittance)
    spectrum_v = reflection_spectrum(stack, scenario.spectrum,
                                     circuit=scenario.circuit, voltage=volt.best_voltage)

    report = RunReport("match", scenario.name, scenario.scenario_hash())
    report.csv_paths.append(_write_csv(
        out_dir / "spectrum_admittance.csv", "frequency_hz,reflection_db,reduction_db",
        [(fr, clamp_db(r), red) for fr, r, red in spectrum_a]))
    report.csv_paths.append(_write_csv(
        out_dir / "spectrum_voltage.csv", "frequency_hz,reflection_db,reduction_db",
        [(fr, clamp_db(r), red) for fr, r, red in spectrum_v]))

    at_f0 = min(spectrum_a, key=lambda row: abs(row[0] - f))
    report.summary.update({
        "best_susceptance_s": adm.best_admittance.imag,
        "matched_through_db": adm.through_power_db,
        "baseline_through_db": adm.baseline_db,
        "matched_gain_db": adm.gain_db,
        "best_voltage_v": volt.best_voltage,
        "voltage_through_db": volt.through_power_db,
        "voltage_gain_db": volt.gain_db,
        "reduction_at_center_db": at_f0[2],
    })
    return _finish(report, out_dir)


# ---------------------------------------------------------------------------
# sweep

_AXIS1 = ("gap_mm", "fat_mm")
_AXIS2 = ("susceptance_s", "capacitance_pf")


def cmd_sweep(scenario: Scenario, out_dir) -> RunReport:
    """Heatmap CSVs over every configured (structure x surface) axis pair."""
    out_dir = Path(out_dir)
    report = RunReport("sweep", scenario.name, scenario.scenario_hash())

    pairs = [(a1, a2) for a1 in _AXIS1 for a2 in _AXIS2
             if a1 in scenario.sweeps and a2 in scenario.sweeps]
    if not pairs:
        raise ValueError("scenario defines no sweepable axis pair")

    for a1, a2 in pairs:
        grid = SweepGrid(
            axis1_name=a1, axis1_values=tuple(scenario.sweeps[a1]),
            axis2_name=a2, axis2_values=tuple(scenario.sweeps[a2]),
            frequency=scenario.frequency)
        family = (lambda g: scenario.stack(gap_mm=g)) if a1 == "gap_mm" \
            else (lambda t: scenario.stack(fat_mm=t))
        matrix = sweep_through_power(family, grid, circuit=scenario.circuit)
        rows = [(float(v1), float(v2), float(matrix[i, j]))
                for i, v1 in enumerate(grid.axis1_values)
                for j, v2 in enumerate(grid.axis2_values)]
        report.csv_paths.append(_write_csv(
            out_dir / f"sweep_{a1}_{a2}.csv", "axis1,axis2,through_power_db", rows))
        report.summary[f"max_db[{a1}x{a2}]"] = float(matrix.max())
    return _finish(report, out_dir)


# ---------------------------------------------------------------------------
# links

def _link_seeds(scenario: Scenario, index: int) -> tuple[int, int, int]:
    """(channel seed, voting rng seed, uplink channel seed) for one link."""
    base = scenario.seed * 1000000 + index
    return base, base + 500000, base + 10000019


def _run_one_link(raw: dict, index: int) -> dict:
    scenario = scenario_from_dict(raw)
    responder = scenario.responder()
    ch_seed, rng_seed, _ = _link_seeds(scenario, index)
    channel = scenario.sample_link_channel(ch_seed, responder)
    oracle = FeedbackOracle(channel, noise_db=scenario.channel.noise_db,
                            quantization_db=scenario.channel.rss_quantization_db,
                            noise_seed=ch_seed)
    cfg, trace = run_controller(oracle, scenario.n_elements,
                                voltages=scenario.voltage_set, rng_seed=rng_seed)
    validate_trace(trace, len(scenario.voltage_set), 2 * scenario.n_elements)

    base_db = 20.0 * np.log10(abs(baseline_channel(channel)))
    stage1_db = trace.best_probe(through_stage=1).rss_db
    stage2_db = trace.best_probe(through_stage=2).rss_db
    final_db = trace.best_probe().rss_db
    return {
        "link": index,
        "seed": ch_seed,
        "baseline_db": float(base_db),
        "final_db": float(final_db),
        "gain_db": float(oneway_gain(channel, cfg)),
        "stage1_gain_db": float(stage1_db - base_db),
        "stage12_gain_db": float(stage2_db - base_db),
        "stage3_increment_db": float(final_db - stage2_db),
        "probes_stage1": trace.stage_probe_count(1),
        "probes_stage2": trace.stage_probe_count(2),
        "probes_stage3": trace.stage_probe_count(3),
        "trace": trace.serialize(),
        "channel": [(channel.h_env.real, channel.h_env.imag)] + [
            (z.real, z.imag) for z in channel.h_elements],
    }


def cmd_links(scenario: Scenario, out_dir, n_links: int, parallel: int = 1) -> RunReport:
    """Sample n_links seeded channels and run the controller on each."""
    out_dir = Path(out_dir)
    report = RunReport("links", scenario.name, scenario.scenario_hash())

    if parallel > 1 and n_links > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallel) as pool:
            results = list(pool.map(_run_one_link, [scenario.raw] * n_links, range(n_links)))
    else:
        results = [_run_one_link(scenario.raw, i) for i in range(n_links)]
    results.sort(key=lambda r: r["link"])

    for r in results:
        (out_dir / "traces").mkdir(parents=True, exist_ok=True)
        (out_dir / "traces" / f"link_{r['link']:04d}.csv").write_text(r["trace"])
        _write_csv(out_dir / "channels" / f"link_{r['link']:04d}.csv", "path,re,im",
                   [("env" if i == 0 else f"element_{i - 1}", float(re), float(im))
                    for i, (re, im) in enumerate(r["channel"])])

    report.csv_paths.append(_write_csv(
        out_dir / "links.csv",
        "link,seed,baseline_db,final_db,gain_db,stage1_gain_db,stage12_gain_db,"
        "stage3_increment_db,probes_stage1,probes_stage2,probes_stage3",
        [(r["link"], r["seed"], r["baseline_db"], r["final_db"], r["gain_db"],
          r["stage1_gain_db"], r["stage12_gain_db"], r["stage3_increment_db"],
          r["probes_stage1"], r["probes_stage2"], r["probes_stage3"]) for r in results]))

    if results:
        gains = [r["gain_db"] for r in results]
        report.summary.update({
            "n_links": len(results),
            "median_gain_db": median_lower(gains),
            "p10_gain_db": percentile_lower(gains, 10.0),
            "p90_gain_db": percentile_lower(gains, 90.0),
            "max_gain_db": float(max(gains)),
            "total_probes": sum(r["probes_stage1"] + r["probes_stage2"] + r["probes_stage3"]
                                for r in results),
        })
    else:
        report.summary["n_links"] = 0
    return _finish(report, out_dir)


# ---------------------------------------------------------------------------
# backscatter

def cmd_backscatter(scenario: Scenario, out_dir, n_links: int) -> RunReport:
    """Two-way emulation: controller driven by the product-channel feedback."""
    out_dir = Path(out_dir)
    report = RunReport("backscatter", scenario.name, scenario.scenario_hash())
    responder = scenario.responder()

    rows = []
    for i in range(n_links):
        ch_seed, rng_seed, up_seed = _link_seeds(scenario, i)
        downlink = scenario.sample_link_channel(ch_seed, responder)
        uplink = downlink.reciprocal() if scenario.channel.reciprocal_uplink \
            else scenario.sample_link_channel(up_seed, responder)
        oracle = ProductFeedbackOracle(downlink, uplink,
                                       quantization_db=scenario.channel.rss_quantization_db)
        cfg, trace = run_controller(oracle, scenario.n_elements,
                                    voltages=scenario.voltage_set, rng_seed=rng_seed)
        validate_trace(trace, len(scenario.voltage_set), 2 * scenario.n_elements)
        rows.append((i, ch_seed,
                     float(oneway_gain(downlink, cfg)),
                     float(oneway_gain(uplink, cfg)),
                     float(backscatter_gain(downlink, uplink, cfg))))

    report.csv_paths.append(_write_csv(
        out_dir / "backscatter.csv",
        "link,seed,gain_down_db,gain_up_db,backscatter_db", rows))
    if rows:
        bs = [r[4] for r in rows]
        down = [r[2] for r in rows]
        report.summary.update({
            "n_links": len(rows),
            "median_backscatter_db": median_lower(bs),
            "max_backscatter_db": float(max(bs)),
            "median_oneway_db": median_lower(down),
            "reciprocal_uplink": scenario.channel.reciprocal_uplink,
        })
    else:
        report.summary["n_links"] = 0
    return _finish(report, out_dir)


# ---------------------------------------------------------------------------
# bench-controller

#: Stage-2 probe count for the column-granularity voting variant; the
#: 8-column benchmark runs 32 random configurations.
COLUMN_VOTING_CONFIGS = 32


def _enum_pipeline(oracle, scenario: Scenario, groups):
    """Stage 1 + exhaustive on/off enumeration + stage-3 fine tune."""
    trace = ControlTrace()
    v1, v0, _ = stage1_uniform_probe(oracle, scenario.voltage_set,
                                     scenario.n_elements, trace)
    if v1 == v0:
        v0 = min(scenario.voltage_set)
    cfg, _, _ = brute_force_baseline(oracle, groups, v1, v0, scenario.n_elements,
                                     trace=trace)
    on_set = frozenset(i for i, v in enumerate(cfg.voltages) if v == v1 and v1 != v0)
    state = ControlState(v1=v1, v0=v0, on_set=on_set,
                         off_set=frozenset(range(scenario.n_elements)) - on_set)
    final = stage3_fine_tune(oracle, scenario.voltage_set, state,
                             scenario.n_elements, trace)
    return final, trace


def cmd_bench_controller(scenario: Scenario, out_dir, n_seeds: int = 100) -> RunReport:
    """Randomized voting vs exhaustive enumeration vs column-wise control."""
    out_dir = Path(out_dir)
    report = RunReport("bench-controller", scenario.name, scenario.scenario_hash())
    responder = scenario.responder()
    cols = column_groups(scenario.rows, scenario.cols)

    rows = []
    for i in range(n_seeds):
        ch_seed, rng_seed, _ = _link_seeds(scenario, i)
        channel = scenario.sample_link_channel(ch_seed, responder)

        def fresh_oracle():
            return FeedbackOracle(channel, noise_db=scenario.channel.noise_db,
                                  quantization_db=scenario.channel.rss_quantization_db,
                                  noise_seed=ch_seed)

        cfg_e, tr_e = run_controller(fresh_oracle(), scenario.n_elements,
                                     voltages=scenario.voltage_set, rng_seed=rng_seed)
        validate_trace(tr_e, len(scenario.voltage_set), 2 * scenario.n_elements)

        cfg_c, tr_c = run_controller(fresh_oracle(), scenario.n_elements,
                                     voltages=scenario.voltage_set, rng_seed=rng_seed,
                                     n_configs=COLUMN_VOTING_CONFIGS, groups=cols)
        validate_trace(tr_c, len(scenario.voltage_set), COLUMN_VOTING_CONFIGS)

        cfg_n, tr_n = _enum_pipeline(fresh_oracle(), scenario, cols)

        rows.append((i, ch_seed,
                     float(oneway_gain(channel, cfg_e)),
                     float(oneway_gain(channel, cfg_c)),
                     float(oneway_gain(channel, cfg_n)),
                     tr_e.budget_used, tr_c.budget_used, tr_n.budget_used))

    report.csv_paths.append(_write_csv(
        out_dir / "bench_controller.csv",
        "seed_index,seed,element_voting_db,column_voting_db,column_enum_db,"
        "probes_element,probes_column,probes_enum", rows))
    if rows:
        elem = [r[2] for r in rows]
        colv = [r[3] for r in rows]
        enum = [r[4] for r in rows]
        report.summary.update({
            "n_seeds": len(rows),
            "median_element_voting_db": median_lower(elem),
            "median_column_voting_db": median_lower(colv),
            "median_column_enum_db": median_lower(enum),
            "voting_vs_enum_db": median_lower(enum) - median_lower(colv),
            "element_vs_column_db": median_lower(elem) - median_lower(colv),
        })
    return _finish(report, out_dir)
