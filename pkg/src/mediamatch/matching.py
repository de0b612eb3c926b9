"""Admittance / voltage search for maximal through-interface power.

The matcher only ever searches purely imaginary surface admittances (an
idealized lossless surface); conductance enters through the varactor path
when optimizing over bias voltages instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cascade import DB_FLOOR, DegenerateStackError, StackSpec, clamp_db, solve_stack
from .surface import ElementCircuit, admittance_at_voltage, admittance_exact

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class SearchError(RuntimeError):
    """Every candidate the search evaluated was singular."""


@dataclass(frozen=True)
class SweepGrid:
    """Two named, strictly monotone axes plus the operating frequency."""

    axis1_name: str
    axis1_values: tuple[float, ...]
    axis2_name: str
    axis2_values: tuple[float, ...]
    frequency: float

    def __post_init__(self):
        for name, values in ((self.axis1_name, self.axis1_values),
                             (self.axis2_name, self.axis2_values)):
            v = np.asarray(values, dtype=float)
            if v.size == 0:
                raise ValueError(f"axis {name!r} is empty")
            if v.size > 1 and not (np.all(np.diff(v) > 0) or np.all(np.diff(v) < 0)):
                raise ValueError(f"axis {name!r} must be strictly monotone")


@dataclass(frozen=True)
class MatchResult:
    """Best surface setting found for one stack."""

    through_power_db: float
    baseline_db: float          # through power at Y_s = 0
    gain_db: float              # through_power_db - baseline_db, >= 0
    best_admittance: complex | None = None
    best_voltage: float | None = None


def _through_db(stack: StackSpec, ys: complex, frequency: float) -> float:
    try:
        p = solve_stack(stack, ys, frequency).through_power
    except DegenerateStackError:
        return float("-inf")
    return 10.0 * np.log10(p) if p > 0 else float("-inf")


def _axis2_admittance(name: str, value: float, circuit: ElementCircuit | None,
                      frequency: float) -> complex:
    """Interpret an axis-2 coordinate as a surface admittance."""
    if name == "susceptance_s":
        return 1j * value
    if circuit is None:
        raise ValueError(f"axis {name!r} needs an ElementCircuit")
    if name == "capacitance_pf":
        c, r = value * 1e-12, _resistance_for_capacitance(circuit, value * 1e-12)
        return admittance_exact(circuit, c, r, frequency).value
    if name == "voltage_v":
        return admittance_at_voltage(circuit, value, frequency).value
    raise ValueError(f"unknown axis-2 interpretation {name!r}")


def _resistance_for_capacitance(circuit: ElementCircuit, capacitance: float) -> float:
    """Loss resistance consistent with a capacitance, read off the varactor table."""
    c = np.asarray(circuit.varactors.capacitances, dtype=float)
    r = np.asarray(circuit.varactors.resistances, dtype=float)
    order = np.argsort(c)
    cap = min(max(capacitance, c.min()), c.max())
    return float(np.interp(cap, c[order], r[order]))


def sweep_through_power(stack_family, grid: SweepGrid,
                        circuit: ElementCircuit | None = None) -> np.ndarray:
    """Dense matrix of through power (dB), rows = axis1, cols = axis2.

    stack_family maps an axis-1 value (gap, fat thickness, ...) to a
    StackSpec.  Singular grid points are recorded at the -200 dB floor.
    """
    out = np.empty((len(grid.axis1_values), len(grid.axis2_values)))
    for i, a1 in enumerate(grid.axis1_values):
        stack = stack_family(a1)
        for j, a2 in enumerate(grid.axis2_values):
            ys = _axis2_admittance(grid.axis2_name, a2, circuit, grid.frequency)
            out[i, j] = clamp_db(_through_db(stack, ys, grid.frequency), DB_FLOOR)
    return out


def best_admittance(stack: StackSpec, frequency: float,
                    susceptance_range: tuple[float, float] = (0.0, 0.12),
                    steps: int = 61) -> MatchResult:
    """Grid search over purely imaginary Y_s, then golden-section refinement.

    The coarse grid always includes Y_s = 0, so the reported gain can never
    be negative.  Refinement narrows the bracket around the best grid point
    to 1e-4 S.  If the coarse profile is not unimodal the golden-section
    assumption is void and the search falls back to a dense 1e-4 S grid.
    """
    if steps < 2:
        raise ValueError("steps must be >= 2")
    lo, hi = susceptance_range
    if lo >= hi:
        raise ValueError("susceptance_range must be increasing")

    baseline = _through_db(stack, 0j, frequency)
    bgrid = np.linspace(lo, hi, steps)
    if not np.any(np.isclose(bgrid, 0.0)):
        bgrid = np.sort(np.append(bgrid, 0.0))
    vals = np.array([_through_db(stack, 1j * b, frequency) for b in bgrid])
    if np.all(np.isinf(vals)):
        raise SearchError("all searched admittances were singular")

    k = int(np.argmax(vals))
    finite = vals[np.isfinite(vals)]
    # unimodality check on the coarse profile: a single rising-then-falling run
    rises = np.diff(finite) > 0
    multimodal = np.any(rises[1:] & ~rises[:-1])
    if multimodal:
        dense = np.arange(lo, hi + 1e-4, 1e-4)
        dvals = np.array([_through_db(stack, 1j * b, frequency) for b in dense])
        k = int(np.argmax(dvals))
        b_star = float(dense[k])
    else:
        b_lo = bgrid[max(k - 1, 0)]
        b_hi = bgrid[min(k + 1, len(bgrid) - 1)]
        while b_hi - b_lo > 1e-4:
            m1 = b_hi - _GOLDEN * (b_hi - b_lo)
            m2 = b_lo + _GOLDEN * (b_hi - b_lo)
            if _through_db(stack, 1j * m1, frequency) < _through_db(stack, 1j * m2, frequency):
                b_lo = m1
            else:
                b_hi = m2
        b_star = float(0.5 * (b_lo + b_hi))

    best_db = _through_db(stack, 1j * b_star, frequency)
    if best_db < vals[k]:  # never report worse than a grid point actually seen
        b_star, best_db = float(bgrid[k]), float(vals[k])
    if best_db < baseline:
        b_star, best_db = 0.0, baseline
    return MatchResult(
        through_power_db=float(best_db),
        baseline_db=float(baseline),
        gain_db=float(best_db - baseline),
        best_admittance=1j * b_star,
    )


def best_voltage(stack: StackSpec, circuit: ElementCircuit, frequency: float,
                 voltage_set) -> MatchResult:
    """Argmax of through power over a discrete voltage set (full lossy Y_s).

    Ties go to the higher voltage: the varactor table says higher bias means
    lower loss resistance.
    """
    voltages = list(voltage_set)
    if not voltages:
        raise ValueError("voltage set is empty")
    lo, hi = circuit.varactors.voltage_range
    for v in voltages:
        if not lo <= v <= hi:
            raise ValueError(f"voltage {v} V outside varactor table range [{lo}, {hi}] V")

    baseline = _through_db(stack, 0j, frequency)
    best_v, best_db = None, float("-inf")
    for v in sorted(voltages, reverse=True):  # descending, so strict > keeps higher V on ties
        db = _through_db(stack, admittance_at_voltage(circuit, v, frequency).value, frequency)
        if db > best_db:
            best_v, best_db = v, db
    return MatchResult(
        through_power_db=float(best_db),
        baseline_db=float(baseline),
        gain_db=float(best_db - baseline),
        best_voltage=best_v,
    )


def reflection_spectrum(stack: StackSpec, frequencies, ys: complex | None = None,
                        circuit: ElementCircuit | None = None,
                        voltage: float | None = None):
    """Reflection vs frequency and the reduction against the bare stack.

    Exactly one of ys (a frequency-independent admittance) or
    (circuit, voltage) must be given; in the latter case the admittance is
    re-evaluated at every frequency, which is what moves the reflection
    trough as the capacitance changes.

    Returns a list of (frequency, reflection_db, reduction_db) tuples.
    """
    freqs = list(frequencies)
    if any(b < a for a, b in zip(freqs, freqs[1:])):
        raise ValueError("frequency list must be monotone non-decreasing")
    if (ys is None) == (voltage is None):
        raise ValueError("give either a fixed admittance or a (circuit, voltage) pair")
    if voltage is not None and circuit is None:
        raise ValueError("voltage mode needs the element circuit")

    out = []
    for f in freqs:
        y = ys if ys is not None else admittance_at_voltage(circuit, voltage, f).value
        refl = solve_stack(stack, y, f).reflected_power
        bare = solve_stack(stack, 0j, f).reflected_power
        refl_db = 10.0 * np.log10(refl) if refl > 0 else DB_FLOOR
        bare_db = 10.0 * np.log10(bare) if bare > 0 else DB_FLOOR
        out.append((float(f), float(refl_db), float(bare_db - refl_db)))
    return out
