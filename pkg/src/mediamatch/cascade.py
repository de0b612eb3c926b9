"""Cascaded two-port (ABCD) solution of a surface + layered-media stack.

The stack between the source and load half-spaces is a product of 2x2
transmission matrices: one shunt matrix for the surface admittance and one
line matrix per medium layer.  End-to-end transmission and reflection follow
from the composite matrix and the two half-space impedances:

    T = 2 / (A + B/Z_load + C Z_src + D Z_src/Z_load)
    Gamma = (A + B/Z_load - C Z_src - D Z_src/Z_load) / (same denominator)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .media import Layer, Medium, intrinsic_impedance, phase_constant

DB_FLOOR = -200.0  # clamp used when emitting dB columns to files


class DegenerateStackError(ValueError):
    """The cascade denominator vanished (resonance singularity)."""


@dataclass(frozen=True)
class AbcdMatrix:
    """2x2 transmission matrix; b in ohms, c in siemens, a and d unitless."""

    a: complex
    b: complex
    c: complex
    d: complex

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: "AbcdMatrix") -> "AbcdMatrix":
        return AbcdMatrix(
            a=self.a * other.a + self.b * other.c,
            b=self.a * other.b + self.b * other.d,
            c=self.c * other.a + self.d * other.c,
            d=self.c * other.b + self.d * other.d,
        )


IDENTITY = AbcdMatrix(1.0 + 0j, 0j, 0j, 1.0 + 0j)


@dataclass(frozen=True)
class StackSpec:
    """Source half-space | layers (with a shunt surface inserted) | load half-space.

    surface_index
        Position of the shunt surface in the layer sequence: 0 places it on
        the source-side face before every layer (the usual deployment, the
        surface sits in front of the gap), len(layers) places it against the
        load half-space.
    """

    source_medium: Medium
    load_medium: Medium
    layers: tuple[Layer, ...] = field(default_factory=tuple)
    surface_index: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not 0 <= self.surface_index <= len(self.layers):
            raise ValueError(
                f"surface_index {self.surface_index} outside [0, {len(self.layers)}]")

    def reversed(self) -> "StackSpec":
        """The same physical stack solved from the load side."""
        return StackSpec(
            source_medium=self.load_medium,
            load_medium=self.source_medium,
            layers=self.layers[::-1],
            surface_index=len(self.layers) - self.surface_index,
        )


@dataclass(frozen=True)
class CascadeSolution:
    t: complex               # E+_load / E+_src
    gamma: complex           # E-_src / E+_src
    through_power: float
    reflected_power: float


def shunt_abcd(admittance: complex) -> AbcdMatrix:
    """ABCD matrix of a shunt admittance: [[1, 0], [Y, 1]]."""
    if not np.isfinite(admittance):
        raise ValueError(f"shunt admittance must be finite, got {admittance}")
    return AbcdMatrix(1.0 + 0j, 0j, complex(admittance), 1.0 + 0j)


def line_abcd(layer: Layer, frequency: float) -> AbcdMatrix:
    """ABCD matrix of a transmission-line segment of one medium layer."""
    z = intrinsic_impedance(layer.medium, frequency)
    bl = phase_constant(layer.medium, frequency) * layer.thickness
    return AbcdMatrix(
        a=np.cos(bl),
        b=1j * z * np.sin(bl),
        c=1j * np.sin(bl) / z,
        d=np.cos(bl),
    )


def cascade(matrices) -> AbcdMatrix:
    """Left-to-right product of ABCD matrices in propagation order."""
    matrices = list(matrices)
    if not matrices:
        raise ValueError("cascade of zero matrices is undefined")
    out = matrices[0]
    for m in matrices[1:]:
        out = out @ m
    return out


def stack_abcd(stack: StackSpec, surface_admittance: complex, frequency: float) -> AbcdMatrix:
    """Composite ABCD of the full stack with the shunt surface inserted."""
    mats = [line_abcd(layer, frequency) for layer in stack.layers]
    mats.insert(stack.surface_index, shunt_abcd(surface_admittance))
    return cascade(mats)


def solve_stack(stack: StackSpec, surface_admittance: complex, frequency: float) -> CascadeSolution:
    """End-to-end T and Gamma of the stack for one surface admittance.

    through_power is the power fraction crossing into the load half-space,
    |T|^2 Re(1/Z_load*)/Re(1/Z_src*); for real impedances this is the familiar
    |T|^2 Z_src/Z_load.

    Raises DegenerateStackError when the denominator magnitude is below 1e-12,
    which signals a resonance singularity rather than a huge valid value.
    """
    m = stack_abcd(stack, surface_admittance, frequency)
    z_src = intrinsic_impedance(stack.source_medium, frequency)
    z_load = intrinsic_impedance(stack.load_medium, frequency)
    den = m.a + m.b / z_load + m.c * z_src + m.d * z_src / z_load
    if abs(den) < 1e-12:
        raise DegenerateStackError(f"singular stack: |denominator| = {abs(den):.3e}")
    t = 2.0 / den
    gamma = (m.a + m.b / z_load - m.c * z_src - m.d * z_src / z_load) / den
    flux_src = z_src.real / abs(z_src) ** 2
    flux_load = z_load.real / abs(z_load) ** 2
    return CascadeSolution(
        t=complex(t),
        gamma=complex(gamma),
        through_power=float(abs(t) ** 2 * flux_load / flux_src),
        reflected_power=float(abs(gamma) ** 2),
    )


def through_power_db(stack: StackSpec, surface_admittance: complex, frequency: float) -> float:
    """10 log10 of the through power; -inf when nothing gets through."""
    p = solve_stack(stack, surface_admittance, frequency).through_power
    if p <= 0.0:
        return float("-inf")
    return float(10.0 * np.log10(p))


def clamp_db(value: float, floor: float = DB_FLOOR) -> float:
    """Clamp a dB value to the file-emission floor (keeps CSVs finite)."""
    return max(float(value), floor)
