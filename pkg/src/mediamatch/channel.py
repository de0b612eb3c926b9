"""Multipath feedback channel: h = h_env + sum_i s(V_i) h_i.

Channels are synthesized (the real system measures them): environment and
per-element paths are circularly-symmetric complex Gaussians drawn from a
seeded numpy Generator (PCG64), so every sampled quantity is a pure function
of (seed, params) and full runs replay bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cascade import StackSpec, solve_stack
from .surface import ElementCircuit, admittance_at_voltage


@dataclass(frozen=True)
class SurfaceConfig:
    """Per-element bias voltages."""

    voltages: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "voltages", tuple(float(v) for v in self.voltages))

    def __len__(self):
        return len(self.voltages)

    @classmethod
    def uniform(cls, voltage: float, n: int) -> "SurfaceConfig":
        return cls(voltages=(float(voltage),) * n)


class ElementResponder:
    """Maps a bias voltage to the element response s(V) on a given stack.

    s(V) is the end-to-end field transmission T of the stack with the
    element's admittance at that voltage inserted as the shunt surface; it is
    identical for every element (infinite-surface approximation).  The bare
    response (no surface, Y_s = 0) anchors all gain comparisons.  Responses
    are cached per voltage; repeated calls are bit-identical.
    """

    def __init__(self, stack: StackSpec, circuit: ElementCircuit, frequency: float,
                 coupling_offset: complex = 0j):
        self.stack = stack
        self.circuit = circuit
        self.frequency = frequency
        self.coupling_offset = complex(coupling_offset)
        self._cache: dict[float, complex] = {}
        self.s_bare = solve_stack(stack, 0j, frequency).t

    def s(self, voltage: float) -> complex:
        v = float(voltage)
        if v not in self._cache:
            ys = admittance_at_voltage(self.circuit, v, self.frequency).value
            self._cache[v] = solve_stack(self.stack, ys + self.coupling_offset,
                                         self.frequency).t
        return self._cache[v]


def element_response(responder: ElementResponder, voltage: float) -> complex:
    """s(V) for one element of the scenario surface."""
    return responder.s(voltage)


@dataclass(frozen=True)
class MultipathChannel:
    """One realization of the environment path and the per-element paths."""

    h_env: complex
    h_elements: np.ndarray          # shape (N,), complex
    seed: int
    responder: ElementResponder | None = None
    phase_jitter: np.ndarray | None = None  # optional per-element unit phasors

    @property
    def n_elements(self) -> int:
        return len(self.h_elements)

    def reciprocal(self) -> "MultipathChannel":
        """The reverse-direction channel under reciprocity: identical paths."""
        return self


def sample_channel(seed: int, n_elements: int, env_power: float = 0.0,
                   element_power: float | np.ndarray = 1.0,
                   responder: ElementResponder | None = None,
                   phase_jitter_std: float = 0.0) -> MultipathChannel:
    """Draw one channel realization from a named, seeded generator.

    env_power and element_power are variances of circularly-symmetric complex
    Gaussians; element_power may be a per-element profile.  env_power = 0
    models the absorber-walled bench (h_env identically zero).
    phase_jitter_std > 0 adds a fixed random phase per element to its
    response, a stress knob for the controller.
    """
    if n_elements < 1:
        raise ValueError("n_elements must be >= 1")
    profile = np.broadcast_to(np.asarray(element_power, dtype=float), (n_elements,))
    if np.any(profile < 0) or env_power < 0:
        raise ValueError("path variances must be non-negative")
    rng = np.random.default_rng(seed)
    scale = np.sqrt(profile / 2.0)
    h = rng.normal(0.0, 1.0, n_elements) * scale + 1j * rng.normal(0.0, 1.0, n_elements) * scale
    if env_power > 0:
        se = np.sqrt(env_power / 2.0)
        h_env = complex(rng.normal(0.0, se) + 1j * rng.normal(0.0, se))
    else:
        h_env = 0j
    jitter = None
    if phase_jitter_std > 0:
        jitter = np.exp(1j * rng.normal(0.0, phase_jitter_std, n_elements))
    return MultipathChannel(h_env=h_env, h_elements=h, seed=seed,
                            responder=responder, phase_jitter=jitter)


def _responses(channel: MultipathChannel, config: SurfaceConfig) -> np.ndarray:
    if channel.responder is None:
        raise ValueError("channel has no element responder attached")
    s = np.array([channel.responder.s(v) for v in config.voltages])
    if channel.phase_jitter is not None:
        s = s * channel.phase_jitter
    return s


def composite_channel(channel: MultipathChannel, config: SurfaceConfig) -> complex:
    """h_env + sum_i s(V_i) h_i for one surface configuration."""
    if len(config) != channel.n_elements:
        raise ValueError(f"config length {len(config)} != channel N {channel.n_elements}")
    return complex(channel.h_env + np.sum(_responses(channel, config) * channel.h_elements))


def baseline_channel(channel: MultipathChannel) -> complex:
    """Composite channel with the bare (no-surface) response on every element."""
    if channel.responder is None:
        raise ValueError("channel has no element responder attached")
    s = channel.responder.s_bare
    return complex(channel.h_env + s * np.sum(channel.h_elements))


@dataclass(frozen=True)
class FeedbackSample:
    rss_db: float
    noise_seed: int | None
    config: SurfaceConfig


def rss_feedback(channel: MultipathChannel, config: SurfaceConfig,
                 noise_db: float | None = None, noise_seed: int | None = None,
                 quantization_db: float | None = 0.1) -> FeedbackSample:
    """RSS of the composite channel in dB, with optional additive noise.

    Noise is complex Gaussian with power 10^(noise_db/10) relative to a
    unit-magnitude channel, drawn from its own seed so that repeated samples
    with the same seeds are identical.  RSS is reported at 0.1 dB granularity
    by default (typical RSSI resolution); pass quantization_db=None for a
    continuous readout.
    """
    h = composite_channel(channel, config)
    if noise_db is not None:
        rng = np.random.default_rng(noise_seed)
        s = np.sqrt(10.0 ** (noise_db / 10.0) / 2.0)
        h = h + complex(rng.normal(0.0, s) + 1j * rng.normal(0.0, s))
    mag = abs(h)
    rss = 20.0 * np.log10(mag) if mag > 0 else float("-inf")
    if quantization_db and np.isfinite(rss):
        rss = round(rss / quantization_db) * quantization_db
    return FeedbackSample(rss_db=float(rss), noise_seed=noise_seed, config=config)


def backscatter_gain(downlink: MultipathChannel, uplink: MultipathChannel,
                     config: SurfaceConfig) -> float:
    """Two-way (backscatter) gain in dB against the no-surface baseline.

    The backscatter output is taken proportional to its input power, so the
    end-to-end magnitude is the product |h_down| * |h_up| and the dB gains of
    the two directions add.  With uplink == downlink (reciprocal mode) the
    result is exactly twice the one-way gain.
    """
    if downlink.n_elements != uplink.n_elements:
        raise ValueError("downlink and uplink must share the element count")
    down = abs(composite_channel(downlink, config)) * abs(composite_channel(uplink, config))
    base = abs(baseline_channel(downlink)) * abs(baseline_channel(uplink))
    if down <= 0 or base <= 0:
        return float("-inf")
    return float(20.0 * np.log10(down) - 20.0 * np.log10(base))


def oneway_gain(channel: MultipathChannel, config: SurfaceConfig) -> float:
    """One-way gain in dB of a configuration against the no-surface baseline."""
    num = abs(composite_channel(channel, config))
    den = abs(baseline_channel(channel))
    if num <= 0 or den <= 0:
        return float("-inf")
    return float(20.0 * np.log10(num) - 20.0 * np.log10(den))
