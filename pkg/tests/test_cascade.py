"""ABCD cascade: construction, reduction to the bare interface, conservation laws."""

import numpy as np
import pytest

from mediamatch.cascade import (AbcdMatrix, DegenerateStackError, IDENTITY, StackSpec,
                                cascade, line_abcd, shunt_abcd, solve_stack,
                                through_power_db)
from mediamatch.media import AIR, Layer, Medium, WATER, fresnel_interface

import oracles

F0 = 2.4e9


def random_lossless_medium(rng):
    return Medium("m", float(rng.uniform(1, 100)))


class TestShuntAbcd:
    def test_zero_admittance_is_identity(self):
        assert shunt_abcd(0j) == IDENTITY

    def test_definitional(self):
        m = shunt_abcd(0.05j)
        assert (m.a, m.b, m.c, m.d) == (1, 0, 0.05j, 1)

    def test_unimodular(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            y = complex(rng.normal(), rng.normal())
            assert shunt_abcd(y).det() == pytest.approx(1.0, abs=1e-12)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            shunt_abcd(complex(np.inf, 0))


class TestLineAbcd:
    def test_tiny_length_is_identity(self):
        m = line_abcd(Layer(AIR, 1e-12), F0)
        assert abs(m.a - 1) < 1e-9 and abs(m.d - 1) < 1e-9
        assert abs(m.b) < 1e-6 and abs(m.c) < 1e-9

    def test_quarter_wave_air(self):
        # beta l = pi/2 at l = (pi/2) / (omega/c) = 31.2284 mm
        m = line_abcd(Layer(AIR, 0.031228381041666666), F0)
        assert abs(m.a) < 1e-6 and abs(m.d) < 1e-6
        assert m.b == pytest.approx(376.730313668j, abs=1e-6)
        assert m.c == pytest.approx(1j / 376.730313668, abs=1e-9)

    def test_unimodular_random_lossless(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            layer = Layer(random_lossless_medium(rng), float(rng.uniform(1e-4, 5e-2)))
            assert line_abcd(layer, F0).det() == pytest.approx(1.0, abs=1e-9)


class TestCascade:
    def test_identity(self):
        assert cascade([IDENTITY]) == IDENTITY

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            cascade([])

    def test_inverse_product(self):
        """cascade(A, A^-1) == I for random unimodular matrices."""
        rng = np.random.default_rng(3)
        for _ in range(50):
            a = complex(rng.normal(), rng.normal())
            b = complex(rng.normal(), rng.normal())
            c = complex(rng.normal(), rng.normal())
            d = (1 + b * c) / a  # forces det = 1
            m = AbcdMatrix(a, b, c, d)
            inv = AbcdMatrix(d, -b, -c, a)
            prod = cascade([m, inv])
            assert prod.a == pytest.approx(1, abs=1e-9)
            assert prod.d == pytest.approx(1, abs=1e-9)
            assert abs(prod.b) < 1e-9 and abs(prod.c) < 1e-9

    def test_surface_first_ordering(self):
        """Shunt-then-line equals the explicit product in that order."""
        stack = StackSpec(AIR, WATER, (Layer(AIR, 6e-3),), surface_index=0)
        ys = 0.007j
        via_solve = solve_stack(stack, ys, F0)
        m = cascade([shunt_abcd(ys), line_abcd(Layer(AIR, 6e-3), F0)])
        z0 = 376.730313668
        zw = z0 / 9.0
        den = m.a + m.b / zw + m.c * z0 + m.d * z0 / zw
        assert via_solve.t == pytest.approx(2.0 / den, abs=1e-12)


class TestSolveStack:
    def test_trivial_same_media(self):
        stack = StackSpec(AIR, AIR)
        sol = solve_stack(stack, 0j, F0)
        assert sol.t == pytest.approx(1.0, abs=1e-12)
        assert sol.gamma == pytest.approx(0.0, abs=1e-12)

    def test_reduces_to_fresnel(self):
        stack = StackSpec(AIR, WATER)
        sol = solve_stack(stack, 0j, F0)
        ref = fresnel_interface(AIR, WATER, F0)
        assert sol.gamma == pytest.approx(ref.gamma, abs=1e-12)
        assert sol.through_power == pytest.approx(ref.through_power, abs=1e-12)
        assert through_power_db(stack, 0j, F0) == pytest.approx(-4.436974992327127, abs=1e-9)

    def test_reduction_randomized_media_pairs(self):
        rng = np.random.default_rng(4)
        for _ in range(300):
            src, dst = random_lossless_medium(rng), random_lossless_medium(rng)
            sol = solve_stack(StackSpec(src, dst), 0j, F0)
            ref = fresnel_interface(src, dst, F0)
            assert abs(sol.gamma - ref.gamma) < 1e-12
            assert abs(sol.through_power - ref.through_power) < 1e-12

    def test_energy_conservation_random_stacks(self):
        """Lossless layers + imaginary shunt: |G|^2 + through == 1."""
        rng = np.random.default_rng(5)
        for _ in range(300):
            n_layers = int(rng.integers(0, 4))
            layers = tuple(Layer(random_lossless_medium(rng), float(rng.uniform(1e-4, 3e-2)))
                           for _ in range(n_layers))
            stack = StackSpec(random_lossless_medium(rng), random_lossless_medium(rng),
                              layers, surface_index=int(rng.integers(0, n_layers + 1)))
            ys = 1j * float(rng.uniform(-0.2, 0.2))
            sol = solve_stack(stack, ys, F0)
            assert sol.reflected_power + sol.through_power == pytest.approx(1.0, abs=1e-9)
            assert sol.reflected_power <= 1.0 + 1e-9

    def test_matches_impedance_recursion_oracle(self):
        """Cross-check T against the independent recursion, random stacks."""
        rng = np.random.default_rng(6)
        for _ in range(100):
            n_layers = int(rng.integers(1, 4))
            eps = [float(rng.uniform(1, 80)) for _ in range(n_layers)]
            ths = [float(rng.uniform(1e-3, 2e-2)) for _ in range(n_layers)]
            b = float(rng.uniform(0, 0.1))
            layers = tuple(Layer(Medium("m", e), t) for e, t in zip(eps, ths))
            stack = StackSpec(AIR, WATER, layers, surface_index=0)
            got = solve_stack(stack, 1j * b, F0).through_power
            want = oracles.through_power_lossless(
                [(e, 0.0, t) for e, t in zip(eps, ths)], (1.0, 0.0), (81.0, 0.0), b, F0)
            assert got == pytest.approx(want, abs=1e-9)

    def test_gain_reciprocity(self):
        """Matched-vs-bare gain is direction independent for lossless stacks."""
        rng = np.random.default_rng(7)
        for _ in range(50):
            layers = tuple(Layer(random_lossless_medium(rng), float(rng.uniform(1e-3, 2e-2)))
                           for _ in range(int(rng.integers(1, 4))))
            stack = StackSpec(AIR, random_lossless_medium(rng), layers, surface_index=0)
            ys = 1j * float(rng.uniform(0, 0.1))
            fwd = solve_stack(stack, ys, F0).through_power / solve_stack(stack, 0j, F0).through_power
            rev_stack = stack.reversed()
            rev = solve_stack(rev_stack, ys, F0).through_power / solve_stack(rev_stack, 0j, F0).through_power
            assert 10 * np.log10(fwd) == pytest.approx(10 * np.log10(rev), abs=1e-9)

    def test_depth_only_adds_phase_when_lossless(self):
        base = StackSpec(AIR, WATER, (Layer(AIR, 6e-3),))
        deeper = StackSpec(AIR, WATER, (Layer(AIR, 6e-3), Layer(WATER, 0.05)))
        t0 = solve_stack(base, 0.007j, F0).t
        t1 = solve_stack(deeper, 0.007j, F0).t
        assert abs(t1) == pytest.approx(abs(t0), abs=1e-12)
        assert t1 != pytest.approx(t0)  # phase moved

    def test_surface_index_bounds(self):
        with pytest.raises(ValueError):
            StackSpec(AIR, WATER, (Layer(AIR, 6e-3),), surface_index=2)

    def test_through_power_db_floor(self):
        stack = StackSpec(AIR, AIR)
        assert through_power_db(stack, 0j, F0) == pytest.approx(0.0, abs=1e-12)

    def test_degenerate_stack_raises(self):
        # passive stacks keep the denominator away from zero (|T| is bounded);
        # an active shunt can null it: with no layers den = 2 + Y Z0, so
        # Y = -2/Z0 is exactly singular
        stack = StackSpec(AIR, AIR)
        with pytest.raises(DegenerateStackError):
            solve_stack(stack, complex(-2.0 / 376.730313668, 0.0), F0)
