"""Spectral grid calculus: differentiation, integration, projection, shifts."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asdflow import (
    PeriodicProfile,
    TorusGrid,
    cosine_coefficient,
    derivative,
    integrate,
    mean_project,
    mode_amplitude,
    profile_from_coefficients,
    spectral_coefficients,
    translate,
)


class TestTorusGrid:
    def test_nodes_and_spacing(self):
        g = TorusGrid(8)
        assert g.nodes[0] == -np.pi
        assert np.allclose(np.diff(g.nodes), 2 * np.pi / 8)

    @pytest.mark.parametrize("n", [7, 9, 6, 0, -4])
    def test_rejects_bad_sizes(self, n):
        with pytest.raises(ValueError):
            TorusGrid(n)


class TestProfileValidation:
    def test_wrong_length(self, grid64):
        with pytest.raises(ValueError, match="64"):
            PeriodicProfile(grid64, np.zeros(32))

    def test_non_finite(self, grid64):
        values = np.zeros(64)
        values[3] = np.nan
        with pytest.raises(ValueError, match="finite"):
            PeriodicProfile(grid64, values)


class TestDerivative:
    def test_pure_mode_second_derivative(self):
        g = TorusGrid(64)
        u = PeriodicProfile.from_function(g, lambda x: np.cos(3 * x))
        d2 = derivative(u, 2)
        assert np.max(np.abs(d2.values + 9 * np.cos(3 * g.nodes))) <= 1e-11

    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_constant_annihilated(self, order):
        g = TorusGrid(32)
        u = PeriodicProfile.constant(g, 7.0)
        assert np.max(np.abs(derivative(u, order).values)) == 0.0

    def test_exp_sin_closed_form(self):
        # d/dx exp(sin x) = cos(x) exp(sin x)
        g = TorusGrid(128)
        u = PeriodicProfile.from_function(g, lambda x: np.exp(np.sin(x)))
        expected = np.cos(g.nodes) * np.exp(np.sin(g.nodes))
        assert np.max(np.abs(derivative(u, 1).values - expected)) <= 1e-10

    @pytest.mark.parametrize("order", [0, 5, -1])
    def test_order_out_of_range(self, order, grid64):
        u = PeriodicProfile.constant(grid64, 1.0)
        with pytest.raises(ValueError, match="order"):
            derivative(u, order)

    @pytest.mark.parametrize("k", [1, 5, 17, 31])
    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_mode_multiplier(self, k, order):
        # d^p/dx^p applied to a single mode multiplies by (ik)^p, k <= n/2 - 1
        g = TorusGrid(64)
        u = PeriodicProfile.from_function(g, lambda x: np.cos(k * x))
        v = PeriodicProfile.from_function(g, lambda x: np.sin(k * x))
        got = derivative(u, order).values + 1j * derivative(v, order).values
        expected = (1j * k) ** order * np.exp(1j * k * g.nodes)
        # roundoff floor: noise at mode m is amplified by m^order, worst at n/2
        floor = 200 * np.finfo(float).eps * ((g.n / 2) ** order + k**order) + 1e-13
        assert np.max(np.abs(got - expected)) <= floor


class TestIntegrate:
    def test_constant(self, grid64):
        assert integrate(PeriodicProfile.constant(grid64, 1.0)) == pytest.approx(2 * np.pi, abs=1e-14)

    @pytest.mark.parametrize("k", [1, 2, 7])
    def test_mode_orthogonality(self, k, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: np.cos(k * x))
        assert abs(integrate(u)) <= 1e-14

    def test_squared_perturbation(self, grid64):
        # (1 + 0.5 cos x)^2 integrates to 2*pi*(1 + 0.125)
        u = PeriodicProfile.from_function(grid64, lambda x: (1 + 0.5 * np.cos(x)) ** 2)
        assert integrate(u) == pytest.approx(2.25 * np.pi, rel=1e-14)


class TestMeanProject:
    def test_constant_to_zero(self, grid64):
        out = mean_project(PeriodicProfile.constant(grid64, 5.0))
        assert np.max(np.abs(out.values)) == 0.0

    def test_zero_mean_fixed_point(self, grid64):
        u = PeriodicProfile.from_function(grid64, np.cos)
        assert np.allclose(mean_project(u).values, u.values, atol=1e-15)

    def test_linearity(self, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: 2 + 0.3 * np.cos(2 * x))
        assert np.max(np.abs(mean_project(u).values - 0.3 * np.cos(2 * grid64.nodes))) <= 1e-14

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.floats(-5, 5), min_size=3, max_size=5), st.floats(-10, 10))
    def test_idempotent_and_zero_integral(self, amps, const):
        g = TorusGrid(32)
        values = np.full(g.n, const)
        for m, a in enumerate(amps, start=1):
            values += a * np.cos(m * g.nodes)
        u = PeriodicProfile(g, values)
        once = mean_project(u)
        twice = mean_project(once)
        assert np.max(np.abs(twice.values - once.values)) <= 1e-13 * (1 + np.max(np.abs(values)))
        assert abs(integrate(once)) <= 1e-12 * np.max(np.abs(u.values)) + 1e-14


class TestTranslate:
    def test_identity_shifts(self, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: np.exp(np.sin(x)))
        assert np.array_equal(translate(u, 0).values, u.values)
        assert np.array_equal(translate(u, 64).values, u.values)

    def test_half_period(self, grid64):
        u = PeriodicProfile.from_function(grid64, np.cos)
        assert np.max(np.abs(translate(u, 32).values + np.cos(grid64.nodes))) <= 1e-15

    def test_shift_samples_forward(self, grid64):
        u = PeriodicProfile.from_function(grid64, np.sin)
        got = translate(u, 5).values
        assert np.max(np.abs(got - np.sin(grid64.nodes + 5 * grid64.spacing))) <= 1e-12

    @pytest.mark.parametrize("m", [1, 7, 32, 63, -3])
    @pytest.mark.parametrize("order", [1, 4])
    def test_commutes_with_derivative(self, m, order, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: np.exp(np.sin(x)) + 0.1 * np.cos(5 * x))
        a = derivative(translate(u, m), order)
        b = translate(derivative(u, order), m)
        assert np.max(np.abs(a.values - b.values)) <= 1e-9


class TestSpectralCoefficients:
    def test_round_trip(self, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: np.exp(np.sin(2 * x)) - 1.3 * np.sin(x))
        back = profile_from_coefficients(grid64, spectral_coefficients(u))
        scale = np.max(np.abs(u.values))
        assert np.max(np.abs(back.values - u.values)) <= 1e-13 * scale

    @pytest.mark.parametrize("k", [1, 2, 3, 8])
    def test_cosine_coefficient_sign(self, k, grid64):
        # the -pi grid origin must not flip signs for odd modes
        u = PeriodicProfile.from_function(grid64, lambda x: 0.3 * np.cos(k * x))
        assert cosine_coefficient(u, k) == pytest.approx(0.3, abs=1e-14)
        assert mode_amplitude(u, k) == pytest.approx(0.3, abs=1e-14)

    def test_mixed_signal(self, grid64):
        u = PeriodicProfile.from_function(grid64, lambda x: 2.0 - 0.25 * np.cos(3 * x) + 0.1 * np.sin(3 * x))
        assert cosine_coefficient(u, 0) == pytest.approx(2.0, abs=1e-14)
        assert cosine_coefficient(u, 3) == pytest.approx(-0.25, abs=1e-14)
        assert mode_amplitude(u, 3) == pytest.approx(np.hypot(0.25, 0.1), abs=1e-14)
