"""Spectra, Jacobians, rate fits, branch tracing, pitchfork certification."""

from __future__ import annotations

import numpy as np
import pytest

from asdflow import (
    BranchSample,
    ParameterError,
    PeriodicProfile,
    TorusGrid,
    bifurcation_scan,
    cylinder_spectrum,
    fit_mode_rate,
    fit_pitchfork,
    jacobian_spectrum,
    newton_polish,
    numerical_jacobian,
    surface_diffusion_rhs,
    trace_branch,
    unduloid_profile,
)
from asdflow.analysis import leading_rate
from asdflow.dynamics import TrajectoryRecord

# quadratic fit of exact branch data (30-digit quadrature), mode 1,
# amplitude grid from ecc in {0, +-0.05, +-0.1}; the true curve's quartic
# term biases lambda0 below 1 by 7.8e-6 for this grid
ORACLE_FIT_L1 = {"lambda0": 0.999992224429, "d2lambda": -1.486605}
ORACLE_SAMPLES_L1 = {
    0.05: {"lambda": 0.998127046942053, "amplitude": 0.050023442767240},
    0.10: {"lambda": 0.992532567937784, "amplitude": 0.100187666365882},
}


class TestCylinderSpectrum:
    def test_reference_rates(self):
        assert cylinder_spectrum(2.0, 1).entries[-1][1].real == pytest.approx(-0.75)
        assert cylinder_spectrum(1.0, 1).entries[-1][1].real == pytest.approx(0.0, abs=1e-15)
        assert cylinder_spectrum(0.5, 1).entries[-1][1].real == pytest.approx(3.0)

    def test_formula_sweep(self):
        report = cylinder_spectrum(2.0, 5)
        rates = [mu.real for k, mu, _ in report.entries if k >= 1]
        assert rates == pytest.approx([-0.75, -15.0, -78.75, -252.0, -618.75])

    def test_zero_mode_only_in_full_problem(self):
        full = cylinder_spectrum(1.5, 3, reduced=False)
        reduced = cylinder_spectrum(1.5, 3, reduced=True)
        assert full.entries[0] == (0, 0.0 + 0.0j, 1)
        assert all(k >= 1 for k, _, _ in reduced.entries)

    def test_multiplicity_two(self):
        report = cylinder_spectrum(2.0, 4)
        assert all(m == 2 for k, _, m in report.entries if k >= 1)

    def test_sign_structure(self):
        # all damped iff radius > 1; some growth iff radius < 1
        for radius in (1.1, 2.0, 7.0):
            rates = [mu.real for k, mu, _ in cylinder_spectrum(radius, 8, reduced=True).entries]
            assert all(mu < 0 for mu in rates)
        for radius in (0.9, 0.5, 0.2):
            rates = [mu.real for k, mu, _ in cylinder_spectrum(radius, 8, reduced=True).entries]
            assert any(mu > 0 for mu in rates)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ParameterError):
            cylinder_spectrum(-1.0, 3)


class TestNumericalJacobian:
    def test_cylinder_eigenvalues_match_analytic(self):
        # extrapolated differencing; modes k <= n/4 with multiplicity 2
        n = 32
        g = TorusGrid(n)
        for radius in (0.5, 2.0):
            jac = numerical_jacobian(PeriodicProfile.constant(g, radius), h=3e-5, extrapolate=True)
            eig = np.sort(np.linalg.eigvals(jac).real)
            for k in range(0, n // 4 + 1):
                mu = k * k * (1.0 / radius**2 - k * k)
                dist = np.sort(np.abs(eig - mu))
                worst = dist[1] if k >= 1 else dist[0]
                assert worst <= 1e-6, f"mode {k} at radius {radius}: {worst:.2e}"

    def test_constant_direction_in_kernel(self, grid64):
        # plain bump columns each carry an O(h^2) bias that accumulates in the
        # row sums; the extrapolated variant cancels it
        jac = numerical_jacobian(PeriodicProfile.constant(grid64, 2.0), extrapolate=True)
        assert np.max(np.abs(jac @ np.ones(grid64.n))) <= 1e-6

    def test_requires_equilibrium(self, grid64):
        r = PeriodicProfile.from_function(grid64, lambda x: 2 + 0.1 * np.cos(x))
        with pytest.raises(ParameterError, match="equilibrium"):
            numerical_jacobian(r)

    def test_unduloid_has_unstable_direction(self):
        g = TorusGrid(96)
        jac = numerical_jacobian(unduloid_profile(0.1, 1, g))
        assert leading_rate(jac) > 1e-3

    def test_spectrum_report_sorted(self, grid64):
        jac = numerical_jacobian(PeriodicProfile.constant(grid64, 2.0))
        report = jacobian_spectrum(jac, radius=2.0)
        reals = [mu.real for _, mu, _ in report.entries]
        assert reals == sorted(reals, reverse=True)
        assert report.source == "numerical_jacobian"


class TestFitModeRate:
    @staticmethod
    def _synthetic(rate: float, amp0: float = 1e-4):
        times = np.linspace(0.0, 2.0, 81)
        amps = amp0 * np.exp(rate * times)
        zeros = np.zeros_like(times)
        return TrajectoryRecord(
            times=times, volume=zeros, area=zeros, min_r=zeros, max_r=zeros,
            mode_amps=np.vstack([amps, amps * 0.5]), snapshots=[], termination="reached_t_end",
        )

    def test_recovers_exact_exponential(self):
        rec = self._synthetic(-0.75)
        assert fit_mode_rate(rec, 1, (0.0, 2.0)) == pytest.approx(-0.75, abs=1e-12)

    def test_window_restriction(self):
        rec = self._synthetic(3.0)
        assert fit_mode_rate(rec, 2, (0.5, 1.5)) == pytest.approx(3.0, abs=1e-12)

    def test_too_few_samples(self):
        rec = self._synthetic(1.0)
        with pytest.raises(ValueError, match="at least 5"):
            fit_mode_rate(rec, 1, (0.0, 0.05))

    def test_unknown_mode(self):
        rec = self._synthetic(1.0)
        with pytest.raises(ValueError, match="tracked"):
            fit_mode_rate(rec, 7, (0.0, 2.0))


class TestBranch:
    def test_cylinder_anchor(self):
        (sample,) = trace_branch(1, [0.0], 64, with_spectrum=False)
        assert sample.lam == pytest.approx(1.0, abs=1e-12)
        assert sample.amplitude == 0.0
        assert sample.residual <= 1e-11

    def test_subcritical_and_even(self):
        samples = trace_branch(1, [0.1, -0.1], 128, with_spectrum=False)
        lam_plus, lam_minus = samples[0].lam, samples[1].lam
        assert lam_plus < 1.0
        assert lam_plus == pytest.approx(lam_minus, abs=1e-8)
        assert samples[0].amplitude == pytest.approx(-samples[1].amplitude, abs=1e-8)

    def test_oracle_sample_values(self):
        samples = trace_branch(1, [0.05, 0.1], 256, with_spectrum=False)
        for ecc, sample in zip((0.05, 0.1), samples):
            oracle = ORACLE_SAMPLES_L1[ecc]
            assert sample.lam == pytest.approx(oracle["lambda"], abs=1e-9)
            assert sample.amplitude == pytest.approx(oracle["amplitude"], abs=1e-9)

    def test_period_scaling(self):
        (s1,) = trace_branch(1, [0.1], 128, with_spectrum=False)
        (s2,) = trace_branch(2, [0.1], 128, with_spectrum=False)
        assert s2.lam / 2 == pytest.approx(s1.lam, abs=1e-9)

    def test_leading_rate_positive_off_cylinder(self):
        (sample,) = trace_branch(1, [0.1], 96)
        assert sample.leading_mu > 1e-3

    def test_residual_bound(self):
        samples = trace_branch(1, [0.0, 0.2, -0.2], 256, with_spectrum=False)
        assert all(s.residual <= 1e-5 for s in samples)


class TestPitchforkFit:
    def test_exact_parabola_recovered(self):
        s_values = np.array([-0.2, -0.1, 0.0, 0.1, 0.2])
        samples = [
            BranchSample(0.0, 2.0 + 0.5 * s - 3.0 * s * s / 2, s, 0.0, 0.0) for s in s_values
        ]
        fit = fit_pitchfork(samples)
        assert fit.lambda0 == pytest.approx(2.0, abs=1e-13)
        assert fit.dlambda == pytest.approx(0.5, abs=1e-12)
        assert fit.d2lambda == pytest.approx(-3.0, abs=1e-11)

    def test_requires_five_samples(self):
        samples = [BranchSample(0.0, 1.0, s, 0.0, 0.0) for s in (0.0, 0.1, 0.2, 0.3)]
        with pytest.raises(ValueError, match="at least 5"):
            fit_pitchfork(samples)

    def test_degenerate_amplitudes(self):
        samples = [BranchSample(0.0, 1.0, 0.1, 0.0, 0.0)] * 5
        with pytest.raises(ValueError, match="degenerate"):
            fit_pitchfork(samples)

    def test_against_branch_oracle(self):
        samples = trace_branch(1, [0.0, 0.05, -0.05, 0.1, -0.1], 256, with_spectrum=False)
        fit = fit_pitchfork(samples)
        assert fit.lambda0 == pytest.approx(ORACLE_FIT_L1["lambda0"], abs=2e-8)
        assert abs(fit.dlambda) <= 1e-8
        assert fit.d2lambda == pytest.approx(ORACLE_FIT_L1["d2lambda"], rel=1e-4)

    def test_one_sided_grid_from_cli_shape(self):
        # one-sided grids stay usable (the fit matrix is nondegenerate)
        samples = trace_branch(1, [0.0, 0.1, 0.2, 0.3, 0.4], 128, with_spectrum=False)
        fit = fit_pitchfork(samples)
        assert fit.lambda0 == pytest.approx(1.0, abs=5e-3)
        assert fit.d2lambda < 0


class TestBifurcationScan:
    def test_flags_only_integers(self):
        lams = [0.1 + 0.01 * i for i in range(341)]  # 0.1 .. 3.5
        flagged = bifurcation_scan(lams, k_max=4)
        assert [round(v) for v in flagged] == [1, 2, 3]
        assert all(abs(v - round(v)) <= 1e-4 for v in flagged)

    def test_quiet_off_integers(self):
        flagged = bifurcation_scan([0.5, 0.6, 0.7, 0.8, 0.9], k_max=3)
        assert flagged == []

    def test_exact_hit_flagged(self):
        assert bifurcation_scan([1.5, 2.0, 2.5], k_max=3) == [2.0]


class TestNewtonPolish:
    @staticmethod
    def _corrupted(g: TorusGrid, ecc: float) -> tuple[PeriodicProfile, PeriodicProfile]:
        clean = unduloid_profile(ecc, 1, g)
        rough = PeriodicProfile(g, clean.values + 2e-6 * np.cos(2 * g.nodes))
        return clean, rough

    def test_residual_drops_below_1e9(self):
        # corrupt a resolved equilibrium so the polish has real work to do
        g = TorusGrid(64)
        clean, rough = self._corrupted(g, 0.2)
        assert np.max(np.abs(surface_diffusion_rhs(rough).values)) > 1e-6
        polished = newton_polish(rough)
        res = np.max(np.abs(surface_diffusion_rhs(polished).values))
        assert res <= 1e-9
        # polish recovers a nearby equilibrium: it keeps the corrupted volume,
        # so it lands a hair away from the uncorrupted unduloid
        assert np.max(np.abs(polished.values - rough.values)) <= 1e-5
        assert np.max(np.abs(polished.values - clean.values)) <= 1e-7

    def test_volume_preserved(self):
        from asdflow import volume_functional

        g = TorusGrid(64)
        _, rough = self._corrupted(g, 0.15)
        polished = newton_polish(rough)
        assert volume_functional(polished) == pytest.approx(volume_functional(rough), rel=1e-12)
