import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from prolate_superres.basis import evaluate_modes
from prolate_superres.errors import EigenvalueUnderflowError, NumericalError
from prolate_superres.imaging import (
    ModeCoefficients,
    SpectrumField,
    decompose,
    fourier_transform,
    propagate_coeffs,
)
from prolate_superres.noise import NoiseModel, photon_normalization, sample_measurement, sample_measurements
from prolate_superres.reconstruction import (
    ReconstructionResult,
    band_errors,
    extended_spectrum,
    mode_spectra,
    predicted_coefficient_variance,
    reconstruct,
    reconstruct_coeffs,
    rms_band_error,
    superresolution_factor,
)

XI = np.linspace(-12, 12, 1201)
LN10 = np.log(10.0)


@pytest.fixture(scope="module")
def exact(dg_object):
    return fourier_transform(dg_object, XI)


@pytest.fixture(scope="module")
def ideal_a(dg_object):
    return decompose(dg_object)


def invert_rows(F, basis):
    return np.array([reconstruct_coeffs(ModeCoefficients("fourier", row), basis).values for row in F])


def brute_force_factor(recon, exact, tau):
    """Direct scan: every band |xi| <= X integrated from scratch."""
    best = 0.0
    for X in np.unique(np.abs(recon.xi)):
        if np.count_nonzero(np.abs(recon.xi) <= X) < 2:
            continue
        if rms_band_error(recon, exact, X) > tau:
            break
        best = X
    return best


class TestReconstructCoeffs:
    @given(arrays(np.complex128, 6, elements=st.complex_numbers(max_magnitude=100, allow_nan=False,
                                                                  allow_infinity=False)))
    def test_exact_inverse(self, basis6, v):
        f = propagate_coeffs(ModeCoefficients("object", v), basis6, "fourier")
        back = reconstruct_coeffs(sample_measurement(f, basis6, NoiseModel()), basis6)
        np.testing.assert_allclose(back.values, v, rtol=1e-10, atol=1e-10)

    def test_unit_fundamental(self, basis6):
        f = ModeCoefficients("fourier", np.sqrt(basis6.eigenvalues[0]) * np.eye(6)[0])
        np.testing.assert_allclose(reconstruct_coeffs(f, basis6).values, np.eye(6)[0], atol=1e-15)

    def test_underflow_names_mode(self, basis6):
        f = ModeCoefficients("fourier", np.ones(6))
        with pytest.raises(EigenvalueUnderflowError, match="mode 5") as info:
            reconstruct_coeffs(f, basis6, min_eigenvalue=1e-10)
        assert info.value.mode == 5

    def test_too_many_coefficients(self, basis6):
        with pytest.raises(ValueError):
            reconstruct_coeffs(ModeCoefficients("fourier", np.ones(7)), basis6)

    @pytest.mark.slow
    def test_noise_std_of_last_mode(self, basis6, dg_object, ideal_a):
        A = photon_normalization(dg_object, 1e12)
        f = propagate_coeffs(ideal_a, basis6, "fourier")
        F = sample_measurements(f, basis6, NoiseModel.coherent(1e12, seed=5), A, trials=10_000)
        rec = invert_rows(F, basis6)
        expected_sd = 1 / (2 * np.sqrt(basis6.eigenvalues[5]) * A)
        assert np.std(rec[:, 5].real) == pytest.approx(expected_sd, rel=0.05)
        assert np.std(rec[:, 5].imag) == pytest.approx(expected_sd, rel=0.05)

    def test_predicted_variance_closed_form(self, basis6):
        v = predicted_coefficient_variance(basis6, NoiseModel.coherent(1.0), 2.0)
        np.testing.assert_allclose(v, 0.25 / (basis6.eigenvalues * 4.0), rtol=1e-14)
        assert np.all(np.diff(v) > 0)


class TestVarianceLaws:
    """Per-quadrature variance of reconstructed coefficients from 10^4 trials."""

    def _var(self, basis6, dg_object, ideal_a, model):
        A = photon_normalization(dg_object, model.mean_photons)
        f = propagate_coeffs(ideal_a, basis6, "fourier")
        F = sample_measurements(f, basis6, model, A, trials=10_000)
        rec = invert_rows(F, basis6)
        return 0.5 * (np.var(rec.real, axis=0) + np.var(rec.imag, axis=0))

    @pytest.mark.slow
    def test_amplification_ordering(self, basis6, dg_object, ideal_a):
        v = self._var(basis6, dg_object, ideal_a, NoiseModel.coherent(1e12, seed=6))
        assert np.all(np.diff(v) > 0)

    @pytest.mark.slow
    def test_photon_number_law(self, basis6, dg_object, ideal_a):
        v1 = self._var(basis6, dg_object, ideal_a, NoiseModel.coherent(1e12, seed=7))
        v2 = self._var(basis6, dg_object, ideal_a, NoiseModel.coherent(2e12, seed=8))
        np.testing.assert_allclose(v1 / v2, 2.0, rtol=0.05)

    @pytest.mark.slow
    def test_squeezing_law(self, basis6, dg_object, ideal_a):
        coh = self._var(basis6, dg_object, ideal_a, NoiseModel.coherent(1e12, seed=9))
        sq = self._var(basis6, dg_object, ideal_a, NoiseModel.squeezed(1e12, LN10, seed=10))
        np.testing.assert_allclose(sq / coh, 1e-2, rtol=0.10)

    def test_partial_squeezing_only_helps_squeezed_modes(self, basis6, dg_object, ideal_a):
        A = photon_normalization(dg_object, 1e12)
        coh = predicted_coefficient_variance(basis6, NoiseModel.coherent(1e12), A)
        sq = predicted_coefficient_variance(basis6, NoiseModel.squeezed(1e12, 1.0, squeezed_modes=3), A)
        assert np.all(sq[:3] < coh[:3])
        np.testing.assert_array_equal(sq[3:], coh[3:])


class TestExtendedSpectrum:
    def test_zero(self, basis6):
        s = extended_spectrum(ModeCoefficients("object", np.zeros(6)), basis6, XI)
        assert np.all(s.values == 0)

    def test_matches_mode_by_mode_sum(self, basis6, ideal_a):
        # independent route: F[phi_k](xi) = i^k sqrt(lambda_k) phi_k(xi) for all xi
        s = extended_spectrum(ideal_a, basis6, XI)
        mu = np.array([1, 1j, -1, -1j, 1, 1j]) * np.sqrt(basis6.eigenvalues)
        direct = (ideal_a.values * mu) @ evaluate_modes(basis6, XI)
        np.testing.assert_allclose(s.values, direct, atol=1e-10)

    def test_band_non_decreasing_in_K(self, basis6, ideal_a, exact):
        factors = []
        for K in (2, 6):
            s = extended_spectrum(ModeCoefficients("object", ideal_a.values[:K]), basis6, XI)
            factors.append(superresolution_factor(s, exact, 0.1))
        assert factors[1] >= factors[0]

    def test_noiseless_six_mode_factor(self, basis6, ideal_a, exact):
        s = extended_spectrum(ideal_a, basis6, XI)
        got = superresolution_factor(s, exact, 0.1)
        # brute-force scan with mode-by-mode spectrum as an independent path
        mu = np.array([1, 1j, -1, -1j, 1, 1j]) * np.sqrt(basis6.eigenvalues)
        direct = SpectrumField(XI, (ideal_a.values * mu) @ evaluate_modes(basis6, XI))
        assert got == brute_force_factor(direct, exact, 0.1)
        assert got > 1.0


class TestBandError:
    def test_identical(self, exact):
        assert rms_band_error(exact, exact, 6.0) == 0.0

    def test_zero_recon(self, exact):
        zero = SpectrumField(XI, np.zeros_like(XI))
        assert rms_band_error(zero, exact, 6.0) == pytest.approx(1.0, rel=1e-14)

    @pytest.mark.parametrize("inner", [0.5, 1.0, 3.0])
    def test_monotone_when_exact_on_inner_band(self, exact, inner):
        trunc = SpectrumField(XI, np.where(np.abs(XI) <= inner, exact.values, 0))
        edges, err = band_errors(trunc, exact)
        assert np.all(np.diff(err) >= -1e-15)
        assert np.all(err[edges <= inner] == 0)

    @given(arrays(np.float64, (4, 61), elements=st.floats(-5, 5)))
    def test_cumulative_matches_direct(self, data):
        xi = np.linspace(-3, 3, 61)
        exact = SpectrumField(xi, data[0] + 1j * data[1] + 10.0)
        recon = SpectrumField(xi, data[2] + 1j * data[3])
        edges, err = band_errors(recon, exact)
        for X, e in zip(edges[::7], err[::7]):
            assert e == pytest.approx(rms_band_error(recon, exact, X), rel=1e-8, abs=1e-12)

    def test_grid_mismatch(self, exact):
        other = SpectrumField(XI + 1e-3, exact.values)
        with pytest.raises(ValueError):
            rms_band_error(other, exact, 2.0)


class TestSuperresolutionFactor:
    def test_perfect(self, exact):
        assert superresolution_factor(exact, exact, 0.1) == 12.0

    def test_pupil_truncation(self, exact):
        trunc = SpectrumField(XI, np.where(np.abs(XI) <= 1.0, exact.values, 0))
        assert superresolution_factor(trunc, exact, 1e-3) == pytest.approx(1.0, abs=0.05)

    def test_zero_exact(self):
        z = SpectrumField(XI, np.zeros_like(XI))
        with pytest.raises(NumericalError):
            superresolution_factor(z, z, 0.1)

    def test_total_failure_gives_zero(self, exact):
        wrong = SpectrumField(XI, -exact.values)
        assert superresolution_factor(wrong, exact, 0.1) == 0.0

    def test_bad_tau(self, exact):
        with pytest.raises(ValueError):
            superresolution_factor(exact, exact, 0.0)


class TestReconstruct:
    def test_result_fields(self, basis6, ideal_a, exact):
        f = propagate_coeffs(ideal_a, basis6, "fourier")
        r = reconstruct(sample_measurement(f, basis6, NoiseModel()), basis6, exact)
        assert isinstance(r, ReconstructionResult)
        assert r.K_used == 6
        np.testing.assert_allclose(r.recon_coeffs.values, ideal_a.values, atol=1e-10)
        assert np.array_equal(r.recon_spectrum.xi, r.exact_spectrum.xi)
        assert r.superres_factor >= 0
        d = r.to_dict()
        assert d["K_used"] == 6 and len(d["recon_coeffs"]["re"]) == 6

    def test_cached_mode_spectra_match_direct(self, basis6, dg_object, ideal_a, exact):
        f = propagate_coeffs(ideal_a, basis6, "fourier")
        A = photon_normalization(dg_object, 1e12)
        m = sample_measurement(f, basis6, NoiseModel.coherent(1e12, seed=3), A)
        direct = reconstruct(m, basis6, exact)
        cached = reconstruct(m, basis6, exact, spectra=mode_spectra(basis6, XI))
        np.testing.assert_allclose(cached.recon_spectrum.values, direct.recon_spectrum.values,
                                   rtol=1e-12, atol=1e-14)
        assert cached.superres_factor == direct.superres_factor

    @pytest.mark.slow
    def test_median_factor_improves_with_photons_and_squeezing(self, basis6, dg_object, ideal_a, exact):
        from scipy.stats import mannwhitneyu

        f = propagate_coeffs(ideal_a, basis6, "fourier")

        def factors(model):
            A = photon_normalization(dg_object, model.mean_photons)
            return [reconstruct(sample_measurement(f, basis6, model, A, t), basis6, exact).superres_factor
                    for t in range(100)]

        low = factors(NoiseModel.coherent(1e12, seed=1))
        high = factors(NoiseModel.coherent(1e14, seed=1))
        sq = factors(NoiseModel.squeezed(1e12, LN10, seed=1))
        assert np.median(high) >= np.median(low)
        assert np.median(sq) >= np.median(low)
        assert mannwhitneyu(high, low, alternative="greater").pvalue < 0.05
