"""Inversion of measured Fourier-plane coefficients and spectrum error metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .basis import ProlateBasis
from .errors import EigenvalueUnderflowError, NumericalError
from .imaging import (
    ModeCoefficients,
    ObjectField,
    SpectrumField,
    fourier_transform,
    i_power,
    synthesize,
)
from .noise import MeasuredCoefficients, NoiseModel, quadrature_variances

__all__ = [
    "ReconstructionResult",
    "reconstruct_coeffs",
    "extended_spectrum",
    "mode_spectra",
    "rms_band_error",
    "band_errors",
    "superresolution_factor",
    "predicted_coefficient_variance",
    "reconstruct",
]


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    recon_coeffs: ModeCoefficients
    recon_object: ObjectField
    recon_spectrum: SpectrumField
    exact_spectrum: SpectrumField
    rms_band_error: float
    superres_factor: float
    K_used: int

    def __post_init__(self):
        if not np.array_equal(self.recon_spectrum.xi, self.exact_spectrum.xi):
            raise ValueError("reconstructed and exact spectra must share one grid")
        if self.superres_factor < 0:
            raise ValueError("superres_factor must be >= 0")

    def to_dict(self) -> dict:
        vals = self.recon_coeffs.values
        return {
            "K_used": self.K_used,
            "recon_coeffs": {"re": vals.real.tolist(), "im": vals.imag.tolist()},
            "rms_band_error": self.rms_band_error,
            "superres_factor": self.superres_factor,
        }


def reconstruct_coeffs(measured: MeasuredCoefficients | ModeCoefficients, basis: ProlateBasis,
                       min_eigenvalue: float | None = None) -> ModeCoefficients:
    """a_k = F_k / (i**k sqrt(lambda_k)).

    Modes whose eigenvalue is below ``min_eigenvalue`` (default
    ``basis.config.min_ratio * lambda_0``) are refused.
    """
    values = np.asarray(measured.values)
    K = values.size
    if K > basis.num_modes:
        raise ValueError(f"{K} measured coefficients but basis has {basis.num_modes} modes")
    lam = basis.eigenvalues[:K]
    floor = basis.config.min_ratio * basis.eigenvalues[0] if min_eigenvalue is None else min_eigenvalue
    bad = np.flatnonzero(~(lam > floor))
    if bad.size:
        k = int(bad[0])
        raise EigenvalueUnderflowError(
            f"mode {k} has lambda_{k} = {lam[k]:.3e} below the reconstruction floor {floor:.3e}; "
            f"use at most {k} modes",
            mode=k,
        )
    return ModeCoefficients("object", values / (i_power(K) * np.sqrt(lam)))


def predicted_coefficient_variance(basis: ProlateBasis, model: NoiseModel, photon_scale: float,
                                   num_modes: int | None = None) -> np.ndarray:
    """Closed-form per-quadrature variance of each reconstructed a_k.

    Var = v_k (lambda_k + (1 - lambda_k)) / (lambda_k A^2) = v_k / (lambda_k A^2),
    with v_k the quadrature variance of the illumination and outside channels.
    """
    K = basis.num_modes if num_modes is None else num_modes
    lam = basis.eigenvalues[:K]
    return quadrature_variances(model, K) / (lam * photon_scale**2)


def extended_spectrum(recon_coeffs: ModeCoefficients, basis: ProlateBasis, xi_grid) -> SpectrumField:
    """Spectrum of the reconstructed object on any xi grid, |xi| > 1 included."""
    return fourier_transform(synthesize(recon_coeffs, basis), xi_grid)


def mode_spectra(basis: ProlateBasis, xi_grid, num_modes: int | None = None) -> np.ndarray:
    """Transforms of the first modes on ``xi_grid``, shape (K, len(xi_grid)).

    The reconstructed spectrum is linear in the coefficients, so Monte-Carlo
    runs compute this once and reuse it for every trial.
    """
    K = basis.num_modes if num_modes is None else num_modes
    xi = np.asarray(xi_grid, dtype=float)
    return np.array([fourier_transform(ObjectField(basis.eigenfunctions[k].astype(complex), basis), xi).values
                     for k in range(K)])


def _same_grid(recon: SpectrumField, exact: SpectrumField):
    if not np.array_equal(recon.xi, exact.xi):
        raise ValueError("spectra must be sampled on the same grid")


def rms_band_error(recon: SpectrumField, exact: SpectrumField, xi_max: float) -> float:
    """Relative L2 error of ``recon`` over |xi| <= xi_max (trapezoid rule)."""
    _same_grid(recon, exact)
    mask = np.abs(recon.xi) <= xi_max
    if np.count_nonzero(mask) < 2:
        raise ValueError(f"fewer than two grid points inside |xi| <= {xi_max}")
    xi = recon.xi[mask]
    num = np.trapezoid(np.abs(recon.values[mask] - exact.values[mask]) ** 2, xi)
    den = np.trapezoid(np.abs(exact.values[mask]) ** 2, xi)
    if den <= 0:
        if num == 0:
            return 0.0
        raise NumericalError(f"exact spectrum vanishes on |xi| <= {xi_max}")
    return float(np.sqrt(num / den))


def band_errors(recon: SpectrumField, exact: SpectrumField) -> tuple[np.ndarray, np.ndarray]:
    """rms_band_error for every band edge on the grid.

    Returns ``(edges, errors)`` with edges ascending. Bands are the contiguous
    runs |xi| <= edge, so both integrals come from one cumulative trapezoid.
    """
    _same_grid(recon, exact)
    xi = recon.xi
    num_c = cumulative_trapezoid(np.abs(recon.values - exact.values) ** 2, xi, initial=0.0)
    den_c = cumulative_trapezoid(np.abs(exact.values) ** 2, xi, initial=0.0)
    edges = np.unique(np.abs(xi))
    lo = np.searchsorted(xi, -edges, side="left")
    hi = np.searchsorted(xi, edges, side="right") - 1
    ok = hi - lo >= 1
    edges, lo, hi = edges[ok], lo[ok], hi[ok]
    num = num_c[hi] - num_c[lo]
    den = den_c[hi] - den_c[lo]
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.sqrt(np.clip(num, 0, None) / den)
    err = np.where(den > 0, err, np.where(num > 0, np.inf, 0.0))
    return edges, err


def superresolution_factor(recon: SpectrumField, exact: SpectrumField, tau: float = 0.1) -> float:
    """Widest band half-width Xi whose every inner band has rms error <= tau.

    The pupil edge sits at xi = 1, so Xi is directly the gain over the
    diffraction-limited band. Returns 0 if even the narrowest band fails.
    """
    if not tau > 0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    if not np.any(exact.values != 0):
        raise NumericalError("exact spectrum is identically zero; superresolution factor undefined")
    edges, err = band_errors(recon, exact)
    failing = np.flatnonzero(~(err <= tau))
    if failing.size == 0:
        return float(edges[-1])
    if failing[0] == 0:
        return 0.0
    return float(edges[failing[0] - 1])


def reconstruct(measured: MeasuredCoefficients, basis: ProlateBasis, exact_spectrum: SpectrumField,
                tau: float = 0.1, xi_max: float | None = None,
                spectra: np.ndarray | None = None) -> ReconstructionResult:
    """Full pipeline from measured coefficients to spectrum metrics.

    ``spectra`` is an optional ``mode_spectra`` table on the exact grid.
    """
    coeffs = reconstruct_coeffs(measured, basis)
    obj = synthesize(coeffs, basis)
    if spectra is None:
        spectrum = fourier_transform(obj, exact_spectrum.xi)
    else:
        spectrum = SpectrumField(exact_spectrum.xi, coeffs.values @ spectra[:len(coeffs)])
    band = float(np.max(np.abs(exact_spectrum.xi))) if xi_max is None else xi_max
    return ReconstructionResult(
        recon_coeffs=coeffs,
        recon_object=obj,
        recon_spectrum=spectrum,
        exact_spectrum=exact_spectrum,
        rms_band_error=rms_band_error(spectrum, exact_spectrum, band),
        superres_factor=superresolution_factor(spectrum, exact_spectrum, tau),
        K_used=len(coeffs),
    )
