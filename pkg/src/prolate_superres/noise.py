"""Gaussian model of homodyne-detected Fourier-plane coefficients.

In photon units the measured coefficient of mode k is

    F_k = A f_k + i**k (sqrt(lambda_k) da_k + sqrt(1 - lambda_k) db_k)

where ``da_k`` is the fluctuation of the illuminating field inside the object
and ``db_k`` the fluctuation entering from outside it. Each quadrature of
``da_k`` and ``db_k`` has variance 1/4 (vacuum / coherent level) or
exp(-2 r) / 4 for squeezed modes. The 1/4 convention fixes the photon axis;
any other convention only rescales ``mean_photons``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Literal

import numpy as np

from .basis import ProlateBasis
from .imaging import ModeCoefficients, ObjectField, field_energy, i_power

__all__ = [
    "NoiseModel",
    "MeasuredCoefficients",
    "VACUUM_VARIANCE",
    "photon_normalization",
    "quadrature_variances",
    "trial_rng",
    "sample_measurement",
    "sample_measurements",
]

VACUUM_VARIANCE = 0.25
KINDS = ("noiseless", "coherent", "squeezed")


@dataclass(frozen=True)
class NoiseModel:
    kind: Literal["noiseless", "coherent", "squeezed"] = "noiseless"
    mean_photons: float | None = None
    r: float = 0.0
    squeezed_modes: int | None = None  # None: every retained mode
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"noise kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind != "noiseless":
            if self.mean_photons is None or not np.isfinite(self.mean_photons) or self.mean_photons <= 0:
                raise ValueError(f"mean_photons must be > 0 for {self.kind} light, got {self.mean_photons!r}")
        if self.kind == "squeezed" and not self.r > 0:
            raise ValueError(f"squeezing parameter r must be > 0, got {self.r!r}")
        if self.r < 0:
            raise ValueError(f"r must be >= 0, got {self.r!r}")
        if self.squeezed_modes is not None and self.squeezed_modes < 0:
            raise ValueError("squeezed_modes must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")

    @classmethod
    def coherent(cls, mean_photons: float, seed: int = 0) -> "NoiseModel":
        return cls("coherent", mean_photons=mean_photons, seed=seed)

    @classmethod
    def squeezed(cls, mean_photons: float, r: float, squeezed_modes: int | None = None,
                 seed: int = 0) -> "NoiseModel":
        return cls("squeezed", mean_photons=mean_photons, r=r, squeezed_modes=squeezed_modes, seed=seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseModel":
        return cls(**data)


@dataclass(frozen=True, eq=False)
class MeasuredCoefficients:
    """Measured F_k / A in dimensionless amplitude units."""

    values: np.ndarray
    model: NoiseModel
    photon_scale: float

    def __post_init__(self):
        if not self.photon_scale > 0:
            raise ValueError("photon_scale must be positive")

    def __len__(self):
        return self.values.size


def photon_normalization(obj: ObjectField, mean_photons: float) -> float:
    """Scale A with int |A a(s)|^2 ds = mean_photons."""
    if not mean_photons > 0:
        raise ValueError(f"mean_photons must be positive, got {mean_photons!r}")
    energy = field_energy(obj)
    if energy <= 0:
        raise ValueError("object has zero energy; cannot normalise to a photon number")
    return float(np.sqrt(mean_photons / energy))


def quadrature_variances(model: NoiseModel, num_modes: int) -> np.ndarray:
    """Per-mode variance of each quadrature of da_k and db_k, photon units."""
    var = np.full(num_modes, VACUUM_VARIANCE)
    if model.kind == "noiseless":
        return np.zeros(num_modes)
    if model.kind == "squeezed":
        m = num_modes if model.squeezed_modes is None else min(model.squeezed_modes, num_modes)
        var[:m] *= np.exp(-2.0 * model.r)
    return var


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent generator for one Monte-Carlo trial."""
    return np.random.default_rng(np.random.SeedSequence([seed, trial]))


def _noise(model: NoiseModel, lam: np.ndarray, trial: int) -> np.ndarray:
    K = lam.size
    z = trial_rng(model.seed, trial).standard_normal((4, K))
    sd = np.sqrt(quadrature_variances(model, K))
    da = sd * (z[0] + 1j * z[1])
    db = sd * (z[2] + 1j * z[3])
    return i_power(K) * (np.sqrt(lam) * da + np.sqrt(1.0 - lam) * db)


def _check(ideal_f: ModeCoefficients, basis: ProlateBasis, model: NoiseModel, photon_scale):
    if ideal_f.plane != "fourier":
        raise ValueError(f"expected Fourier-plane coefficients, got {ideal_f.plane!r}")
    if len(ideal_f) > basis.num_modes:
        raise ValueError("more coefficients than basis modes")
    if model.kind != "noiseless" and photon_scale is None:
        raise ValueError(f"{model.kind} noise needs a photon_scale; see photon_normalization")
    if model.squeezed_modes is not None and model.squeezed_modes > basis.num_modes:
        raise ValueError(
            f"squeezed_modes ({model.squeezed_modes}) exceeds basis num_modes ({basis.num_modes})"
        )


def sample_measurement(ideal_f: ModeCoefficients, basis: ProlateBasis, model: NoiseModel,
                       photon_scale: float | None = None, trial: int = 0) -> MeasuredCoefficients:
    _check(ideal_f, basis, model, photon_scale)
    if model.kind == "noiseless":
        return MeasuredCoefficients(ideal_f.values.copy(), model, 1.0)
    lam = basis.eigenvalues[: len(ideal_f)]
    values = ideal_f.values + _noise(model, lam, trial) / photon_scale
    return MeasuredCoefficients(values, model, float(photon_scale))


def sample_measurements(ideal_f: ModeCoefficients, basis: ProlateBasis, model: NoiseModel,
                        photon_scale: float | None, trials: int, first_trial: int = 0) -> np.ndarray:
    """Stack of ``trials`` outcomes, shape (trials, K).

    Row j equals ``sample_measurement(..., trial=first_trial + j).values``.
    """
    _check(ideal_f, basis, model, photon_scale)
    if model.kind == "noiseless":
        return np.tile(ideal_f.values, (trials, 1))
    lam = basis.eigenvalues[: len(ideal_f)]
    noise = np.array([_noise(model, lam, t) for t in range(first_trial, first_trial + trials)])
    return ideal_f.values[None, :] + noise / photon_scale
