"""Object, Fourier and image plane fields of the 1-D coherent imaging system.

Object fields live on the basis quadrature nodes (|s| <= 1, zero outside).
Fourier-plane and image-plane fields are sampled on caller-chosen grids.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Literal

import numpy as np

from .basis import CHUNK, ProlateBasis, evaluate_modes, sinc_kernel

__all__ = [
    "ObjectField",
    "SpectrumField",
    "ImageField",
    "ModeCoefficients",
    "double_gaussian",
    "double_gaussian_object",
    "object_from_function",
    "fourier_transform",
    "image_operator",
    "decompose",
    "decompose_fourier",
    "decompose_image",
    "synthesize",
    "propagate_coeffs",
    "field_energy",
    "i_power",
]

Plane = Literal["object", "image", "fourier"]
PLANES = ("object", "image", "fourier")


def _frozen(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


def _check_grid(grid: np.ndarray, name: str):
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D array")
    if not np.all(np.isfinite(grid)):
        raise ValueError(f"{name} contains non-finite values")
    if np.any(np.diff(grid) <= 0):
        raise ValueError(f"{name} must be strictly increasing")


@dataclass(frozen=True, eq=False)
class ObjectField:
    """Complex amplitude a(s_n) at the quadrature nodes of ``basis``."""

    samples: np.ndarray
    basis: ProlateBasis

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen(self.samples))
        if self.samples.shape != (self.basis.grid_size,):
            raise ValueError(
                f"expected {self.basis.grid_size} samples, got shape {self.samples.shape}"
            )

    @property
    def c(self) -> float:
        return self.basis.c

    @property
    def nodes(self) -> np.ndarray:
        return self.basis.nodes


@dataclass(frozen=True, eq=False)
class SpectrumField:
    xi: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "xi", _frozen(self.xi, float))
        object.__setattr__(self, "values", _frozen(self.values))
        _check_grid(self.xi, "xi grid")
        if self.values.shape != self.xi.shape:
            raise ValueError("values and xi grid differ in length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("spectrum values must be finite")


@dataclass(frozen=True, eq=False)
class ImageField:
    s: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "s", _frozen(self.s, float))
        object.__setattr__(self, "values", _frozen(self.values))
        _check_grid(self.s, "s grid")
        if self.values.shape != self.s.shape:
            raise ValueError("values and s grid differ in length")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("image values must be finite")


@dataclass(frozen=True, eq=False)
class ModeCoefficients:
    """Coefficient vector a_k, e_k or f_k, tagged with its plane."""

    plane: str
    values: np.ndarray

    def __post_init__(self):
        if self.plane not in PLANES:
            raise ValueError(f"plane must be one of {PLANES}, got {self.plane!r}")
        object.__setattr__(self, "values", _frozen(self.values))
        if self.values.ndim != 1:
            raise ValueError("coefficients must be a 1-D vector")

    def __len__(self):
        return self.values.size


def i_power(n: int) -> np.ndarray:
    """Exact i**k for k = 0..n-1."""
    return np.array([1, 1j, -1, -1j])[np.arange(n) % 4]


def object_from_function(basis: ProlateBasis, func: Callable[[np.ndarray], np.ndarray]) -> ObjectField:
    return ObjectField(np.asarray(func(basis.nodes), dtype=complex), basis)


def double_gaussian(s, s0: float = 0.5, sigma: float = 0.1) -> np.ndarray:
    """Two Gaussian peaks of width ``sigma`` centred at +-``s0``."""
    s = np.asarray(s, dtype=float)
    return np.exp(-((s - s0) ** 2) / (2 * sigma**2)) + np.exp(-((s + s0) ** 2) / (2 * sigma**2))


def double_gaussian_object(basis: ProlateBasis, s0: float = 0.5, sigma: float = 0.1) -> ObjectField:
    if not 0 < s0 < 1:
        raise ValueError(f"s0 must lie in (0, 1), got {s0!r}")
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    return ObjectField(double_gaussian(basis.nodes, s0, sigma).astype(complex), basis)


def field_energy(obj: ObjectField) -> float:
    """int_{-1}^{1} |a(s)|^2 ds by the basis quadrature."""
    return float(np.sum(obj.basis.weights * np.abs(obj.samples) ** 2))


def fourier_transform(obj: ObjectField, xi_grid) -> SpectrumField:
    """f(xi) = sqrt(c / 2 pi) int a(s) exp(i c s xi) ds, for any real xi."""
    xi = np.asarray(xi_grid, dtype=float)
    c = obj.c
    wa = obj.basis.weights * obj.samples
    values = np.empty(xi.size, dtype=complex)
    for i in range(0, xi.size, CHUNK):
        values[i:i + CHUNK] = np.exp(1j * c * np.outer(xi[i:i + CHUNK], obj.nodes)) @ wa
    return SpectrumField(xi, np.sqrt(c / (2 * np.pi)) * values)


def image_operator(obj: ObjectField, s_grid) -> ImageField:
    """e(s) = int K_c(s, s') a(s') ds' on an arbitrary grid, including |s| > 1."""
    s = np.asarray(s_grid, dtype=float)
    wa = obj.basis.weights * obj.samples
    values = np.empty(s.size, dtype=complex)
    for i in range(0, s.size, CHUNK):
        values[i:i + CHUNK] = sinc_kernel(s[i:i + CHUNK], obj.nodes, obj.c) @ wa
    return ImageField(s, values)


def decompose(obj: ObjectField, basis: ProlateBasis | None = None) -> ModeCoefficients:
    basis = obj.basis if basis is None else basis
    if basis.grid_size != obj.samples.size:
        raise ValueError("object was sampled on a different grid than the basis")
    values = basis.eigenfunctions @ (basis.weights * obj.samples)
    return ModeCoefficients("object", values)


def decompose_fourier(spectrum: SpectrumField, basis: ProlateBasis) -> ModeCoefficients:
    """f_k = int_{-1}^{1} f(xi) phi_k(xi) dxi; ``spectrum`` must sit on the basis nodes."""
    if spectrum.xi.shape != basis.nodes.shape or not np.allclose(spectrum.xi, basis.nodes, rtol=0, atol=1e-14):
        raise ValueError("spectrum must be sampled on the basis quadrature nodes")
    values = basis.eigenfunctions @ (basis.weights * spectrum.values)
    return ModeCoefficients("fourier", values)


def decompose_image(image: ImageField, basis: ProlateBasis) -> ModeCoefficients:
    """e_k = int e(s) psi_k(s) ds, truncated to the image grid (trapezoid rule).

    Only meant for validation: psi_k decays like 1/s, so the truncation error
    falls off slowly with the grid half-width.
    """
    phi = evaluate_modes(basis, image.s)
    psi = np.sqrt(basis.eigenvalues)[:, None] * phi
    values = np.trapezoid(image.values[None, :] * psi, image.s, axis=1)
    return ModeCoefficients("image", values)


def synthesize(coeffs: ModeCoefficients, basis: ProlateBasis) -> ObjectField:
    if coeffs.plane != "object":
        raise ValueError(f"synthesize expects object-plane coefficients, got {coeffs.plane!r}")
    if len(coeffs) > basis.num_modes:
        raise ValueError(f"{len(coeffs)} coefficients but basis has {basis.num_modes} modes")
    k = len(coeffs)
    return ObjectField(coeffs.values @ basis.eigenfunctions[:k], basis)


def propagate_coeffs(a: ModeCoefficients, basis: ProlateBasis, plane: Plane) -> ModeCoefficients:
    """e_k = sqrt(lambda_k) a_k (image) or f_k = i**k sqrt(lambda_k) a_k (fourier)."""
    if a.plane != "object":
        raise ValueError(f"expected object-plane coefficients, got {a.plane!r}")
    gain = np.sqrt(basis.eigenvalues[: len(a)])
    if plane == "image":
        return ModeCoefficients("image", gain * a.values)
    if plane == "fourier":
        return ModeCoefficients("fourier", i_power(len(a)) * gain * a.values)
    raise ValueError(f"plane must be 'image' or 'fourier', got {plane!r}")
