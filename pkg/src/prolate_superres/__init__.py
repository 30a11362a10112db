"""Prolate-spheroidal superresolution of 1-D coherent images under quantum noise."""

__version__ = "0.1.0"

from .basis import BasisConfig, ProlateBasis, build_basis, evaluate_mode, evaluate_modes, sinc_kernel
from .errors import EigenvalueUnderflowError, ModeLimitError, NumericalError, ScenarioError
from .imaging import (
    ImageField,
    ModeCoefficients,
    ObjectField,
    SpectrumField,
    decompose,
    double_gaussian_object,
    fourier_transform,
    image_operator,
    propagate_coeffs,
    synthesize,
)
from .noise import MeasuredCoefficients, NoiseModel, photon_normalization, sample_measurement
from .reconstruction import (
    ReconstructionResult,
    extended_spectrum,
    mode_spectra,
    reconstruct,
    reconstruct_coeffs,
    rms_band_error,
    superresolution_factor,
)
