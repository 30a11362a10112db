"""Scenario files, Monte-Carlo orchestration and output files."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .basis import BasisConfig, ProlateBasis, build_basis
from .errors import ScenarioError
from .imaging import (
    ModeCoefficients,
    double_gaussian_object,
    fourier_transform,
    image_operator,
    decompose,
    propagate_coeffs,
)
from .io import comparison_to_csv, image_to_csv, object_to_csv, spectrum_to_csv, write_csv, write_json
from .noise import NoiseModel, photon_normalization, quadrature_variances, sample_measurement
from .reconstruction import ReconstructionResult, mode_spectra, predicted_coefficient_variance, reconstruct

__all__ = [
    "ObjectSpec",
    "Scenario",
    "RunSummary",
    "load_scenario",
    "validate_scenario",
    "run_scenario",
    "sweep",
    "SWEEP_AXES",
]

SWEEP_AXES = ("mean_photons", "r", "K_reconstruct")
TOP_KEYS = {"name", "basis", "object", "noise", "K_reconstruct", "xi_max", "xi_points",
            "trials", "tau", "output_dir", "image_half_width"}


@dataclass(frozen=True)
class ObjectSpec:
    type: str = "double_gaussian"
    s0: float = 0.5
    sigma: float = 0.1

    def __post_init__(self):
        if self.type != "double_gaussian":
            raise ValueError(f"unknown object type {self.type!r}")
        if not 0 < self.s0 < 1:
            raise ValueError(f"s0 must lie in (0, 1), got {self.s0!r}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")

    def build(self, basis: ProlateBasis):
        return double_gaussian_object(basis, self.s0, self.sigma)


@dataclass(frozen=True)
class Scenario:
    name: str
    basis: BasisConfig
    object: ObjectSpec
    noise: NoiseModel
    K_reconstruct: int
    xi_max: float = 12.0
    xi_points: int = 1201
    trials: int = 1
    tau: float = 0.1
    output_dir: str = "runs"
    image_half_width: float = 4.0
    source: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def xi_grid(self) -> np.ndarray:
        return np.linspace(-self.xi_max, self.xi_max, self.xi_points)

    @property
    def image_grid(self) -> np.ndarray:
        return np.linspace(-self.image_half_width, self.image_half_width, 801)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "basis": {"c": self.basis.c, "grid_size": self.basis.grid_size,
                      "num_modes": self.basis.num_modes, "min_ratio": self.basis.min_ratio},
            "object": {"type": self.object.type, "s0": self.object.s0, "sigma": self.object.sigma},
            "noise": self.noise.to_dict(),
            "K_reconstruct": self.K_reconstruct,
            "xi_max": self.xi_max,
            "xi_points": self.xi_points,
            "trials": self.trials,
            "tau": self.tau,
            "output_dir": self.output_dir,
            "image_half_width": self.image_half_width,
        }

    @classmethod
    def from_dict(cls, data: dict, text: str | None = None) -> "Scenario":
        """Build and validate; every problem is collected into one ScenarioError."""
        problems = _check_scenario(data, text)
        if problems:
            raise ScenarioError("invalid scenario:\n  " + "\n  ".join(problems))
        return _build(data)


def _line_of(text: str | None, key: str) -> str:
    if text is None:
        return ""
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return f"line {i}: "
    return ""


def _build(data: dict) -> Scenario:
    basis = BasisConfig(**data["basis"])
    noise = NoiseModel(**data.get("noise", {"kind": "noiseless"}))
    top = {k: v for k, v in data.items() if k not in ("basis", "object", "noise")}
    top.setdefault("name", "scenario")
    return Scenario(basis=basis, object=ObjectSpec(**data.get("object", {})), noise=noise,
                    source=data, **top)


def _check_scenario(data: Any, text: str | None) -> list[str]:
    if not isinstance(data, dict):
        return ["scenario must be a JSON object"]
    out = []

    def err(key, msg):
        out.append(f"{_line_of(text, key)}{key}: {msg}")

    for key in sorted(set(data) - TOP_KEYS):
        err(key, "unknown field")
    for key in ("basis", "K_reconstruct"):
        if key not in data:
            out.append(f"{key}: required field missing")

    sections = {"basis": BasisConfig, "object": ObjectSpec, "noise": NoiseModel}
    built = {}
    for key, ctor in sections.items():
        if key not in data:
            continue
        if not isinstance(data[key], dict):
            err(key, "must be a JSON object")
            continue
        try:
            built[key] = ctor(**data[key])
        except TypeError as exc:
            err(key, str(exc).replace("__init__() ", ""))
        except ValueError as exc:
            sub = next((k for k in data[key] if k in str(exc)), key)
            err(sub, str(exc))

    def number(key, cond, msg, integer=False):
        if key not in data:
            return None
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)) or (integer and int(v) != v):
            err(key, f"must be {'an integer' if integer else 'a number'}, got {v!r}")
            return None
        if not cond(v):
            err(key, msg.format(v=v))
            return None
        return v

    number("trials", lambda v: v >= 1, "trials must be >= 1, got {v}", integer=True)
    number("xi_max", lambda v: math.isfinite(v) and v >= 1, "xi_max must be >= 1, got {v}")
    number("xi_points", lambda v: v >= 3, "xi_points must be >= 3, got {v}", integer=True)
    number("tau", lambda v: math.isfinite(v) and v > 0, "tau must be > 0, got {v}")
    number("image_half_width", lambda v: math.isfinite(v) and v > 0, "image_half_width must be > 0, got {v}")
    K = number("K_reconstruct", lambda v: v >= 1, "K_reconstruct must be >= 1, got {v}", integer=True)
    if "name" in data and not isinstance(data["name"], str):
        err("name", "must be a string")
    if "output_dir" in data and not isinstance(data["output_dir"], str):
        err("output_dir", "must be a string")

    basis = built.get("basis")
    if basis is not None and K is not None and K > basis.num_modes:
        err("K_reconstruct", f"K_reconstruct ({K}) exceeds basis num_modes ({basis.num_modes})")
    noise = built.get("noise")
    if basis is not None and noise is not None and noise.squeezed_modes is not None:
        if noise.squeezed_modes > basis.num_modes:
            err("squeezed_modes",
                f"squeezed_modes ({noise.squeezed_modes}) exceeds basis num_modes ({basis.num_modes})")
    return out


def load_scenario(path) -> Scenario:
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno}: malformed JSON: {exc.msg}") from exc
    try:
        return Scenario.from_dict(data, text)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def validate_scenario(path) -> list[str]:
    """Diagnostics for a scenario file; empty when it is valid."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        return [f"{path}: cannot read: {exc.strerror}"]
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        return [f"line {exc.lineno}: malformed JSON: {exc.msg}"]
    return _check_scenario(data, text)


@dataclass
class RunSummary:
    scenario: dict
    trial_factors: list[float]
    median_factor: float
    q25_factor: float
    q75_factor: float
    noiseless_factor: float
    noiseless_rms_error: float
    eigenvalues: list[float]
    photon_scale: float
    coefficient_variance: list[float] | None
    predicted_variance: list[float] | None
    coherent_variance: list[float] | None
    wall_time: float
    version: str = __version__
    overrides: dict = field(default_factory=dict)
    trial_results: list[ReconstructionResult] = field(default_factory=list, repr=False)
    noiseless_result: ReconstructionResult | None = field(default=None, repr=False)

    def to_dict(self, include_timing: bool = False) -> dict:
        out = {
            "version": self.version,
            "scenario": self.scenario,
            "overrides": self.overrides,
            "trials": len(self.trial_factors),
            "trial_factors": self.trial_factors,
            "median_factor": self.median_factor,
            "q25_factor": self.q25_factor,
            "q75_factor": self.q75_factor,
            "noiseless_factor": self.noiseless_factor,
            "noiseless_rms_error": self.noiseless_rms_error,
            "eigenvalues": self.eigenvalues,
            "photon_scale": self.photon_scale,
            "coefficient_variance": self.coefficient_variance,
            "predicted_variance": self.predicted_variance,
            "coherent_variance": self.coherent_variance,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out


def _empirical_variance(coeffs: np.ndarray) -> list[float] | None:
    # per-quadrature variance: mean of the real- and imaginary-part variances
    if coeffs.shape[0] < 2:
        return None
    v = 0.5 * (np.var(coeffs.real, axis=0, ddof=1) + np.var(coeffs.imag, axis=0, ddof=1))
    return v.tolist()


def run_scenario(scenario: Scenario, threads: int = 1, write: bool = True,
                 overrides: dict | None = None) -> RunSummary:
    """Run every trial of ``scenario``; outputs are a pure function of the scenario."""
    t0 = time.perf_counter()
    basis = build_basis(scenario.basis)
    obj = scenario.object.build(basis)
    xi = scenario.xi_grid
    exact = fourier_transform(obj, xi)
    K = scenario.K_reconstruct
    ideal_a = ModeCoefficients("object", decompose(obj).values[:K])
    ideal_f = propagate_coeffs(ideal_a, basis, "fourier")
    noise = scenario.noise
    noisy = noise.kind != "noiseless"
    A = photon_normalization(obj, noise.mean_photons) if noisy else 1.0

    clean = sample_measurement(ideal_f, basis, NoiseModel("noiseless"))
    spectra = mode_spectra(basis, xi, K)
    noiseless = reconstruct(clean, basis, exact, scenario.tau, spectra=spectra)

    def one_trial(t: int) -> ReconstructionResult:
        measured = sample_measurement(ideal_f, basis, noise, A if noisy else None, trial=t)
        return reconstruct(measured, basis, exact, scenario.tau, spectra=spectra)

    if threads > 1 and scenario.trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one_trial, range(scenario.trials)))
    else:
        results = [one_trial(t) for t in range(scenario.trials)]

    factors = [r.superres_factor for r in results]
    coeffs = np.array([r.recon_coeffs.values for r in results])
    predicted = coherent = None
    if noisy:
        predicted = predicted_coefficient_variance(basis, noise, A, K).tolist()
        coherent = predicted_coefficient_variance(
            basis, NoiseModel.coherent(noise.mean_photons), A, K).tolist()

    summary = RunSummary(
        scenario=scenario.source or scenario.to_dict(),
        trial_factors=factors,
        median_factor=float(np.median(factors)),
        q25_factor=float(np.percentile(factors, 25)),
        q75_factor=float(np.percentile(factors, 75)),
        noiseless_factor=noiseless.superres_factor,
        noiseless_rms_error=noiseless.rms_band_error,
        eigenvalues=basis.eigenvalues.tolist(),
        photon_scale=A,
        coefficient_variance=_empirical_variance(coeffs) if noisy else None,
        predicted_variance=predicted,
        coherent_variance=coherent,
        wall_time=0.0,
        overrides=dict(overrides or {}),
        trial_results=results,
        noiseless_result=noiseless,
    )
    if write:
        _write_outputs(Path(scenario.output_dir), scenario, basis, obj, exact, noiseless, results, summary)
    summary.wall_time = time.perf_counter() - t0
    return summary


def _write_outputs(out: Path, scenario, basis, obj, exact, noiseless, results, summary):
    out.mkdir(parents=True, exist_ok=True)
    object_to_csv(obj, out / "object.csv")
    image_to_csv(image_operator(obj, scenario.image_grid), out / "image.csv")
    spectrum_to_csv(exact, out / "exact_spectrum.csv")
    band = np.abs(exact.xi) <= 1.0
    write_csv(out / "pupil_spectrum.csv", ["xi", "re", "im"],
              [exact.xi[band], exact.values.real[band], exact.values.imag[band]])
    comparison_to_csv(noiseless.recon_spectrum, exact, out / "noiseless_reconstruction.csv")
    width = max(4, len(str(len(results) - 1)))
    for t, r in enumerate(results):
        comparison_to_csv(r.recon_spectrum, exact, out / f"trial_{t:0{width}d}.csv")
    write_json(out / "summary.json", summary.to_dict())


def _with_value(base: Scenario, axis: str, value) -> Scenario:
    if axis == "mean_photons":
        if base.noise.kind == "noiseless":
            raise ScenarioError("sweeping mean_photons needs a coherent or squeezed noise model")
        noise = replace(base.noise, mean_photons=float(value))
        return replace(base, noise=noise)
    if axis == "r":
        r = float(value)
        kind = "squeezed" if r > 0 else "coherent"
        if base.noise.kind == "noiseless":
            raise ScenarioError("sweeping r needs a coherent or squeezed noise model")
        return replace(base, noise=replace(base.noise, kind=kind, r=r))
    if axis == "K_reconstruct":
        K = int(value)
        if K != value or not 1 <= K <= base.basis.num_modes:
            raise ScenarioError(f"K_reconstruct value {value!r} must be an integer in [1, {base.basis.num_modes}]")
        return replace(base, K_reconstruct=K)
    raise ScenarioError(f"unknown sweep axis {axis!r}; choose from {SWEEP_AXES}")


def sweep(base: Scenario, axis: str, values, threads: int = 1, write: bool = True) -> list[dict]:
    """One run per value, all sharing the base seed; returns the summary table."""
    values = list(values)
    if not values:
        raise ScenarioError("sweep needs at least one value")
    rows = []
    for value in values:
        sc = _with_value(base, axis, value)
        sc = replace(sc, output_dir=str(Path(base.output_dir) / f"{axis}={value}"), source={})
        s = run_scenario(sc, threads=threads, write=write)
        rows.append({"value": value, "median_factor": s.median_factor,
                     "q25_factor": s.q25_factor, "q75_factor": s.q75_factor})
    if write:
        write_csv(Path(base.output_dir) / f"sweep_{axis}.csv",
                  [axis, "median_factor", "q25_factor", "q75_factor"],
                  [[r[k] for r in rows] for k in ("value", "median_factor", "q25_factor", "q75_factor")])
    return rows
