"""CSV / JSON serialization of fields, bases and results.

Floats are written with ``repr`` (shortest round-trip decimal), CSVs use a
comma delimiter, a header row and LF line endings.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .basis import ProlateBasis
from .imaging import ImageField, ObjectField, SpectrumField

__all__ = [
    "fmt",
    "write_csv",
    "read_csv",
    "write_json",
    "spectrum_to_csv",
    "read_spectrum_csv",
    "comparison_to_csv",
    "object_to_csv",
    "image_to_csv",
    "field_to_dict",
    "basis_to_dict",
]


def fmt(x) -> str:
    return repr(float(x))


def write_csv(path, header: list[str], columns: list[np.ndarray]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([fmt(v) for v in row])


def read_csv(path) -> tuple[list[str], np.ndarray]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    return header, np.array([[float(v) for v in row] for row in body]).reshape(len(body), len(header))


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        json.dump(data, fh, indent=2, allow_nan=False)
        fh.write("\n")


def spectrum_to_csv(spectrum: SpectrumField, path):
    write_csv(path, ["xi", "re", "im"], [spectrum.xi, spectrum.values.real, spectrum.values.imag])


def read_spectrum_csv(path) -> SpectrumField:
    header, data = read_csv(path)
    if header[:3] != ["xi", "re", "im"]:
        raise ValueError(f"{path}: expected columns xi,re,im, got {header}")
    return SpectrumField(data[:, 0], data[:, 1] + 1j * data[:, 2])


def comparison_to_csv(recon: SpectrumField, exact: SpectrumField, path):
    write_csv(
        path,
        ["xi", "re_recon", "im_recon", "re_exact", "im_exact"],
        [recon.xi, recon.values.real, recon.values.imag, exact.values.real, exact.values.imag],
    )


def object_to_csv(obj: ObjectField, path):
    write_csv(path, ["s", "re", "im"], [obj.nodes, obj.samples.real, obj.samples.imag])


def image_to_csv(image: ImageField, path):
    write_csv(path, ["s", "re", "im"], [image.s, image.values.real, image.values.imag])


def field_to_dict(field) -> dict:
    if isinstance(field, ObjectField):
        coord, values = field.nodes, field.samples
    elif isinstance(field, SpectrumField):
        coord, values = field.xi, field.values
    elif isinstance(field, ImageField):
        coord, values = field.s, field.values
    else:
        raise TypeError(f"cannot serialise {type(field).__name__}")
    return {"coordinate": coord.tolist(), "re": values.real.tolist(), "im": values.imag.tolist()}


def basis_to_dict(basis: ProlateBasis) -> dict:
    return {
        "c": basis.c,
        "grid_size": basis.grid_size,
        "eigenvalues": basis.eigenvalues.tolist(),
        "nodes": basis.nodes.tolist(),
        "weights": basis.weights.tolist(),
        "modes": basis.eigenfunctions.tolist(),
    }
