"""Manifest-plus-binary serialization of sampled fields.

A field is stored as a JSON manifest next to a raw little-endian binary
of float64 (re, im) pairs, one pair per component per node, nodes ordered
with x varying fastest, components ordered Ax, Ay, Az, Phi for potential
fields. The round trip is bit exact.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .fields import ComplexScalarField, GridSpec, PotentialField

FORMAT_VERSION = 1


def _pack(arr: np.ndarray) -> bytes:
    # x fastest means z is slowest in file order
    return np.ascontiguousarray(arr.transpose(2, 1, 0)).astype("<c16").tobytes()


def _unpack(buf: bytes, offset_nodes: int, dims) -> np.ndarray:
    nx, ny, nz = dims
    n = nx * ny * nz
    flat = np.frombuffer(buf, dtype="<c16", count=n, offset=offset_nodes * 16)
    return flat.reshape(nz, ny, nx).transpose(2, 1, 0)


def save_field(field, manifest_path, data_path=None):
    """Write the manifest JSON and binary data; returns (manifest, data) paths."""
    manifest_path = Path(manifest_path)
    if data_path is None:
        data_path = manifest_path.with_suffix(".bin")
    data_path = Path(data_path)
    if isinstance(field, PotentialField):
        kind = "potential"
        blob = b"".join(_pack(a) for a in (field.ax, field.ay, field.az, field.phi))
    elif isinstance(field, ComplexScalarField):
        kind = "scalar"
        blob = _pack(field.values)
    else:
        raise TypeError(f"cannot save {type(field).__name__}")
    data_path.write_bytes(blob)
    manifest = {
        "version": FORMAT_VERSION,
        "kind": kind,
        "dims": list(field.grid.dims),
        "spacing": list(field.grid.spacing),
        "origin": list(field.grid.origin),
        "time": field.time,
        "data": os.path.relpath(data_path, manifest_path.parent),
    }
    manifest_path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    return manifest_path, data_path


def load_field(manifest_path):
    """Read a manifest and its binary; returns the reconstructed field."""
    manifest_path = Path(manifest_path)
    try:
        manifest = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"unreadable field manifest {manifest_path}: {exc}") from exc
    try:
        if manifest["version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported field format version {manifest['version']!r}")
        kind = manifest["kind"]
        if kind not in ("scalar", "potential"):
            raise ValueError(f"unknown field kind {kind!r}")
        grid = GridSpec(tuple(manifest["dims"]), tuple(manifest["spacing"]),
                        tuple(manifest["origin"]))
        time = float(manifest["time"])
        data_path = manifest_path.parent / manifest["data"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed field manifest {manifest_path}: {exc}") from exc
    try:
        buf = data_path.read_bytes()
    except OSError as exc:
        raise ValueError(f"unreadable field data {data_path}: {exc}") from exc
    n = grid.node_count
    n_components = 4 if kind == "potential" else 1
    if len(buf) != n * n_components * 16:
        raise ValueError(
            f"field data {data_path} has {len(buf)} bytes, expected {n * n_components * 16}"
        )
    if kind == "scalar":
        return ComplexScalarField(grid, time, _unpack(buf, 0, grid.dims))
    comps = [_unpack(buf, i * n, grid.dims) for i in range(4)]
    return PotentialField(grid, time, *comps)
