"""Text format for voxel potentials.

Layout::

    SCATSIZE-GRID 1
    dims <nx> <ny> <nz>
    origin <x0> <y0> <z0>
    spacing <h>
    <nx*ny*nz values, one per line, row-major with z fastest>

``origin`` is the lower corner of cell (0, 0, 0).  Values are written with
17 significant digits so a write/read cycle is exact.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from ..errors import ConfigError
from ..forward_potential import VoxelPotential

MAGIC = "SCATSIZE-GRID 1"


def write_grid(path, potential: VoxelPotential) -> None:
    nx, ny, nz = potential.values.shape
    lines = [
        MAGIC,
        f"dims {nx} {ny} {nz}",
        "origin " + " ".join("%.17g" % c for c in potential.origin),
        "spacing %.17g" % potential.spacing,
    ]
    lines.extend("%.17g" % x for x in potential.values.ravel(order="C"))
    Path(path).write_text("\n".join(lines) + "\n")


def _header(line: str, key: str, count: int, kind):
    parts = line.split()
    if len(parts) != count + 1 or parts[0] != key:
        raise ConfigError(f"grid file: expected '{key}' with {count} value(s), got {line!r}")
    try:
        return [kind(p) for p in parts[1:]]
    except ValueError as exc:
        raise ConfigError(f"grid file: bad '{key}' entry {line!r}") from exc


def read_grid(path) -> VoxelPotential:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read grid file {path}: {exc}") from exc
    lines = text.splitlines()
    if len(lines) < 4 or lines[0].strip() != MAGIC:
        raise ConfigError(f"{path} is not a scatsize grid file (missing '{MAGIC}' header)")
    dims = _header(lines[1], "dims", 3, int)
    origin = _header(lines[2], "origin", 3, float)
    (spacing,) = _header(lines[3], "spacing", 1, float)
    body = [ln for ln in lines[4:] if ln.strip()]
    if len(body) != int(np.prod(dims)):
        raise ConfigError(f"grid file: expected {int(np.prod(dims))} values, found {len(body)}")
    try:
        values = np.array([float(x) for x in body]).reshape(dims)
    except ValueError as exc:
        raise ConfigError("grid file: non-numeric value") from exc
    try:
        return VoxelPotential(tuple(origin), spacing, values)
    except ValueError as exc:
        raise ConfigError(f"grid file: {exc}") from exc
