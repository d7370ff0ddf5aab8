"""Mesh and point-cloud export of a slice over a ``(r, s)`` parameter grid.

Vertices are ``F(x(r), s)`` on one chart branch with the ellipsoid angles
held fixed, projected from R^{2n} to R^3.  The default projection keeps the
first three of ``(Re z_1, Im z_1, Re z_2, Im z_2, ...)``; any 3 x 2n matrix
may be supplied instead.  Files are written as OBJ (``v``/``f`` records,
quads) and as CSV.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

CONE_R_MIN = 0.05


def interleave(z: np.ndarray) -> np.ndarray:
    """``(Re z_1, Im z_1, Re z_2, ...)`` along the last axis."""
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out


def default_projection(n: int) -> np.ndarray:
    proj = np.zeros((3, 2 * n))
    for i in range(min(3, 2 * n)):
        proj[i, i] = 1.0
    return proj


@dataclass(frozen=True)
class MeshFile:
    vertices: np.ndarray  # (V, 3)
    faces: np.ndarray  # (F, 4), zero-based
    params: np.ndarray  # (V, 2): r, s

    def validate(self) -> None:
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("mesh has non-finite vertices")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    def write_obj(self, path: str | Path) -> None:
        lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in self.vertices.tolist()]
        lines += ["f " + " ".join(str(i + 1) for i in face) for face in self.faces.tolist()]
        Path(path).write_text("\n".join(lines) + "\n")

    def write_csv(self, path: str | Path) -> None:
        rows = ["x,y,z,r,s"]
        for (x, y, z), (r, s) in zip(self.vertices.tolist(), self.params.tolist()):
            rows.append(f"{x!r},{y!r},{z!r},{r!r},{s!r}")
        Path(path).write_text("\n".join(rows) + "\n")


def radial_range(C: float, extent: float = 2.0, cone_r_min: float = CONE_R_MIN) -> tuple[float, float]:
    """``[0, extent] * sqrt|C|`` for smooth slices; the cone starts at ``cone_r_min``."""
    if C == 0:
        return cone_r_min, extent
    scale = math.sqrt(abs(C))
    return 0.0, extent * scale


def export_mesh(
    slc,
    n_r: int = 64,
    n_s: int = 64,
    extent: float = 2.0,
    branch=(1.0, 1.0),
    projection: np.ndarray | None = None,
) -> MeshFile:
    """Quad mesh of ``F`` over ``r x s`` on ``[r_min, r_max] x [0, period]``."""
    q = slc.quadric
    r_lo, r_hi = radial_range(slc.C, extent)
    r = np.linspace(r_lo, r_hi, n_r)
    s = np.linspace(0.0, slc.period, n_s)
    pp = np.array([0.5 * (lo + hi) for lo, hi in q.plus.angle_box()])
    pm = np.array([0.5 * (lo + hi) for lo, hi in q.minus.angle_box()])
    x = q.point(r, np.broadcast_to(pp, (n_r, len(pp))), np.broadcast_to(pm, (n_r, len(pm))), branch)
    z = x[:, None, :] * slc.curve(s)[None, :, :]
    proj = default_projection(q.n) if projection is None else np.asarray(projection, dtype=float)
    verts = interleave(z).reshape(-1, 2 * q.n) @ proj.T
    idx = np.arange(n_r * n_s).reshape(n_r, n_s)
    faces = np.stack([idx[:-1, :-1], idx[1:, :-1], idx[1:, 1:], idx[:-1, 1:]], axis=-1).reshape(-1, 4)
    params = np.stack(np.meshgrid(r, s, indexing="ij"), axis=-1).reshape(-1, 2)
    mesh = MeshFile(verts, faces, params)
    mesh.validate()
    return mesh
