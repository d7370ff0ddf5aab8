from __future__ import annotations

import numpy as np
import pytest

from lagflow.integer_family import IntegerSlice, LambdaSpec
from lagflow.mesh import CONE_R_MIN, MeshFile, default_projection, export_mesh, interleave, radial_range
from lagflow.ode_family import OdeSlice


def test_interleave_and_projection():
    z = np.array([[1 + 2j, 3 - 4j]])
    np.testing.assert_array_equal(interleave(z), [[1, 2, 3, -4]])
    proj = default_projection(2)
    np.testing.assert_array_equal(proj @ np.array([1, 2, 3, 4]), [1, 2, 3])


def test_grid_counts_and_face_indices():
    mesh = export_mesh(IntegerSlice.at_time(LambdaSpec((1, -2)), -0.5))
    assert mesh.vertices.shape == (4096, 3)
    assert mesh.faces.shape == (63 * 63, 4)
    assert mesh.faces.min() == 0 and mesh.faces.max() == 4095


def test_slices_scale_with_sqrt_time():
    spec = LambdaSpec((1, 1, -1))
    a = export_mesh(IntegerSlice.at_time(spec, -0.5), 16, 16)
    b = export_mesh(IntegerSlice.at_time(spec, -2.0), 16, 16)
    np.testing.assert_allclose(b.vertices, 2 * a.vertices, atol=1e-12)


def test_cone_starts_away_from_vertex():
    assert radial_range(0.0) == (CONE_R_MIN, 2.0)
    mesh = export_mesh(IntegerSlice.at_time(LambdaSpec((1, 1, -1)), 0.0), 8, 8)
    assert mesh.params[:, 0].min() == pytest.approx(CONE_R_MIN)


def test_files_are_written(tmp_path, orbits):
    mesh = export_mesh(OdeSlice(orbits["n3k2"], -0.2), 5, 6)
    mesh.write_obj(tmp_path / "m.obj")
    mesh.write_csv(tmp_path / "m.csv")
    obj = (tmp_path / "m.obj").read_text().splitlines()
    assert obj[0].startswith("v ") and obj[-1].startswith("f ")
    assert all(1 <= int(i) <= 30 for ln in obj if ln.startswith("f ") for i in ln.split()[1:])
    assert len((tmp_path / "m.csv").read_text().splitlines()) == 31


def test_invalid_mesh_is_rejected():
    bad = MeshFile(np.array([[np.nan, 0, 0]]), np.zeros((0, 4), dtype=int), np.zeros((1, 2)))
    with pytest.raises(ValueError):
        bad.validate()
