import math

import numpy as np
import pytest

import hdgpy


def test_structured_mesh_arrays():
    m = hdgpy.structured_mesh(2)
    assert m.num_cells == 8
    assert m.num_facets == 16
    assert m.vertices.shape == (9, 2)
    assert m.cells.shape == (8, 3)
    assert m.area == pytest.approx(1.0)
    assert m.refine().num_cells == 32


def test_mesh_text_round_trip():
    m = hdgpy.lshape_mesh(2)
    back = hdgpy.Mesh.from_text(m.to_text())
    assert back.num_cells == 6
    assert np.array_equal(back.cells, m.cells)
    with pytest.raises(hdgpy.ParseError):
        hdgpy.Mesh.from_text("hdgmesh 1\nvertices 0\n")


def test_catalog_contains_every_equation():
    names = hdgpy.catalog()
    for prefix in ("poisson_", "cdr_", "stokes_", "oseen_"):
        assert any(n.startswith(prefix) for n in names)


def test_linear_case_is_exact():
    r = hdgpy.solve("cdr_linear", 3, k=1)
    assert r["errors"]["u_L2"] < 1e-10
    assert r["errors"]["p_L2"] < 1e-10


def test_solve_reports_bounds_and_gamma():
    r = hdgpy.solve("poisson_smooth", 4, k=1, inf_sup=True, error_bounds=True, compare_monolithic=True)
    assert 0.5 < r["gamma"] <= 1.0
    assert r["monolithic_difference"] < 1e-9
    assert r["bounds"] and all(b["holds"] for b in r["bounds"])


def test_convergence_rate():
    rep = hdgpy.convergence("poisson_smooth", [4, 8, 16], k=1)
    assert rep["rates"]["u_L2"][-1] > 1.9
    assert len(rep["levels"]) == 3


def test_inf_sup_methods_agree():
    d = hdgpy.inf_sup("stokes_smooth", 2, method="dense")
    l = hdgpy.inf_sup("stokes_smooth", 2, method="lanczos")
    assert d["method"] == "dense" and l["method"] == "lanczos"
    assert math.isclose(d["gamma"], l["gamma"], rel_tol=1e-10)


def test_identity_residual():
    assert hdgpy.identity_residual("oseen_smooth_rotation", 3, k=2) < 1e-11


def test_config_hash_is_canonical():
    a = hdgpy.config_hash("[problem]\ncase = poisson_smooth\nk = 2\n")
    b = hdgpy.config_hash("# same\n[problem]\nk=2\ncase=poisson_smooth\n")
    assert a == b and len(a) == 16
    with pytest.raises(hdgpy.ConfigError):
        hdgpy.config_hash("[problem]\nspeed = 3\n")


def test_errors_map_to_exceptions():
    with pytest.raises(hdgpy.AssemblyError):
        hdgpy.solve("stokes_smooth", 2, nu=-1.0)
    with pytest.raises(hdgpy.AssemblyError):
        hdgpy.solve("cdr_smooth", 4, beta_x=10.0, beta_y=0.0)
    with pytest.raises(hdgpy.ConfigError):
        hdgpy.solve("no_such_case", 2)
    assert issubclass(hdgpy.AssemblyError, hdgpy.HdgError)
