import cmath
import json
import math

import pytest

import qcprop


def test_geometry_basics():
    sphere = qcprop.geometry("sphere", 2.0)
    assert qcprop.kahler_potential(sphere, 1.0, 1.0) == pytest.approx(2.0 * math.log(2.0))
    assert qcprop.metric(sphere, 0.0, 0.0) == pytest.approx(2.0)
    plane = qcprop.geometry("plane", 3.0)
    assert qcprop.liouville_density(plane, 0.3 + 0.1j) == pytest.approx(3.0)


def test_overlap_normalization():
    disk = qcprop.geometry("disk", 2.6)
    assert abs(qcprop.overlap(disk, 0.2 + 0.1j, 0.2 + 0.1j) - 1.0) < 1e-12
    assert abs(qcprop.overlap(disk, 0.1, 0.5)) < 1.0


def test_free_propagation_is_overlap():
    g = qcprop.geometry("sphere", 3.0)
    h = qcprop.hamiltonian(g, "[]")
    bd = qcprop.BoundaryData(z_I=0.3 + 0.1j, zbar_F=0.2 - 0.4j, tau=0.7)
    r = qcprop.propagator_qc(g, h, bd)
    expected = qcprop.overlap(g, (0.2 - 0.4j).conjugate(), 0.3 + 0.1j)
    assert abs(r["amplitude"] - expected) < 1e-10
    assert abs(r["reduced"] - 1.0) < 1e-10


def test_oscillator_closed_form():
    g = qcprop.geometry("plane", 1.0)
    h = qcprop.oscillator(1.3)
    bd = qcprop.BoundaryData(z_I=0.7 + 0.3j, zbar_F=0.2 - 0.5j, tau=0.9)
    r = qcprop.propagator_qc(g, h, bd)
    zf = bd.zbar_F.conjugate()
    phi = bd.zbar_F * bd.z_I * cmath.exp(-1.3j * bd.tau) - 0.5 * (abs(zf) ** 2 + abs(bd.z_I) ** 2)
    assert abs(r["amplitude"] / cmath.exp(phi) - 1.0) < 1e-10


def test_su2_exactness_vs_oracle():
    g = qcprop.geometry("sphere", 4.0)  # j = 2
    h = qcprop.su2_linear(0.7, 0.3 + 0.2j)
    bd = qcprop.BoundaryData(z_I=0.4, zbar_F=-0.1 + 0.5j, tau=1.0)
    r = qcprop.propagator_qc(g, h, bd)
    exact = qcprop.exact_amplitude(g, h, bd.z_I, bd.zbar_F.conjugate(), bd.tau)
    assert abs(r["amplitude"] / exact - 1.0) < 1e-7
    assert abs(r["reduced"] - 1.0) < 1e-7


def test_trajectory_shooting_residual():
    g = qcprop.geometry("sphere", 10.0)  # j = 5
    h = qcprop.su2_quadratic()
    bd = qcprop.BoundaryData(z_I=0.3, zbar_F=0.2, tau=0.5)
    t = qcprop.solve_trajectory(g, h, bd)
    assert t["solver"] == "shooting"
    assert t["residual"] <= 1e-10
    assert t["z_path"][0] == bd.z_I


def test_run_propagate_json_roundtrip():
    config = {
        "mode": "propagate",
        "geometry": {"kind": "plane", "weight": 1.0},
        "hamiltonian": [{"generators": ["n"], "coeff": {"re": 1.0, "im": 0.0}}],
        "boundary": {
            "z_I": {"re": 0.4, "im": 0.1},
            "zbar_F": {"re": 0.2, "im": -0.3},
            "tau": 1.0,
        },
    }
    out = json.loads(qcprop.run_propagate_json(json.dumps(config)))
    assert out["rel_error"] < 1e-9
    assert not out["qc_only"]


def test_incompatible_algebra_raises():
    g = qcprop.geometry("plane", 1.0)
    h = qcprop.su2_linear(0.5, 0.1)
    bd = qcprop.BoundaryData(z_I=0.1, zbar_F=0.1, tau=0.3)
    with pytest.raises(qcprop.QcpropError):
        qcprop.propagator_qc(g, h, bd)
