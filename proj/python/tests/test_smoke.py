"""End-to-end smoke tests for the python bindings."""

import numpy as np
import pytest

import algmech


RIGID_H = "0.5*(xi1^2+xi2^2/2+xi3^2/3)"
RIGID_L = "0.5*(y1^2+2*y2^2+3*y3^2)"
EMPTY = np.zeros(0)
ONES3 = np.ones(3)


def test_model_registry_and_properties():
    names = algmech.Model.builtin_names()
    assert "so3" in names and "broken2" in names
    so3 = algmech.Model.builtin("so3")
    assert (so3.n, so3.m) == (0, 3)
    assert so3.almost_lie
    assert "so3" in repr(so3)
    assert not algmech.Model.builtin("broken2").almost_lie


def test_model_from_json_text_and_anchor():
    text = '{"name":"line","n":1,"m":1,"rho":[["1"]],"C":[[["0"]]]}'
    model = algmech.Model.from_json_text(text)
    assert model.rho(np.array([0.7])) == pytest.approx(np.array([[1.0]]))
    assert algmech.almost_lie_residual(model, np.array([0.3])) == 0.0

    tm2 = algmech.Model.builtin("tm2")
    assert np.allclose(tm2.rho(np.zeros(2)), np.eye(2))
    C = tm2.structure(np.zeros(2))
    assert len(C) == 2 and all(np.allclose(Cc, 0) for Cc in C)


def test_jet_eval_matches_hand_derivatives():
    value, grad, hess = algmech.jet_eval(
        "x1^2*x2 + sin(x2)", ["x1", "x2"], np.array([2.0, 0.0])
    )
    assert value == pytest.approx(0.0)
    assert grad == pytest.approx(np.array([0.0, 5.0]))
    assert hess == pytest.approx(np.array([[0.0, 4.0], [4.0, 0.0]]))


def test_lambda_matrix_rotation_block():
    so3 = algmech.Model.builtin("so3")
    P = algmech.lambda_matrix(so3, EMPTY, np.array([0.0, 0.0, 1.0]))
    assert P == pytest.approx(np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]))


def test_rigid_body_field_oracle():
    so3 = algmech.Model.builtin("so3")
    _, dxi = algmech.hamiltonian_field(so3, RIGID_H, EMPTY, ONES3)
    assert dxi == pytest.approx(np.array([-1.0 / 6.0, 2.0 / 3.0, -0.5]))


def test_hamiltonian_section_includes_to_field():
    so3 = algmech.Model.builtin("so3")
    xi = np.array([0.4, -1.1, 0.9])
    e, w = algmech.hamiltonian_section(so3, RIGID_H, EMPTY, xi)
    assert e == pytest.approx(np.array([xi[0], xi[1] / 2.0, xi[2] / 3.0]))
    _, dxi = algmech.hamiltonian_field(so3, RIGID_H, EMPTY, xi)
    assert w == pytest.approx(dxi, abs=1e-12)


def test_el_field_routes_agree_on_rigid_body():
    so3 = algmech.Model.builtin("so3")
    _, dy_phase = algmech.el_field(so3, RIGID_L, EMPTY, ONES3, route="phase")
    _, dy_prolong = algmech.el_field(so3, RIGID_L, EMPTY, ONES3, route="prolong")
    assert dy_phase == pytest.approx(np.array([-1.0, 1.0, -1.0 / 3.0]))
    assert dy_phase == pytest.approx(dy_prolong, abs=1e-12)
    with pytest.raises(ValueError):
        algmech.el_field(so3, RIGID_L, EMPTY, ONES3, route="sideways")


def test_el_residuals_flag_perturbations():
    so3 = algmech.Model.builtin("so3")
    dx, dy = algmech.el_field(so3, RIGID_L, EMPTY, ONES3)
    res = algmech.el_residuals(so3, RIGID_L, EMPTY, ONES3, dx, dy)
    assert np.max(np.abs(res["phase"])) < 1e-12
    assert np.max(np.abs(res["prolong"])) < 1e-12
    bad = algmech.el_residuals(so3, RIGID_L, EMPTY, ONES3, dx, dy + 0.1)
    assert np.max(np.abs(bad["phase"])) > 1e-3
    assert np.max(np.abs(bad["prolong"])) > 1e-3


def test_energy_and_legendre():
    so3 = algmech.Model.builtin("so3")
    assert algmech.energy(so3, RIGID_L, EMPTY, ONES3) == pytest.approx(3.0)
    _, xi = algmech.legendre(so3, RIGID_L, EMPTY, ONES3)
    assert xi == pytest.approx(np.array([1.0, 2.0, 3.0]))


def test_integration_conserves_energy_and_matches_routes():
    so3 = algmech.Model.builtin("so3")
    traj = algmech.integrate_hamiltonian(so3, RIGID_H, EMPTY, ONES3, 0.01, 2.0)
    assert traj["t"][-1] == pytest.approx(2.0)
    assert traj["states"].shape == (201, 3)
    assert traj["state_names"] == ["xi1", "xi2", "xi3"]
    energies = traj["monitors"][:, traj["monitor_names"].index("energy")]
    assert np.max(np.abs(energies - energies[0])) < 1e-9

    el_phase = algmech.integrate_el(so3, RIGID_L, EMPTY, ONES3, 0.01, 1.0)
    el_prolong = algmech.integrate_el(
        so3, RIGID_L, EMPTY, ONES3, 0.01, 1.0, route="prolong"
    )
    assert np.allclose(el_phase["states"], el_prolong["states"], atol=1e-12)
    assert "residual_prolong" in el_phase["monitor_names"]


def test_verification_reports():
    reports = algmech.verify_model(algmech.Model.builtin("so3"), samples=10, seed=3)
    assert len(reports) == 9
    assert all(r["ok"] for r in reports)
    checks = {r["check"] for r in reports}
    assert "hamiltonian_two_routes" in checks
    assert "perturbation_detected" in checks

    everything = algmech.verify_all(samples=6, seed=1)
    assert len(everything) == 47
    assert all(r["ok"] for r in everything)


def test_exception_mapping():
    so3 = algmech.Model.builtin("so3")
    with pytest.raises(algmech.SingularError):
        algmech.el_field(so3, "y1", EMPTY, ONES3)
    with pytest.raises(algmech.DomainError):
        algmech.hamiltonian_field(so3, "1/xi1", EMPTY, np.zeros(3))
    with pytest.raises(algmech.ParseError):
        algmech.energy(so3, "0.5*(y1^2", EMPTY, ONES3)
    with pytest.raises(algmech.ModelError):
        algmech.Model.builtin("nosuch")
    assert issubclass(algmech.SingularError, ArithmeticError)
    assert issubclass(algmech.ParseError, ValueError)
