import cmath

import numpy as np
import pytest

import hopfkit


def test_default_models():
    ns = hopfkit.default_model("nonsymmetric")
    s = hopfkit.default_model("symmetric")
    assert ns.kind == "nonsymmetric" and s.kind == "symmetric"
    assert s.D.shape == (4, 4)
    assert hopfkit.check_reflection(s)["conditions_hold"]


def test_invalid_model_raises():
    with pytest.raises(hopfkit.DomainError):
        hopfkit.build_model("nonsymmetric", epsilon0=-1.0)
    with pytest.raises(hopfkit.HopfkitError):
        hopfkit.default_model("triangular")


def test_symbol_trace_matches_eigenvalue_sum():
    m = hopfkit.default_model()
    a = hopfkit.symbol_matrix(m, 1.3)
    z = hopfkit.eigenvalues(a)
    assert abs(sum(z) - np.trace(a)) < 1e-10


def test_dispersion_and_crossing():
    m = hopfkit.default_model()
    d = hopfkit.dispersion(m)
    assert d["z"].shape == (2401, 4)
    assert np.allclose(d["omega"], d["z"].real.max(axis=1))
    c = hopfkit.find_crossing(m)
    assert c["k0"] == pytest.approx(-4.47675, abs=1e-4)
    assert c["kappa0"] == pytest.approx(-4.54605, abs=1e-4)


def test_hopf_single_speed():
    r = hopfkit.hopf_single(hopfkit.default_model())
    assert r["z_prime_k"]["re"] == pytest.approx(0.896648, abs=1e-5)


def test_hopf_multiple_linear_coefficient():
    r = hopfkit.hopf_multiple(hopfkit.default_model("symmetric"))
    a = complex(r["a"]["re"], r["a"]["im"])
    assert cmath.isclose(a, -3.24658545e-5 - 0.0406767522j, abs_tol=1e-8)


def test_short_simulation_is_bounded():
    d = hopfkit.simulate(hopfkit.default_model("symmetric"), T=1.0, N=16)
    assert not d["blowup"]


def test_run_criterion_one():
    r = hopfkit.run_criterion(1)
    assert r["pass"], r["rows"]
