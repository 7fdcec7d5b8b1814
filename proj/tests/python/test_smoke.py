import math

import pytest

import geokern as gk


def test_version():
    assert gk.__version__ == "0.1.0"


def test_profile_eval():
    g = gk.Profile.gaussian()
    assert g(1.0) == pytest.approx(math.exp(-1.0))
    p = gk.Profile.power(-2.0, coefficient=3.0)
    assert p(2.0) == pytest.approx(0.75)
    b = gk.Profile.bump(1.0, 2.0)
    assert b(1.5) == pytest.approx(1.0)
    assert b(2.5) == 0.0


def test_special_values():
    assert gk.gegenbauer(1.0, 2, 0.3) == pytest.approx(4 * 0.09 - 1)
    assert gk.chebyshev(3, 0.5) == pytest.approx(4 * 0.125 - 3 * 0.5)
    assert gk.sphere_area(3) == pytest.approx(4 * math.pi)
    assert gk.harmonic_dim(3, 2) == 5


def test_operator_annihilates_kernel_element():
    basis = gk.kernel_basis("gc_right", 2, 4, lambda_=0.5)
    assert len(basis) == 2
    assert basis[0]["tag"] == "kernel:gc_right:l0.5:m4:j1"
    for el in basis:
        for t in (0.3, 1.0, 2.7):
            val = gk.gc_apply(0.5, 4, "right", False, el["profile"], t)
            mass = gk.gc_unsigned_mass(0.5, 4, "right", False, el["profile"], t)
            assert abs(val) <= 1e-9 * mass


def test_radon_gaussian_matches_closed_form():
    y0 = 1.0 / math.sqrt(2 * math.pi)
    for t in (0.4, 1.1):
        out = gk.radon(gk.Profile.gaussian(), 2, 0, 1, [1.0, 0.0], t)
        assert out["converged"]
        want = math.sqrt(math.pi) * math.exp(-t * t) * y0
        assert out["value"] == pytest.approx(want, rel=1e-8)


def test_fast_path_matches_direct():
    u = gk.Profile.gaussian()
    theta = [math.cos(0.7), math.sin(0.7)]
    fast = gk.radon(u, 2, 2, 1, theta, 0.9, path="intertwine")
    direct = gk.radon(u, 2, 2, 1, theta, 0.9, path="direct")
    assert fast["value"] == pytest.approx(direct["value"], rel=1e-6)


def test_funk_kernel_residual():
    basis = gk.kernel_basis("funk", 2, 2)
    colat = basis[0]["profile"]
    psi = 0.8
    theta = [math.sin(psi), 0.0, math.cos(psi)]
    out = gk.funk(colat, 2, 2, 1, theta, even=True)
    assert abs(out["value"]) <= 1e-5 * out["mass"]


def test_kernel_decompose_recovery():
    samples = [
        (t, 5.0 * t**-4 + 3.0 * t**-2)
        for t in [0.5 + 2.5 * i / 15.0 for i in range(16)]
    ]
    res = gk.kernel_decompose(samples, "radon_exterior", 2, 4)
    assert res["coefficients"][0] == pytest.approx(5.0, abs=1e-8)
    assert res["coefficients"][1] == pytest.approx(3.0, abs=1e-8)
    assert res["relative_residual"] <= 1e-10


def test_mellin_consistency():
    z = 3.25
    sym = gk.mellin_symbol(0.5, 2, z).real
    num = gk.mellin_symbol_numeric(0.5, 2, z)
    assert sym == pytest.approx(num, rel=1e-7)


def test_invalid_lambda_raises():
    with pytest.raises(ValueError):
        gk.gc_apply(-1.0, 2, "right", False, gk.Profile.gaussian(), 1.0)
