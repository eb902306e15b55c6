import cmath
import math

import pytest

import plasmon


def test_golden_dipole_root():
    modes = plasmon.single_sphere_modes(10.0)
    assert len(modes) == 1
    w = modes[0].omega
    assert abs(w - complex(3.3468, 0.0519)) < 5e-4
    assert modes[0].normalization_residual() < 1e-8


def test_material_and_bessel():
    ideal = plasmon.DrudeMaterial(1.0, 8.9, 0.0)
    assert abs(plasmon.eps_in(ideal, 8.9 / math.sqrt(3.0)) + 2.0) < 1e-12
    assert abs(plasmon.sigma(ideal, complex(2.0, 0.3)) - 1.0) < 1e-12
    x = complex(1.3, 0.2)
    assert abs(plasmon.sph_hankel2(0, x) - 1j * cmath.exp(-1j * x) / x) < 1e-14
    assert abs(plasmon.sph_bessel_j(0, math.pi)) < 1e-12


def test_dimer_and_chain():
    wp, wm, k, metric = plasmon.dimer(10.0, 3.0, "horizontal")
    assert k.real < 0.0
    assert abs((wp + wm) / 2 - plasmon.single_sphere_modes(10.0)[0].omega) < 1e-12
    assert 0.0 <= metric <= 1.0
    w0, kap = complex(3.3468, 0.0519), complex(-0.2459, 0.0029)
    ev = plasmon.chain_eigenvalues(5, w0, kap, 0.5)
    assert abs(sum(ev) - (5 * w0 + 0.5j)) < 1e-12
    product, resolvent = plasmon.transmission_both(5, w0, kap, 0.5, 3.3)
    assert product == pytest.approx(resolvent, rel=1e-10)
    t = plasmon.transmission(5, w0, kap, 0.5, [3.0, 3.3, 3.6])
    assert len(t) == 3 and min(t) >= 0.0


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        plasmon.kappa(10.0, 1.5, "sideways")
    with pytest.raises(Exception):
        plasmon.kappa(10.0, 1.5, "horizontal")
