import math

import numpy as np
import pytest

from yocurves import closure
from yocurves.herm3 import FORM_GRAM
from yocurves.yo_core import (
    GridFunction,
    PlaneWave,
    check_lax_gauge_equivalence,
    lax_u,
    lax_v,
    plane_wave_eval,
    yo_residual,
    zero_curvature_residual,
    zero_curvature_residual_grid,
)

TWO_PI = 2.0 * math.pi


def test_plane_wave_constant():
    pw = PlaneWave(1.0, 0.0, 0.0)
    z, m = plane_wave_eval(pw, 5.0, 3.0)
    assert z == pytest.approx(1.0)
    assert m == 0.0
    assert pw.Lambda == 0.0


def test_plane_wave_from_closure_data():
    # p=q=1, k=2, lambda=1/sqrt(3): a^2 = (7/3)(4/3)(1/3) = 28/27, b = 0
    sol = closure.closure_from_pq(1, 1, 2.0, 1.0 / math.sqrt(3.0))
    pw = sol.plane_wave()
    z, m = plane_wave_eval(pw, 0.0, 0.0)
    assert z == pytest.approx(math.sqrt(28.0 / 27.0), abs=1e-14)
    assert m == pytest.approx(0.0, abs=1e-14)
    assert pw.Lambda == pytest.approx(-4.0)


def test_plane_wave_trefoil_parameters():
    # p=3, q=2, k=-2.5 run through the root relations: a = 2 sqrt(2), b = -4.25
    sol = closure.closure_from_pq(3, 2, -2.5, 0.0)
    pw = sol.plane_wave()
    z, m = plane_wave_eval(pw, math.pi, 0.0)
    assert z == pytest.approx(2.0 * math.sqrt(2.0) * np.exp(2.5j * math.pi), abs=1e-12)
    assert m == pytest.approx(-4.25)


def test_dispersion_is_normalized():
    pw = PlaneWave(1.0, -1.0, 2.0)
    assert pw.Lambda == pytest.approx(-(-1.0) - 4.0)
    assert pw.dispersion_residual() == 0.0
    broken = PlaneWave.unchecked(1.0, -1.0, 2.0, 0.0, Lambda=7.0)
    assert broken.Lambda == 7.0
    assert broken.dispersion_residual() > 0


def test_plane_wave_rejects_nonpositive_amplitude():
    with pytest.raises(ValueError):
        PlaneWave(0.0, 0.0, 1.0)


def test_lax_u_entries():
    u = lax_u(0.0, 0.0, 0.0)
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 2] = 1.0
    assert np.array_equal(u, expected)
    u = lax_u(1.0, 1j, 2.0)
    assert np.allclose(u, [[1, 0, 1], [-1, 0, 0], [2, -1j, -1]])


def test_lax_v_entries():
    assert np.array_equal(lax_v(0.0, 0.0, 0.0), np.zeros((3, 3)))
    v = lax_v(1.0, 0.0, 0.0)
    assert np.allclose(v, np.diag([-1j / 3, 2j / 3, -1j / 3]))
    v = lax_v(1.0, 1.0, 0.0)
    assert np.allclose(v, [[-1j / 3, -1j, 0], [1, 2j / 3, 1], [1, 1j, -1j / 3]])


def test_lax_matrices_in_algebra(rng):
    # real lambda: U and V are trace-free and satisfy X^dagger J + J X = 0
    for _ in range(20):
        lam = float(rng.standard_normal())
        z = complex(rng.standard_normal(), rng.standard_normal())
        z_x = complex(rng.standard_normal(), rng.standard_normal())
        m = float(rng.standard_normal())
        for mat in (lax_u(lam, z, m), lax_v(lam, z, z_x)):
            assert abs(np.trace(mat)) < 1e-14
            assert np.abs(mat.conj().T @ FORM_GRAM + FORM_GRAM @ mat).max() < 1e-14


def test_zero_curvature_plane_wave(rng):
    pw = PlaneWave(1.3, -0.4, 1.7)
    xs = rng.uniform(0, TWO_PI, 16)
    ts = rng.uniform(-1, 1, 16)
    assert zero_curvature_residual(pw, 0.3, xs, ts) < 1e-10


def test_zero_curvature_zero_wave_exact():
    # z = 0, m const: U, V constant and commuting, residual exactly zero
    pw = PlaneWave.unchecked(1.0, 2.0, 0.0, 0.0, Lambda=-2.0)
    u = lax_u(0.5, 0.0, 2.0)
    v = lax_v(0.5, 0.0, 0.0)
    assert np.abs(u @ v - v @ u).max() == 0.0


def test_zero_curvature_broken_dispersion(rng):
    sol = closure.closure_from_pq(3, 2, -2.5, 0.0)
    pw = sol.plane_wave()
    broken = PlaneWave.unchecked(pw.a, pw.b, pw.k, 0.0, pw.Lambda + 1.0)
    xs = rng.uniform(0, TWO_PI, 8)
    ts = rng.uniform(-1, 1, 8)
    res = zero_curvature_residual(broken, 0.0, xs, ts)
    assert res > 0.1  # defect proportional to the dispersion mismatch times a


def test_zero_curvature_grid():
    pw = PlaneWave(1.2, -0.5, 2.0)  # integer k: periodic on [0, 2*pi]
    dt = 1e-3
    xg = np.arange(64) * TWO_PI / 64
    ts = np.array([-dt, 0.0, dt])
    z = np.stack([pw.z(xg, t) for t in ts])
    m = np.full_like(z, pw.b, dtype=float)
    res = zero_curvature_residual_grid(GridFunction(z), GridFunction(m), dt, 0.4)
    assert res < 5e-5  # centered t-difference error dominates
    dt2 = 1e-4
    z2 = np.stack([pw.z(xg, t) for t in (-dt2, 0.0, dt2)])
    res2 = zero_curvature_residual_grid(GridFunction(z2), GridFunction(m), dt2, 0.4)
    assert res2 < 0.02 * res  # second order in dt


def test_grid_function_validation():
    with pytest.raises(ValueError, match="power of two"):
        GridFunction(np.zeros(12))
    with pytest.raises(ValueError, match="power of two"):
        GridFunction(np.zeros(4))
    with pytest.raises(ValueError, match="finite"):
        GridFunction(np.array([np.inf] + [0.0] * 7))


def test_yo_residual_plane_wave():
    pw = PlaneWave(1.0, -1.0, 0.0)
    assert pw.Lambda == pytest.approx(1.0)
    dt = 1e-3
    xg = np.arange(64) * TWO_PI / 64
    z = np.stack([pw.z(xg, t) for t in (-dt, 0.0, dt)])
    m = np.full((3, 64), pw.b)
    r_z, r_m = yo_residual(GridFunction(z), GridFunction(m), dt)
    assert r_z < 2e-6  # O(dt^2)
    assert r_m < 1e-12


def test_yo_residual_zero_wave():
    z = np.zeros((3, 64), dtype=complex)
    m = np.full((3, 64), 1.5)
    r_z, r_m = yo_residual(GridFunction(z), GridFunction(m), 1e-3)
    assert r_z == 0.0
    assert r_m == 0.0


def test_yo_residual_frozen_constant():
    # time-frozen z = a, m = b: residual is |a (b + Lambda)| with Lambda = 0 frozen;
    # equivalently sampling the wave with a mis-set frequency leaves |a * delta|
    a, b, delta = 1.3, -0.8, 0.25
    pw = PlaneWave.unchecked(a, b, 0.0, 0.0, Lambda=-b + delta)
    dt = 1e-4
    xg = np.arange(8) * TWO_PI / 8
    z = np.stack([pw.z(xg, t) for t in (-dt, 0.0, dt)])
    m = np.full((3, 8), b)
    r_z, _ = yo_residual(GridFunction(z), GridFunction(m), dt)
    assert r_z == pytest.approx(a * delta, rel=1e-6)


def test_yo_residual_phase_equivariance(rng):
    n = 64
    xg = np.arange(n) * TWO_PI / n
    dt = 1e-3
    base = np.stack([
        np.cos(xg) + 0.5j * np.sin(2 * xg) + t * np.exp(1j * xg)
        for t in (-dt, 0.0, dt)
    ])
    m = np.stack([np.cos(xg) + t for t in (-dt, 0.0, dt)])
    r1, _ = yo_residual(GridFunction(base), GridFunction(m), dt)
    phase = np.exp(0.8j)
    r2, _ = yo_residual(GridFunction(phase * base), GridFunction(m), dt)
    assert r2 == pytest.approx(r1, rel=1e-12)


def test_yo_residual_needs_three_slices():
    z = np.zeros((2, 64), dtype=complex)
    m = np.zeros((2, 64))
    with pytest.raises(ValueError, match="3 time slices"):
        yo_residual(GridFunction(z), GridFunction(m), 1e-3)


def test_yo_residual_mismatched_grids():
    z = np.zeros((3, 64), dtype=complex)
    m = np.zeros((3, 32))
    with pytest.raises(ValueError, match="mismatch"):
        yo_residual(GridFunction(z), GridFunction(m), 1e-3)


def test_gauge_equivalence():
    assert check_lax_gauge_equivalence(0.0, 0.0, 0.0)
    assert check_lax_gauge_equivalence(1.0, 1.0 + 1.0j, -2.0, tol=1e-14)
    assert check_lax_gauge_equivalence(1.3, 0.7 - 0.2j, 1.5, z_x=0.3 + 0.9j, tol=1e-14)


def test_gauge_equivalence_needs_conjugate():
    assert not check_lax_gauge_equivalence(1.0, 1.0 + 1.0j, -2.0,
                                           substitute_conjugate=False)
