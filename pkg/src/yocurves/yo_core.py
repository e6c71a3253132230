"""The Yajima-Oikawa system and its 3x3 Lax pair.

z_t = i(z_xx - m z),  m_t = 2(|z|^2)_x, with complex short-wave amplitude z
and real long-wave amplitude m.  Plane waves z = a e^{-i(kx - Lambda t)},
m = b solve the system exactly when the dispersion relation
b + k^2 + Lambda = 0 holds.  Residual evaluators check the zero-curvature
identity U_t - V_x + [U, V] = 0 either analytically (plane waves) or on
periodic grids (spectral x-derivatives, centered t-differences).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import spectral

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class PlaneWave:
    """Plane-wave solution parameters; the frequency is derived on construction.

    The primary constructor takes (a, b, k, lam) and sets
    Lambda = -b - k^2 so that invalid dispersion data is unrepresentable.
    Use `unchecked` to force an arbitrary Lambda in negative tests.
    """

    a: float
    b: float
    k: float
    lam: float = 0.0
    Lambda: float = field(init=False)

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("amplitude a must be positive")
        object.__setattr__(self, "Lambda", -self.b - self.k ** 2)

    @classmethod
    def unchecked(cls, a, b, k, lam=0.0, Lambda=0.0) -> "PlaneWave":
        pw = cls(a, b, k, lam)
        object.__setattr__(pw, "Lambda", Lambda)
        return pw

    def dispersion_residual(self) -> float:
        return abs(self.b + self.k ** 2 + self.Lambda)

    def phase(self, x, t):
        return self.k * x - self.Lambda * t

    def z(self, x, t=0.0):
        return self.a * np.exp(-1j * self.phase(x, t))

    def z_x(self, x, t=0.0):
        return -1j * self.k * self.z(x, t)

    def z_xx(self, x, t=0.0):
        return -self.k ** 2 * self.z(x, t)

    def z_t(self, x, t=0.0):
        return 1j * self.Lambda * self.z(x, t)

    def m(self, x=None, t=None):
        return self.b


def plane_wave_eval(pw: PlaneWave, x, t):
    """Sample (z, m) of the plane wave at (x, t)."""
    return pw.z(x, t), pw.m(x, t)


def lax_u(lam, z, m):
    """Spatial Lax matrix [[lam, 0, 1], [i z, 0, 0], [m, conj(z), -lam]]."""
    return np.array(
        [[lam, 0.0, 1.0],
         [1j * z, 0.0, 0.0],
         [m, np.conj(z), -lam]],
    )


def lax_v(lam, z, z_x):
    """Temporal Lax matrix; depends on z and its x-derivative."""
    lam2 = lam * lam
    return np.array(
        [[-1j * lam2 / 3.0, -1j * np.conj(z), 0.0],
         [lam * z - z_x, 2j * lam2 / 3.0, z],
         [z * np.conj(z), 1j * (lam * np.conj(z) - np.conj(z_x)), -1j * lam2 / 3.0]],
    )


def _plane_wave_point(pw: PlaneWave, lam, x, t, dtype):
    """Lax matrices and their analytic derivatives at one (x, t) point."""
    one = dtype(1.0)
    a = dtype(pw.a) * one
    k = dtype(pw.k) * one
    Lam = dtype(pw.Lambda) * one
    b = dtype(pw.b) * one
    lamc = dtype(lam) * one
    i_ = dtype(1j)
    z = a * np.exp(-i_ * (k * dtype(x) - Lam * dtype(t)))
    z_x = -i_ * k * z
    z_t = i_ * Lam * z
    z_xx = -k * k * z
    u = np.array(
        [[lamc, 0.0, 1.0],
         [i_ * z, 0.0, 0.0],
         [b, np.conj(z), -lamc]], dtype=dtype)
    v = np.array(
        [[-i_ * lamc ** 2 / 3, -i_ * np.conj(z), 0.0],
         [lamc * z - z_x, 2 * i_ * lamc ** 2 / 3, z],
         [z * np.conj(z), i_ * (lamc * np.conj(z) - np.conj(z_x)), -i_ * lamc ** 2 / 3]],
        dtype=dtype)
    u_t = np.zeros((3, 3), dtype=dtype)
    u_t[1, 0] = i_ * z_t
    u_t[2, 1] = np.conj(z_t)
    v_x = np.zeros((3, 3), dtype=dtype)
    v_x[0, 1] = -i_ * np.conj(z_x)
    v_x[1, 0] = lamc * z_x - z_xx
    v_x[1, 2] = z_x
    v_x[2, 0] = z_x * np.conj(z) + z * np.conj(z_x)
    v_x[2, 1] = i_ * (lamc * np.conj(z_x) - np.conj(z_xx))
    return u, v, u_t, v_x


def zero_curvature_residual(pw: PlaneWave, lam: float, xs, ts,
                            extended_precision: bool = True) -> float:
    """max-norm of U_t - V_x + [U, V] over the sampled (x, t) points.

    Derivatives are analytic.  The identity cancels products as large as
    |b| a^2, so by default the arithmetic runs in extended precision to keep
    the measured residual at rounding level even for large amplitudes.
    """
    dtype = np.clongdouble if extended_precision else np.complex128
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    worst = 0.0
    for x, t in zip(xs, ts):
        u, v, u_t, v_x = _plane_wave_point(pw, lam, x, t, dtype)
        res = u_t - v_x + u @ v - v @ u
        worst = max(worst, float(np.abs(res).max()))
    return worst


@dataclass(frozen=True)
class GridFunction:
    """Samples on a uniform periodic grid x_j = j * period / n.

    The last axis is x; a leading axis, when present, indexes time slices.
    """

    samples: np.ndarray
    period: float = TWO_PI

    def __post_init__(self):
        arr = np.asarray(self.samples)
        object.__setattr__(self, "samples", arr)
        n = arr.shape[-1]
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError("grid size must be a power of two, at least 8")
        if not np.all(np.isfinite(arr.view(float) if arr.dtype.kind == "c" else arr)):
            raise ValueError("grid samples must be finite")

    @property
    def n(self) -> int:
        return self.samples.shape[-1]

    @property
    def x(self):
        return np.arange(self.n) * (self.period / self.n)


def _check_compatible(zg: GridFunction, mg: GridFunction):
    try:
        common = np.broadcast_shapes(zg.samples.shape, mg.samples.shape)
    except ValueError:
        common = None
    if common != zg.samples.shape:
        raise ValueError("z and m grids have mismatched shapes")
    if zg.period != mg.period:
        raise ValueError("z and m grids have mismatched periods")


def yo_residual(zg: GridFunction, mg: GridFunction, dt: float):
    """Max-norm residuals (r_z, r_m) of both evolution equations.

    x-derivatives are spectral, the t-derivative is a centered difference on
    the interior slices; at least 3 time slices are required.
    """
    _check_compatible(zg, mg)
    z = np.asarray(zg.samples, dtype=complex)
    m = np.asarray(mg.samples, dtype=float)
    if z.ndim != 2 or z.shape[0] < 3:
        raise ValueError("need at least 3 time slices for centered t-differences")
    period = zg.period
    z_t = (z[2:] - z[:-2]) / (2.0 * dt)
    m_t = (m[2:] - m[:-2]) / (2.0 * dt)
    z_mid = z[1:-1]
    m_mid = m[1:-1]
    z_xx = spectral.deriv(z_mid, order=2, period=period)
    r_z = np.abs(z_t - 1j * (z_xx - m_mid * z_mid)).max()
    r_m = np.abs(m_t - 2.0 * spectral.deriv(np.abs(z_mid) ** 2, period=period)).max()
    return float(r_z), float(r_m)


def zero_curvature_residual_grid(zg: GridFunction, mg: GridFunction, dt: float,
                                 lam: float) -> float:
    """Grid version of the zero-curvature residual (spectral in x, centered in t)."""
    _check_compatible(zg, mg)
    z = np.asarray(zg.samples, dtype=complex)
    m = np.broadcast_to(np.asarray(mg.samples, dtype=float), z.shape)
    if z.ndim != 2 or z.shape[0] < 3:
        raise ValueError("need at least 3 time slices for centered t-differences")
    period = zg.period
    nt, nx = z.shape
    z_x = spectral.deriv(z, period=period)
    u = np.zeros((nt, nx, 3, 3), dtype=complex)
    u[..., 0, 0] = lam
    u[..., 0, 2] = 1.0
    u[..., 1, 0] = 1j * z
    u[..., 2, 0] = m
    u[..., 2, 1] = np.conj(z)
    u[..., 2, 2] = -lam
    v = np.zeros_like(u)
    lam2 = lam * lam
    v[..., 0, 0] = -1j * lam2 / 3.0
    v[..., 0, 1] = -1j * np.conj(z)
    v[..., 1, 0] = lam * z - z_x
    v[..., 1, 1] = 2j * lam2 / 3.0
    v[..., 1, 2] = z
    v[..., 2, 0] = np.abs(z) ** 2
    v[..., 2, 1] = 1j * (lam * np.conj(z) - np.conj(z_x))
    v[..., 2, 2] = -1j * lam2 / 3.0
    u_t = (u[2:] - u[:-2]) / (2.0 * dt)
    v_x = spectral.deriv(v, period=period, axis=1)[1:-1]
    u_mid, v_mid = u[1:-1], v[1:-1]
    res = u_t - v_x + u_mid @ v_mid - v_mid @ u_mid
    return float(np.abs(res).max())


# Gauge matrix conjugating the Lax pair above into the second standard
# convention (the one with substitutions A = conj(z), B = m, tau = t/2).
GAUGE_M = np.array(
    [[0.0, 0.0, 1.0],
     [0.0, 1.0, 0.0],
     [-1j, 0.0, 0.0]],
    dtype=complex,
)
GAUGE_M_INV = np.array(
    [[0.0, 0.0, 1j],
     [0.0, 1.0, 0.0],
     [1.0, 0.0, 0.0]],
    dtype=complex,
)


def alt_lax_u(zeta, amp, level):
    """Spatial Lax matrix in the second gauge; amp = conj(z), level = m."""
    return np.array(
        [[1j * zeta, amp, 1j * level],
         [0.0, 0.0, -np.conj(amp)],
         [-1j, 0.0, -1j * zeta]],
    )


def alt_lax_v(zeta, amp, amp_x):
    """Temporal Lax matrix in the second gauge.

    The time system in that convention carries an overall factor 2 together
    with the rescaling tau = t/2; the matrix here is the per-t coefficient.
    """
    zeta2 = zeta * zeta
    return np.array(
        [[1j * zeta2 / 3.0, zeta * amp - 1j * amp_x, 1j * amp * np.conj(amp)],
         [np.conj(amp), -2j * zeta2 / 3.0, zeta * np.conj(amp) - 1j * np.conj(amp_x)],
         [0.0, -amp, 1j * zeta2 / 3.0]],
    )


def check_lax_gauge_equivalence(lam: float, z: complex, m: float,
                                z_x: complex = 0.0j, tol: float = 1e-12,
                                substitute_conjugate: bool = True) -> bool:
    """Verify that the two Lax conventions are conjugate by the fixed gauge matrix.

    With amp = conj(z), level = m and zeta = i*lam, checks
    alt_lax_u = M @ lax_u @ M^-1 and alt_lax_v = M @ lax_v @ M^-1 entrywise.
    Passing substitute_conjugate=False uses amp = z instead, which breaks the
    identity (negative control).
    """
    amp = np.conj(z) if substitute_conjugate else z
    amp_x = np.conj(z_x) if substitute_conjugate else z_x
    zeta = 1j * lam
    ru = alt_lax_u(zeta, amp, m) - GAUGE_M @ lax_u(lam, z, m) @ GAUGE_M_INV
    rv = alt_lax_v(zeta, amp, amp_x) - GAUGE_M @ lax_v(lam, z, z_x) @ GAUGE_M_INV
    return max(np.abs(ru).max(), np.abs(rv).max()) <= tol
