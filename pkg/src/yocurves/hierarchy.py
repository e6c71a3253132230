"""The commuting hierarchy on transverse curves: conserved densities, the
first four vector fields, the Hamiltonian operator pair, and the
inner-product identities among the fields.

Vector fields are expressed as X = f*gamma + g*b + h*v in a natural frame;
the frame stays adapted along the flow exactly when h_x = -2 Re f and
(Im f)_x = Re(g conj(z)).  The four fields below are the closed forms of the
first hierarchy members and satisfy those constraints identically.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import framegen, spectral

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class InvariantGrid:
    """Periodic samples of the invariants: z = zr + i*zi and the level m."""

    zr: np.ndarray
    zi: np.ndarray
    m: np.ndarray
    period: float = TWO_PI

    def __post_init__(self):
        zr = np.asarray(self.zr, dtype=float)
        zi = np.asarray(self.zi, dtype=float)
        m = np.broadcast_to(np.asarray(self.m, dtype=float), zr.shape).copy()
        if zr.shape != zi.shape:
            raise ValueError("component grids must share a shape")
        if zr.ndim != 1 or len(zr) < 8:
            raise ValueError("need at least 8 periodic samples")
        object.__setattr__(self, "zr", zr)
        object.__setattr__(self, "zi", zi)
        object.__setattr__(self, "m", m)

    @classmethod
    def from_complex(cls, z, m, period: float = TWO_PI) -> "InvariantGrid":
        z = np.asarray(z, dtype=complex)
        return cls(zr=z.real, zi=z.imag, m=m, period=period)

    @classmethod
    def from_plane_wave(cls, pw, n: int = 256, t: float = 0.0,
                        period: float = TWO_PI) -> "InvariantGrid":
        """Sample a plane wave; requires k*period/(2 pi) integral so the grid is periodic."""
        windings = pw.k * period / TWO_PI
        if abs(windings - round(windings)) > 1e-12:
            raise ValueError("plane wave is not periodic on this grid (k not integral)")
        xs = np.arange(n) * (period / n)
        return cls.from_complex(pw.z(xs, t), pw.b, period=period)

    @property
    def n(self) -> int:
        return len(self.zr)

    @property
    def x(self):
        return np.arange(self.n) * (self.period / self.n)

    @cached_property
    def z(self):
        return self.zr + 1j * self.zi

    @cached_property
    def z_x(self):
        return spectral.deriv(self.z, period=self.period)

    @cached_property
    def z_xx(self):
        return spectral.deriv(self.z, order=2, period=self.period)

    @cached_property
    def m_x(self):
        return spectral.deriv(self.m, period=self.period)

    def integral(self, samples) -> float:
        return float(np.mean(samples) * self.period)


def density(n_index: int, grid: InvariantGrid):
    """Pointwise samples of the n-th conserved density, n in 1..4."""
    if n_index == 1:
        return 0.5 * grid.m
    if n_index == 2:
        return 0.5 * np.abs(grid.z) ** 2
    if n_index == 3:
        return 0.5 * np.imag(np.conj(grid.z) * grid.z_x) - 0.125 * grid.m ** 2
    if n_index == 4:
        return -0.5 * (grid.m * np.abs(grid.z) ** 2 + np.abs(grid.z_x) ** 2)
    raise ValueError("only densities 1..4 are supported")


def charge(n_index: int, grid: InvariantGrid) -> float:
    """Spatial integral of the n-th density over the period."""
    return grid.integral(density(n_index, grid))


@dataclass(frozen=True)
class FieldCoefficients:
    """Components (f, g, h) of a frame-adapted vector field f*gamma + g*b + h*v."""

    f: np.ndarray
    g: np.ndarray
    h: np.ndarray


def hierarchy_field(n_index: int, grid: InvariantGrid) -> FieldCoefficients:
    """Closed-form coefficients of the n-th hierarchy field, n in 1..4."""
    n = grid.n
    zero = np.zeros(n)
    z = grid.z
    if n_index == 1:
        return FieldCoefficients(f=zero + 0j, g=zero + 0j, h=np.ones(n))
    if n_index == 2:
        return FieldCoefficients(f=zero + 0j, g=1j * z, h=zero)
    if n_index == 3:
        return FieldCoefficients(
            f=0.25 * grid.m_x + 0.5j * np.abs(z) ** 2,
            g=grid.z_x,
            h=-0.5 * grid.m,
        )
    if n_index == 4:
        abs2_x = spectral.deriv(np.abs(z) ** 2, period=grid.period)
        return FieldCoefficients(
            f=0.5 * abs2_x - 1j * np.imag(np.conj(z) * grid.z_x),
            g=1j * (grid.z_xx - grid.m * z),
            h=-np.abs(z) ** 2,
        )
    raise ValueError("only fields 1..4 are supported")


def non_stretching_residuals(fc: FieldCoefficients, grid: InvariantGrid):
    """Max-norm defects of h_x = -2 Re f and (Im f)_x = Re(g conj(z))."""
    r1 = np.abs(spectral.deriv(fc.h, period=grid.period) + 2.0 * fc.f.real).max()
    r2 = np.abs(spectral.deriv(fc.f.imag, period=grid.period)
                - np.real(fc.g * np.conj(grid.z))).max()
    return float(r1), float(r2)


def field_inner(fc1: FieldCoefficients, fc2: FieldCoefficients):
    """Pointwise Hermitian product of two frame-adapted fields.

    Expanding in the frame and applying the null-frame Gram relations leaves
    <X, Y> = g1 conj(g2) + i (h1 conj(f2) - f1 conj(h2)).
    """
    return (fc1.g * np.conj(fc2.g)
            + 1j * (fc1.h * np.conj(fc2.f) - fc1.f * np.conj(fc2.h)))


def identity_sums(grid: InvariantGrid, up_to: int = 4) -> dict:
    """Max-norms of the alternating/plain inner-product sums that vanish.

    With fields X1..X4 these are testable for the order-2 and order-3 sums
    and the order-4 plain sum; higher identities need fields beyond X4.
    """
    if up_to < 4:
        raise ValueError("need fields up to X4")
    fields = {j: hierarchy_field(j, grid) for j in range(1, 5)}
    even2 = field_inner(fields[2], fields[1]) + field_inner(fields[1], fields[2])
    odd3 = (field_inner(fields[3], fields[1])
            - field_inner(fields[2], fields[2])
            + field_inner(fields[1], fields[3]))
    even4 = (field_inner(fields[4], fields[1]) + field_inner(fields[3], fields[2])
             + field_inner(fields[2], fields[3]) + field_inner(fields[1], fields[4]))
    return {
        "even_2": float(np.abs(even2).max()),
        "odd_3": float(np.abs(odd3).max()),
        "even_4": float(np.abs(even4).max()),
    }


def tangential_part(n_index: int, grid: InvariantGrid):
    """d_n = Re <X_n, X_1>, the tangential imaginary part Im f_n."""
    return hierarchy_field(n_index, grid).f.imag


def tangential_identity_residual(n_index: int, grid: InvariantGrid) -> float:
    """Defect of d_n against -1/2 of its inner-product sum (n = 2, 3, 4)."""
    fields = {j: hierarchy_field(j, grid) for j in range(1, 5)}
    if n_index == 2:
        target = np.zeros(grid.n, dtype=complex)  # empty sum
    elif n_index == 3:
        target = -0.5 * (-field_inner(fields[2], fields[2]))
    elif n_index == 4:
        target = -0.5 * (field_inner(fields[3], fields[2])
                         + field_inner(fields[2], fields[3]))
    else:
        raise ValueError("testable only for n = 2, 3, 4")
    return float(np.abs(tangential_part(n_index, grid) - target).max())


def _nonlocal_term(grid: InvariantGrid, integrand, name: str):
    return spectral.antideriv(integrand, period=grid.period, name=name)


def apply_hamiltonian_p(grid: InvariantGrid, w):
    """Apply the third-order Hamiltonian operator to (w1, w2, w3).

    The two nonlocal entries of each of the first two rows are combined into
    a single antiderivative, which must have zero mean; a non-zero-mean
    integrand raises with the offending row named.  Feeding the coefficient
    vector of X2, (zr, zi, 0), reproduces the right side of the evolution
    equations in real coordinates.
    """
    w1, w2, w3 = (np.asarray(c, dtype=float) for c in w)
    kk, ll, mm = grid.zr, grid.zi, grid.m
    period = grid.period

    def dx(s, order=1):
        return spectral.deriv(s, order=order, period=period)

    row1_nonlocal = 3.0 * ll * _nonlocal_term(grid, -ll * w1 + kk * w2,
                                              "row 1 nonlocal integrand")
    row2_nonlocal = 3.0 * kk * _nonlocal_term(grid, ll * w1 - kk * w2,
                                              "row 2 nonlocal integrand")
    row1 = row1_nonlocal - dx(w2, 2) + mm * w2 + 2.0 * dx(kk * w3) + kk * dx(w3)
    row2 = row2_nonlocal + dx(w1, 2) - mm * w1 + 2.0 * dx(ll * w3) + ll * dx(w3)
    row3 = (2.0 * kk * dx(w1) + dx(kk * w1)
            + 2.0 * ll * dx(w2) + dx(ll * w2)
            + 2.0 * (mm * dx(w3) + dx(mm * w3)) - dx(w3, 3))
    return row1, row2, row3


def apply_hamiltonian_q(w, period: float = TWO_PI):
    """Apply the first-order companion operator: (w2, -w1, D w3)."""
    w1, w2, w3 = (np.asarray(c, dtype=float) for c in w)
    return w2.copy(), -w1.copy(), spectral.deriv(w3, period=period)


def yo_rhs_real(grid: InvariantGrid):
    """Right side of the evolution equations in (zr, zi, m) coordinates."""
    kk, ll, mm = grid.zr, grid.zi, grid.m
    kk_xx = spectral.deriv(kk, order=2, period=grid.period)
    ll_xx = spectral.deriv(ll, order=2, period=grid.period)
    abs2_x = spectral.deriv(kk ** 2 + ll ** 2, period=grid.period)
    return -ll_xx + mm * ll, kk_xx - mm * kk, 2.0 * abs2_x


def flow_consistency(sol, t: float = 0.0, dt: float = 1e-4, n: int = 256) -> float:
    """Residual of the finite-difference time derivative of the lift against
    the flow field i z b + (i lam^2 / 3) gamma."""
    xs = np.arange(n) * (TWO_PI / n)
    fld_m = framegen.natural_frame_field(sol, xs, t - dt)
    fld_0 = framegen.natural_frame_field(sol, xs, t)
    fld_p = framegen.natural_frame_field(sol, xs, t + dt)
    gamma_t = (fld_p.gamma - fld_m.gamma) / (2.0 * dt)
    target = 1j * fld_0.z[:, None] * fld_0.b + (1j * sol.lam ** 2 / 3.0) * fld_0.gamma
    return float(np.abs(gamma_t - target).max())
