"""Frame construction for plane waves: the analytic fundamental matrix, the
numeric frame ODE, and residual validators tying the two together.

The fundamental matrix is Phi = P R E R^-1 P0^-1 with P a phase diagonal,
R the matrix of common eigenvectors and E the exponent diagonal; it solves
both halves of the linear system and equals the identity at the origin.
F = Phi^dagger is the lambda-natural frame: its columns (gamma, b, v) form a
unimodular null frame, and F_x = F Cx, F_t = F Ct with the transposed-
conjugate Lax coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .herm3 import frame_report_matrix
from .yo_core import lax_u, lax_v

TWO_PI = 2.0 * np.pi

# Phase generator used to pass between local and natural frames.
PHASE_J = np.diag([1j / 3.0, -2j / 3.0, 1j / 3.0])


def frame_coeff_x(lam, z, m):
    """x-coefficient of the frame system: conjugate transpose of the spatial Lax matrix."""
    return lax_u(lam, z, m).conj().T


def frame_coeff_t(lam, z, z_x):
    """t-coefficient of the frame system: conjugate transpose of the temporal Lax matrix."""
    return lax_v(lam, z, z_x).conj().T


def _exponents(sd):
    m = np.asarray(sd.m, dtype=float)
    n = np.asarray(sd.n, dtype=float)
    if np.min(np.abs(sd.k - m)) < 1e-12:
        raise ValueError("degenerate spectrum: k equals a root, a ~ 0")
    return m, n


def rmatrix(sd):
    """Eigenvector matrix: column j is (-1, a/(k - m_j), lam - i m_j)."""
    m, _ = _exponents(sd)
    return np.array(
        [[-1.0, -1.0, -1.0],
         [sd.a / (sd.k - m[0]), sd.a / (sd.k - m[1]), sd.a / (sd.k - m[2])],
         [sd.lam - 1j * m[0], sd.lam - 1j * m[1], sd.lam - 1j * m[2]]],
        dtype=complex,
    )


def common_pair(sd):
    """The two constant matrices whose shared eigenvectors are the columns of R.

    Column j is an eigenvector of the first with eigenvalue i m_j and of the
    second with eigenvalue i n_j.
    """
    first = np.array(
        [[sd.lam, 0.0, 1.0],
         [1j * sd.a, 1j * sd.k, 0.0],
         [sd.b, sd.a, -sd.lam]],
        dtype=complex,
    )
    lam2 = sd.lam * sd.lam
    second = np.array(
        [[-1j * lam2 / 3.0, -1j * sd.a, 0.0],
         [sd.a * (sd.lam + 1j * sd.k), 2j * lam2 / 3.0 - 1j * sd.Lambda, sd.a],
         [sd.a ** 2, sd.a * (sd.k + 1j * sd.lam), -1j * lam2 / 3.0]],
        dtype=complex,
    )
    return first, second


def build_rpe(sd, x: float, t: float = 0.0):
    """Factors (P, R, E) of the fundamental matrix at one point."""
    m, n = _exponents(sd)
    phase = sd.k * x - sd.Lambda * t
    p = np.diag([1.0, np.exp(-1j * phase), 1.0])
    e = np.diag(np.exp(1j * (m * x + n * t)))
    return p, rmatrix(sd), e


def fundamental_matrix(sd, x: float, t: float = 0.0):
    """Phi(x, t) = P R E R^-1 P0^-1, normalized to the identity at the origin."""
    return fundamental_matrix_grid(sd, np.array([x]), t)[0]


def fundamental_matrix_grid(sd, xs, t: float = 0.0):
    """Vectorized Phi over an array of x at fixed t; shape (len(xs), 3, 3)."""
    m, n = _exponents(sd)
    xs = np.asarray(xs, dtype=float)
    r = rmatrix(sd)
    rinv = np.linalg.inv(r)
    e = np.exp(1j * (m[None, :] * xs[:, None] + n[None, :] * t))
    phi = (r[None, :, :] * e[:, None, :]) @ rinv
    phi[:, 1, :] *= np.exp(-1j * (sd.k * xs - sd.Lambda * t))[:, None]
    # P0 = P(0, 0) is the identity; kept explicit for nonzero base points.
    p0_inv_diag = np.array([1.0, np.exp(1j * (sd.k * 0.0 - sd.Lambda * 0.0)), 1.0])
    phi *= p0_inv_diag[None, None, :]
    return phi


def natural_frame(sd, x: float, t: float = 0.0):
    """Natural frame matrix F = Phi^dagger; columns are (gamma, b, v)."""
    return fundamental_matrix(sd, x, t).conj().T


def natural_frame_grid(sd, xs, t: float = 0.0):
    return fundamental_matrix_grid(sd, xs, t).conj().transpose(0, 2, 1)


@dataclass
class FrameField:
    """Sampled frames F(x_j, t) at fixed t, with the generating curvature data."""

    xs: np.ndarray
    t: float
    lam: float
    frames: np.ndarray          # (n, 3, 3); columns of each are (gamma, b, v)
    provenance: str             # "analytic" or "integrated"
    z: np.ndarray               # curvature samples z(x_j)
    m: np.ndarray               # long-wave samples (broadcast scalar allowed)
    theta: np.ndarray | None = None   # natural-frame phase, when known in closed form

    @property
    def gamma(self):
        return self.frames[:, :, 0]

    @property
    def b(self):
        return self.frames[:, :, 1]

    @property
    def v(self):
        return self.frames[:, :, 2]


def natural_frame_field(sd, xs, t: float = 0.0) -> FrameField:
    """Analytic natural frames sampled on a grid."""
    xs = np.asarray(xs, dtype=float)
    phase = sd.k * xs - sd.Lambda * t
    return FrameField(
        xs=xs, t=t, lam=sd.lam,
        frames=natural_frame_grid(sd, xs, t),
        provenance="analytic",
        z=sd.a * np.exp(-1j * phase),
        m=np.full_like(xs, sd.b),
        theta=-phase,
    )


def integrate_frame(z_fn, m_fn, lam: float, f0, xs, check_tol: float = 1e-7) -> FrameField:
    """Integrate dF/dx = F Cx(lam, z(x), m(x)) with classical RK4 on the grid xs.

    f0 must pass the unimodular-frame check; the quadratic frame relations
    are conserved by the flow, so every sample is re-checked at check_tol and
    a failure aborts with the offending x.  The grid must be uniform with
    step at most 2*pi/256.
    """
    xs = np.asarray(xs, dtype=float)
    steps = np.diff(xs)
    if len(steps) == 0:
        raise ValueError("need at least two grid points")
    h = steps[0]
    if not np.allclose(steps, h, rtol=1e-12, atol=1e-12):
        raise ValueError("grid must be uniform")
    if h > TWO_PI / 256 * (1 + 1e-12):
        raise ValueError(f"grid step {h:g} too coarse; need h <= 2*pi/256")
    f0 = np.asarray(f0, dtype=complex)
    report = frame_report_matrix(f0, tol=check_tol)
    if not report.passed:
        raise ValueError(f"initial frame fails the unimodular-frame check: {report.failures()}")

    def rhs(x, f):
        return f @ frame_coeff_x(lam, z_fn(x), m_fn(x))

    frames = np.empty((len(xs), 3, 3), dtype=complex)
    frames[0] = f0
    f = f0
    for i, x in enumerate(xs[:-1]):
        k1 = rhs(x, f)
        k2 = rhs(x + h / 2, f + (h / 2) * k1)
        k3 = rhs(x + h / 2, f + (h / 2) * k2)
        k4 = rhs(x + h, f + h * k3)
        f = f + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        frames[i + 1] = f
        report = frame_report_matrix(f, tol=check_tol)
        if not report.passed:
            raise ValueError(
                f"frame relations violated at x={xs[i + 1]:.6g} "
                f"(max residual {report.max_residual:.3e})"
            )
    return FrameField(
        xs=xs, t=0.0, lam=lam, frames=frames, provenance="integrated",
        z=np.array([z_fn(x) for x in xs]),
        m=np.array([m_fn(x) for x in xs], dtype=float),
        theta=None,
    )


def frame_x_residual(sd, x: float, t: float = 0.0, h: float = 1e-4) -> float:
    """||F^-1 F_x - Cx||_max with F_x by centered differences."""
    fp = natural_frame(sd, x + h, t)
    fm = natural_frame(sd, x - h, t)
    f = natural_frame(sd, x, t)
    fd = (fp - fm) / (2.0 * h)
    pw = sd.plane_wave() if hasattr(sd, "plane_wave") else sd
    cx = frame_coeff_x(sd.lam, pw.z(x, t), sd.b)
    return float(np.abs(np.linalg.solve(f, fd) - cx).max())


def frame_t_residual(sd, x: float, t: float = 0.0, h: float = 1e-4) -> float:
    """||F^-1 F_t - Ct||_max with F_t by centered differences."""
    fp = natural_frame(sd, x, t + h)
    fm = natural_frame(sd, x, t - h)
    f = natural_frame(sd, x, t)
    fd = (fp - fm) / (2.0 * h)
    pw = sd.plane_wave() if hasattr(sd, "plane_wave") else sd
    ct = frame_coeff_t(sd.lam, pw.z(x, t), pw.z_x(x, t))
    return float(np.abs(np.linalg.solve(f, fd) - ct).max())


def local_coeff_x(lam, p_rate, q_amp, m):
    """x-coefficient of the local-frame system at curvature data (p, q, m)."""
    return np.array(
        [[1j * p_rate / 3.0 + lam, -1j * q_amp, m],
         [0.0, -2j * p_rate / 3.0, q_amp],
         [1.0, 0.0, 1j * p_rate / 3.0 - lam]],
        dtype=complex,
    )


def _phase_factor(theta):
    """Diagonal of exp(-theta * PHASE_J) for scalar or array theta."""
    theta = np.asarray(theta)
    return np.stack(
        [np.exp(-1j * theta / 3.0),
         np.exp(2j * theta / 3.0),
         np.exp(-1j * theta / 3.0)],
        axis=-1,
    )


def local_frame(sd, x: float, t: float = 0.0):
    """Local frame F_hat = F exp(-theta J) with theta = arg z = -(k x - Lambda t)."""
    theta = -(sd.k * x - sd.Lambda * t)
    return natural_frame(sd, x, t) * _phase_factor(theta)[None, :]


def local_frame_x_residual(sd, x: float, t: float = 0.0, h: float = 1e-4) -> float:
    """Residual of the local frame against its coefficient matrix (p=k, q=a, m=b)."""
    fp = local_frame(sd, x + h, t)
    fm = local_frame(sd, x - h, t)
    f = local_frame(sd, x, t)
    fd = (fp - fm) / (2.0 * h)
    cx = local_coeff_x(sd.lam, sd.k, sd.a, sd.b)
    return float(np.abs(np.linalg.solve(f, fd) - cx).max())


def local_frame_from_natural(field: FrameField) -> FrameField:
    """Undo the natural-frame phase: F_hat = F exp(-theta J).

    Uses the stored closed-form theta when available; otherwise unwraps
    arg z along the grid, which fails where the curvature vanishes.
    """
    if field.theta is not None:
        theta = field.theta
    else:
        absz = np.abs(field.z)
        if absz.min() < 1e-12:
            raise ValueError("phase undefined: |z| vanishes on the grid")
        theta = np.unwrap(np.angle(field.z))
    frames_hat = field.frames * _phase_factor(theta)[:, None, :]
    return FrameField(
        xs=field.xs, t=field.t, lam=field.lam, frames=frames_hat,
        provenance=field.provenance + "+local",
        z=np.abs(field.z).astype(complex), m=field.m,
        theta=np.zeros_like(field.xs),
    )


def gamma_xx_grid(sd, xs, t: float = 0.0):
    """Analytic second x-derivative of the curve lift gamma = F e1.

    Phi_xx = (U_x + U^2) Phi, so gamma_xx is the first column of
    F (U_x + U^2)^dagger; no finite differences involved.
    """
    xs = np.asarray(xs, dtype=float)
    pw = sd.plane_wave() if hasattr(sd, "plane_wave") else sd
    frames = natural_frame_grid(sd, xs, t)
    out = np.empty((len(xs), 3), dtype=complex)
    for i, x in enumerate(xs):
        z = pw.z(x, t)
        z_x = pw.z_x(x, t)
        u = lax_u(sd.lam, z, sd.b)
        u_x = np.zeros((3, 3), dtype=complex)
        u_x[1, 0] = 1j * z_x
        u_x[2, 1] = np.conj(z_x)
        w = u_x + u @ u
        out[i] = (frames[i] @ w.conj().T)[:, 0]
    return out


def flow_identity_residual(sd, xs, t: float = 0.0) -> float:
    """Per-sample defect of i(gamma_xx - <gamma_xx, gamma_x> i gamma) = i z b.

    Valid at lam = 0, where gamma_x = v and the projection of gamma_xx onto
    the frame reproduces the binormal-style flow field exactly.
    """
    from .herm3 import herm

    if abs(sd.lam) > 0:
        raise ValueError("flow identity is stated at lam = 0")
    xs = np.asarray(xs, dtype=float)
    field = natural_frame_field(sd, xs, t)
    gamma = field.gamma
    bvec = field.b
    vvec = field.v
    gamma_x = vvec  # lam = 0
    gamma_xx = gamma_xx_grid(sd, xs, t)
    coeff = herm(gamma_xx, gamma_x)
    lhs = 1j * (gamma_xx - coeff[:, None] * 1j * gamma)
    rhs = 1j * field.z[:, None] * bvec
    return float(np.abs(lhs - rhs).max())
