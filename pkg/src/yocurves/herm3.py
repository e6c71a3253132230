"""Linear algebra over C^3 carrying the signature-(2,1) Hermitian form.

The form is <z, w> = i(z3*conj(w1) - z1*conj(w3)) + z2*conj(w2).  Its Gram
matrix J satisfies <z, w> = w^dagger J z, so "A preserves the form" reads
A^dagger J A = J.  Frame triples (gamma, b, v) are stored as the columns of
3x3 matrices throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

DEFAULT_TOL = 1e-10

# Gram matrix: J13 = i, J31 = -i, J22 = 1; signature (2, 1).
FORM_GRAM = np.array(
    [[0.0, 0.0, 1j],
     [0.0, 1.0, 0.0],
     [-1j, 0.0, 0.0]],
    dtype=complex,
)


def herm(z, w):
    """Indefinite Hermitian product <z, w>; linear in z, conjugate-linear in w.

    Accepts arrays of shape (..., 3) and broadcasts over leading axes.
    """
    z = np.asarray(z)
    wc = np.conj(np.asarray(w))
    return 1j * (z[..., 2] * wc[..., 0] - z[..., 0] * wc[..., 2]) + z[..., 1] * wc[..., 1]


def det3(mat):
    """Determinant of a 3x3 matrix by cofactor expansion (no pivoting)."""
    m = np.asarray(mat)
    return (
        m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
        - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
        + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
    )


def is_null(v, tol: float = DEFAULT_TOL) -> bool:
    """True iff v is a nonzero null vector, |<v, v>| <= tol.

    Raises ValueError on the zero vector, which is excluded from the null cone.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = np.asarray(v, dtype=complex)
    if not v.any():
        raise ValueError("zero vector: not a point of the null cone")
    return abs(herm(v, v)) <= tol


def is_su21(mat, tol: float = DEFAULT_TOL) -> bool:
    """True iff mat preserves the form (M^dagger J M = J) and det M = 1."""
    m = np.asarray(mat, dtype=complex)
    form_defect = np.abs(m.conj().T @ FORM_GRAM @ m - FORM_GRAM).max()
    return form_defect <= tol and abs(det3(m) - 1.0) <= tol


@dataclass(frozen=True)
class FrameReport:
    """Residuals of the unimodular-null-frame relations, with a pass flag."""

    residuals: dict
    tol: float

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol

    def __bool__(self) -> bool:
        return self.passed

    def failures(self):
        return {k: v for k, v in self.residuals.items() if v > self.tol}


def frame_report(gamma, b, v, tol: float = DEFAULT_TOL) -> FrameReport:
    """Check (gamma, b, v) against the unimodular null frame relations.

    Relations: gamma and v null, b unit spacelike and orthogonal to both,
    <gamma, v> = -i, <v, gamma> = i, det(gamma, b, v) = 1.
    """
    gamma = np.asarray(gamma, dtype=complex)
    b = np.asarray(b, dtype=complex)
    v = np.asarray(v, dtype=complex)
    residuals = {
        "gamma_null": abs(herm(gamma, gamma)),
        "v_null": abs(herm(v, v)),
        "b_gamma": abs(herm(b, gamma)),
        "b_v": abs(herm(b, v)),
        "gamma_v": abs(herm(gamma, v) + 1j),
        "v_gamma": abs(herm(v, gamma) - 1j),
        "b_unit": abs(herm(b, b) - 1.0),
        "det": abs(det3(np.column_stack([gamma, b, v])) - 1.0),
    }
    return FrameReport(residuals=residuals, tol=tol)


def frame_report_matrix(frame, tol: float = DEFAULT_TOL) -> FrameReport:
    """frame_report applied to the columns of a 3x3 frame matrix."""
    f = np.asarray(frame, dtype=complex)
    return frame_report(f[:, 0], f[:, 1], f[:, 2], tol=tol)


def change_of_frame(frame, nu: complex, mu: complex = 0.0, lam: float = 0.0):
    """Transform a unimodular null frame by the parameters (nu, mu, lam).

    New columns: gamma' = nu*gamma, b' = (conj(nu)/nu)(b + mu*gamma),
    v' = conj(nu)^-1 [v - i*conj(mu)*b - (lam + i|mu|^2/2)*gamma].
    lam must be real for the frame relations to be preserved.
    """
    if nu == 0:
        raise ValueError("nu must be nonzero")
    f = np.asarray(frame, dtype=complex)
    gamma, b, v = f[:, 0], f[:, 1], f[:, 2]
    nu = complex(nu)
    mu = complex(mu)
    new_gamma = nu * gamma
    new_b = (nu.conjugate() / nu) * (b + mu * gamma)
    new_v = (v - 1j * mu.conjugate() * b - (lam + 0.5j * abs(mu) ** 2) * gamma) / nu.conjugate()
    return np.column_stack([new_gamma, new_b, new_v])


def random_su21_algebra(rng, scale: float = 1.0):
    """Random element of the Lie algebra: X = J*K with K anti-Hermitian, tr X = 0.

    Normalized to Frobenius norm `scale` so the exponentials stay moderate.
    """
    m = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    k = m - m.conj().T
    x = FORM_GRAM @ k
    x -= (np.trace(x) / 3.0) * np.eye(3)  # trace of J*K is imaginary, so this stays in the algebra
    return (scale / np.linalg.norm(x)) * x


def random_su21(rng, scale: float = 1.0):
    """Random matrix preserving the form with det 1, via the exponential map."""
    return expm(random_su21_algebra(rng, scale))


def random_null_vector(rng, scale: float = 1.0):
    """Random point of the null cone, generated as F @ e1 for random F in the group."""
    return random_su21(rng, scale)[:, 0]
