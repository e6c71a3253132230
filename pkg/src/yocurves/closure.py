"""Closure conditions: the spectral cubic, admissible wavenumber windows,
and the solver mapping (p, q, k, lambda) to closed-curve data.

A generated curve of period L = 2*pi closes smoothly exactly when the three
real exponents m_j satisfy e^{i m_j L} = omega * e^{i k L / 3} for a common
cube root of unity omega.  That holds iff m_j = (k + integer lattice)/3 with
the lattice gaps encoded by two positive integers (p, q), and k confined to
one of two open windows per (p, q).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .yo_core import PlaneWave

TWO_PI = 2.0 * math.pi

BOUNDARY_MARGIN = 1e-12     # "strictly inside" an admissible window
DEGENERATE_K_GAP = 1e-9     # |k - m_j| below this: amplitude a ~ 0


class InadmissibleK(ValueError):
    """k lies outside both admissible windows for the given (p, q)."""


class DegenerateSpectrumWarning(UserWarning):
    """Roots nearly collide or k nearly hits a root (a ~ 0)."""


def cubic_roots(a: float, b: float, k: float, lam: float = 0.0):
    """Roots of the spectral cubic mu^3 - k mu^2 + (b+lam^2) mu - k(b+lam^2) + a^2.

    Solved as companion-matrix eigenvalues with one Newton polish per root.
    Roots are sorted by real part; imaginary parts below 1e-8 * scale are
    zeroed so that real spectra come back exactly real.
    """
    if a <= 0:
        raise ValueError("amplitude a must be positive")
    c2 = -k
    c1 = b + lam * lam
    c0 = a * a - k * (b + lam * lam)
    roots = np.roots([1.0, c2, c1, c0]).astype(complex)
    # Newton polish: robust near double roots where the eigensolver loses digits
    f = ((roots + c2) * roots + c1) * roots + c0
    fp = (3.0 * roots + 2.0 * c2) * roots + c1
    ok = np.abs(fp) > 1e-300
    roots[ok] -= f[ok] / fp[ok]
    scale = max(1.0, abs(c2), abs(c1), abs(c0))
    tiny = np.abs(roots.imag) <= 1e-8 * scale
    roots[tiny] = roots[tiny].real
    return roots[np.argsort(roots.real)]


def nu_of_mu(mu: float, k: float, Lambda: float, lam: float = 0.0) -> float:
    """Temporal exponent paired with a spatial exponent mu."""
    return mu * mu - k * k - Lambda + (2.0 / 3.0) * lam * lam


def admissible_k_ranges(p: int, q: int):
    """The two open k-windows for positive integers (p, q).

    Returns ((inner_lo, inner_hi), (outer_lo, inf)).  The inner window has
    width 3p/2 and is always nonempty.
    """
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive integers")
    inner = (-(2 * p + q) / 2.0, (p - q) / 2.0)
    outer = ((p + 2 * q) / 2.0, math.inf)
    return inner, outer


@dataclass(frozen=True)
class WaveSpectrum:
    """Plane-wave data with resolved exponents, ready for frame construction."""

    a: float
    b: float
    k: float
    lam: float
    Lambda: float
    m: tuple
    n: tuple

    def plane_wave(self) -> PlaneWave:
        return PlaneWave(self.a, self.b, self.k, self.lam)


@dataclass(frozen=True)
class ClosureSolution:
    """Fully resolved closed-curve datum for integers (p, q) and admissible k.

    The stored omega = e^{2 pi i eps / 3} multiplies the translation phase:
    e^{i m_j L} = omega * e^{i k L / 3}.  The local-frame period multiplier
    is its conjugate.
    """

    p: int
    q: int
    k: float
    lam: float
    case: str            # "inner" or "outer"
    m: tuple             # ascending roots (m1, m2, m3)
    n: tuple             # paired temporal exponents
    a: float
    b: float
    Lambda: float
    eps: int
    omega: complex
    degenerate: bool = False

    def plane_wave(self) -> PlaneWave:
        return PlaneWave(self.a, self.b, self.k, self.lam)

    def spectrum(self) -> WaveSpectrum:
        return WaveSpectrum(self.a, self.b, self.k, self.lam, self.Lambda, self.m, self.n)


def closure_from_pq(p: int, q: int, k: float, lam: float = 0.0) -> ClosureSolution:
    """Resolve (p, q, k, lambda) into a ClosureSolution, or reject k.

    Raises InadmissibleK when k is outside both open windows (boundaries
    excluded: the amplitude vanishes there).  Attaches a degeneracy warning
    when k comes within 1e-9 of a root, where the curve collapses toward a
    multiply covered circle.
    """
    inner, outer = admissible_k_ranges(p, q)
    if k - inner[0] > BOUNDARY_MARGIN and inner[1] - k > BOUNDARY_MARGIN:
        case = "inner"
    elif k - outer[0] > BOUNDARY_MARGIN:
        case = "outer"
    else:
        raise InadmissibleK(
            f"k={k:g} is not admissible for (p, q)=({p}, {q}): "
            f"need {inner[0]:g} < k < {inner[1]:g} or k > {outer[0]:g}"
        )
    m1 = (-2 * p - q + k) / 3.0
    m2 = (p - q + k) / 3.0
    m3 = (p + 2 * q + k) / 3.0
    if case == "inner":
        assert m1 < k < m2 < m3
    else:
        assert m1 < m2 < m3 < k
    a2 = (k - m1) * (k - m2) * (k - m3)
    assert a2 > 0
    a = math.sqrt(a2)
    degenerate = min(abs(k - m1), abs(k - m2), abs(k - m3)) < DEGENERATE_K_GAP
    if degenerate:
        warnings.warn(
            f"degenerate: a ~ 0 (a={a:.3e}); curve approaches a multiply covered circle",
            DegenerateSpectrumWarning,
        )
    b = m1 * m2 + m1 * m3 + m2 * m3 - lam * lam
    Lambda = -b - k * k
    n = tuple(nu_of_mu(mj, k, Lambda, lam) for mj in (m1, m2, m3))
    eps = (p - q) % 3
    omega = cmath.exp(2j * math.pi * eps / 3.0)
    for mj in (m1, m2, m3):
        resid = abs((mj * mj + b + lam * lam) * (mj - k) + a2)
        scale = max(1.0, abs(k), abs(b + lam * lam), a2)
        assert resid <= 1e-12 * scale
        lattice = 3.0 * mj - k
        assert abs(lattice - round(lattice)) < 1e-9
        assert round(lattice) % 3 == eps
    return ClosureSolution(
        p=p, q=q, k=k, lam=lam, case=case,
        m=(m1, m2, m3), n=n, a=a, b=b, Lambda=Lambda,
        eps=eps, omega=omega, degenerate=degenerate,
    )


def closure_residual(sol, L: float = TWO_PI) -> float:
    """max_j |e^{i m_j L} - omega e^{i k L / 3}|.

    Zero exactly when the three exponents sit on the (p, q) lattice; the
    value is independent of lambda, which never enters the phases.
    """
    target = sol.omega * cmath.exp(1j * sol.k * L / 3.0)
    return max(abs(cmath.exp(1j * mj * L) - target) for mj in sol.m)


def wave_spectrum(a: float, b: float, k: float, lam: float = 0.0) -> WaveSpectrum:
    """Resolve raw plane-wave parameters into exponent data via the cubic.

    Rejects complex spectra; warns when roots nearly collide.  This is the
    entry point for waves that do NOT satisfy the closure lattice (e.g.
    perturbed-amplitude negative controls).
    """
    roots = cubic_roots(a, b, k, lam)
    scale = max(1.0, abs(k), abs(b + lam * lam), a * a)
    if np.abs(roots.imag).max() > 1e-8 * scale:
        raise ValueError("no real spectrum: the cubic has complex roots")
    m = np.sort(roots.real)
    gaps = np.diff(m)
    if gaps.min() < 1e-6 * scale:
        warnings.warn("near-degenerate spectrum: roots nearly collide",
                      DegenerateSpectrumWarning)
    Lambda = -b - k * k
    n = tuple(nu_of_mu(mj, k, Lambda, lam) for mj in m)
    return WaveSpectrum(a=a, b=b, k=k, lam=lam, Lambda=Lambda, m=tuple(m), n=n)
