"""Fourier differentiation and antidifferentiation on uniform periodic grids."""

from __future__ import annotations

import numpy as np


def wavenumbers(n: int, period: float = 2.0 * np.pi):
    """Angular wavenumbers matching numpy's FFT layout."""
    return 2.0 * np.pi * np.fft.fftfreq(n, d=period / n)


def deriv(samples, order: int = 1, period: float = 2.0 * np.pi, axis: int = -1):
    """Spectral derivative of periodic samples along the given axis."""
    samples = np.asarray(samples)
    n = samples.shape[axis]
    kx = wavenumbers(n, period)
    if order % 2 == 1 and n % 2 == 0:
        kx[n // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
    mult = (1j * kx) ** order
    shape = [1] * samples.ndim
    shape[axis] = n
    out = np.fft.ifft(np.fft.fft(samples, axis=axis) * mult.reshape(shape), axis=axis)
    if np.isrealobj(samples):
        return out.real
    return out


def antideriv(samples, period: float = 2.0 * np.pi, mean_rtol: float = 1e-10,
              name: str = "integrand"):
    """Zero-mean periodic antiderivative (Fourier division by ik, zero mode dropped).

    Raises ValueError when the integrand has a non-negligible mean, since no
    periodic antiderivative exists in that case.
    """
    samples = np.asarray(samples)
    n = samples.shape[-1]
    fhat = np.fft.fft(samples, axis=-1)
    mean = np.abs(fhat[..., 0]).max() / n
    scale = max(1.0, float(np.abs(samples).max()) if samples.size else 0.0)
    if mean > mean_rtol * scale:
        raise ValueError(f"{name} has nonzero mean ({mean:.3e}); no periodic antiderivative")
    kx = wavenumbers(n, period)
    mult = np.zeros(n, dtype=complex)
    mult[1:] = 1.0 / (1j * kx[1:])
    out = np.fft.ifft(fhat * mult, axis=-1)
    if np.isrealobj(samples):
        return out.real
    return out
