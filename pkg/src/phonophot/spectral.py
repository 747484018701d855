"""Frequency of the dominant tone in a uniformly sampled complex series."""

import numpy as np
from scipy.optimize import minimize_scalar


def _dtft_power(signal, times, omega):
    return abs(np.sum(signal * np.exp(1j * omega * times))) ** 2


def spectral_peak(times, signal, pad=8):
    """Signed angular frequency ``w`` maximizing ``|sum_j x_j exp(i w t_j)|``.

    A series ``exp(-i W t)`` peaks at ``w = W``, matching the sign
    convention of a wave ``exp(i(k x - W t))``. The coarse peak comes from a
    zero-padded FFT and is refined on the continuous transform within one
    coarse bin.
    """
    times = np.asarray(times, dtype=float)
    signal = np.asarray(signal, dtype=complex)
    n = times.size
    if n < 4:
        raise ValueError("need at least 4 samples")
    dt = times[1] - times[0]
    if not np.allclose(np.diff(times), dt, rtol=1e-9, atol=0.0):
        raise ValueError("samples must be uniformly spaced")
    m = pad * n
    # ifft evaluates sum_j x_j exp(+2 pi i j q / m)
    power = np.abs(np.fft.ifft(signal, n=m)) ** 2
    q = int(np.argmax(power))
    freqs = 2.0 * np.pi * np.fft.fftfreq(m, d=dt)
    w0 = freqs[q]
    dw = 2.0 * np.pi / (m * dt)
    centred = signal * np.exp(1j * w0 * times)
    res = minimize_scalar(
        lambda x: -_dtft_power(centred, times, x),
        bounds=(-dw, dw),
        method="bounded",
        options={"xatol": 1e-12 * max(abs(w0), dw)},
    )
    return float(w0 + res.x)
