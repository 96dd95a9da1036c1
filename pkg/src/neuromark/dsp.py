"""Signal-processing kernels: Butterworth bandpass, zero-phase filtering,
FFT magnitude spectrum, Welch PSD, and statistical moments.

Band edge conventions (Hz): delta 0.5-4, theta 4-8, alpha 8-13, beta 13-30,
gamma 30-45. Moments use population normalization and non-excess kurtosis
(Gaussian -> 3); degenerate variance yields 0 for both shape statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import signal as _signal

BANDS: dict[str, tuple[float, float]] = {
    "delta": (0.5, 4.0),
    "theta": (4.0, 8.0),
    "alpha": (8.0, 13.0),
    "beta": (13.0, 30.0),
    "gamma": (30.0, 45.0),
}

BAND_ORDER = ("delta", "theta", "alpha", "beta", "gamma")


class SpectrumKind(Enum):
    FFT_MAGNITUDE = "fft_magnitude"
    WELCH_PSD = "welch_psd"


@dataclass(frozen=True)
class IirFilter:
    """Bandpass IIR filter coefficients (order-3 Butterworth -> 7 taps)."""

    b: np.ndarray
    a: np.ndarray
    low_hz: float
    high_hz: float
    fs: float
    order: int

    def frequency_response(self, freqs_hz) -> np.ndarray:
        """Evaluate |H(e^{j 2 pi f / fs})| directly from the coefficients."""
        freqs_hz = np.atleast_1d(np.asarray(freqs_hz, dtype=float))
        z = np.exp(-1j * 2.0 * np.pi * freqs_hz / self.fs)
        num = np.polynomial.polynomial.polyval(z, self.b)
        den = np.polynomial.polynomial.polyval(z, self.a)
        return np.abs(num / den)

    def poles(self) -> np.ndarray:
        return np.roots(self.a)


@dataclass(frozen=True)
class Spectrum:
    frequencies: np.ndarray  # Hz, ascending, DC..Nyquist
    values: np.ndarray  # magnitude or power density, >= 0
    kind: SpectrumKind

    def __post_init__(self):
        if len(self.frequencies) != len(self.values):
            raise ValueError("frequencies and values must have equal length")
        if np.any(np.diff(self.frequencies) <= 0):
            raise ValueError("frequencies must be strictly increasing")


@dataclass(frozen=True)
class Moments:
    mean: float
    std: float
    skewness: float
    kurtosis: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.mean, self.std, self.skewness, self.kurtosis)


def design_butterworth_bandpass(
    order: int, low_hz: float, high_hz: float, fs: float
) -> IirFilter:
    """Design a digital Butterworth bandpass via bilinear transform with
    frequency pre-warping."""
    if not (0 < low_hz < high_hz < fs / 2):
        raise ValueError(
            f"band edges out of range: need 0 < {low_hz} < {high_hz} < {fs / 2}"
        )
    if order < 1:
        raise ValueError("order must be >= 1")
    b, a = _signal.butter(order, [low_hz, high_hz], btype="bandpass", fs=fs)
    filt = IirFilter(
        b=np.asarray(b, dtype=float),
        a=np.asarray(a, dtype=float),
        low_hz=low_hz,
        high_hz=high_hz,
        fs=fs,
        order=order,
    )
    if np.any(np.abs(filt.poles()) >= 1.0):
        raise ValueError("designed filter is unstable")
    return filt


def filtfilt(filt: IirFilter, x) -> np.ndarray:
    """Zero-phase forward-backward filtering with odd-reflection padding of
    length 3 x (number of taps) at both ends."""
    x = np.asarray(x, dtype=float)
    padlen = 3 * max(len(filt.a), len(filt.b))
    if len(x) <= padlen:
        raise ValueError(
            f"sequence too short for padding: need > {padlen} samples, got {len(x)}"
        )
    return _signal.filtfilt(filt.b, filt.a, x, padtype="odd", padlen=padlen)


def fft_magnitude(x, fs: float) -> Spectrum:
    """One-sided magnitude spectrum of the raw (unwindowed) sequence."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        raise ValueError("need at least 2 samples")
    mags = np.abs(np.fft.rfft(x))
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    return Spectrum(frequencies=freqs, values=mags, kind=SpectrumKind.FFT_MAGNITUDE)


def welch_psd(
    x,
    fs: float,
    segment_len: int | None = None,
    overlap_fraction: float = 0.5,
    window: str = "hann",
) -> Spectrum:
    """Welch PSD: mean of windowed periodograms, density normalization
    1/(fs * sum(w^2))."""
    x = np.asarray(x, dtype=float)
    if segment_len is None:
        segment_len = min(256, len(x))
    if segment_len > len(x):
        raise ValueError(
            f"segment_len {segment_len} exceeds signal length {len(x)}"
        )
    if not (0 <= overlap_fraction < 1):
        raise ValueError("overlap_fraction must be in [0, 1)")
    noverlap = int(segment_len * overlap_fraction)
    freqs, psd = _signal.welch(
        x,
        fs=fs,
        window=window,
        nperseg=segment_len,
        noverlap=noverlap,
        detrend=False,
        scaling="density",
    )
    return Spectrum(frequencies=freqs, values=psd, kind=SpectrumKind.WELCH_PSD)


def moments(values) -> Moments:
    """Mean, population std, skewness m3/m2^1.5, and Pearson kurtosis m4/m2^2.

    When the variance is degenerate relative to the mean, skewness and
    kurtosis are defined as 0.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("empty input")
    mean = float(np.mean(v))
    centered = v - mean
    m2 = float(np.mean(centered**2))
    std = float(np.sqrt(m2))
    if m2 < 1e-12 * mean**2 + 1e-24:
        return Moments(mean=mean, std=std, skewness=0.0, kurtosis=0.0)
    m3 = float(np.mean(centered**3))
    m4 = float(np.mean(centered**4))
    return Moments(mean=mean, std=std, skewness=m3 / m2**1.5, kurtosis=m4 / m2**2)
