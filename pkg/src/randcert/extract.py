"""Bit extraction from photon time tags via least-significant-digit parity,
plus the analytic bias estimate for a given interarrival density.

The parity of an integer interarrival time equals the parity of its least
significant decimal digit, so extraction is a mod-2 after an optional
integer divisor that models coarser timing resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .bitstream import BitSequence
from .errors import DataError, FormatError, NumericError

TIMESTAMPS = "timestamps"
INTERARRIVALS = "interarrivals"


@dataclass(frozen=True)
class TimeTagSeries:
    values: np.ndarray  # int64, non-negative
    unit: str  # e.g. "ps"; metadata only
    kind: str  # "timestamps" or "interarrivals"

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.int64)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        if self.kind not in (TIMESTAMPS, INTERARRIVALS):
            raise ValueError(f"kind must be '{TIMESTAMPS}' or '{INTERARRIVALS}'")
        if vals.size and vals.min() < 0:
            idx = int(np.argmax(vals < 0))
            raise DataError(f"negative time value at index {idx}", index=idx)
        if self.kind == TIMESTAMPS and vals.size >= 2:
            diffs = np.diff(vals)
            if (diffs < 0).any():
                idx = int(np.argmax(diffs < 0)) + 1
                raise DataError(
                    f"timestamps decrease at index {idx} "
                    f"({vals[idx - 1]} -> {vals[idx]})",
                    index=idx,
                )

    def __len__(self) -> int:
        return int(self.values.size)


def interarrivals(series: TimeTagSeries) -> TimeTagSeries:
    """Difference consecutive timestamps; length drops by one."""
    if series.kind != TIMESTAMPS:
        raise ValueError("interarrivals() expects a timestamps series")
    if len(series) < 2:
        raise DataError("need at least two timestamps to difference")
    return TimeTagSeries(np.diff(series.values), series.unit, INTERARRIVALS)


def timetags_to_bits(series: TimeTagSeries, divisor: int = 1) -> BitSequence:
    """Parity extraction: bit = floor(value / divisor) mod 2 (even -> 0)."""
    if series.kind != INTERARRIVALS:
        raise ValueError("timetags_to_bits() expects interarrivals; difference first")
    if divisor < 1:
        raise ValueError(f"divisor must be a positive integer, got {divisor}")
    bits = ((series.values // divisor) & 1).astype(np.uint8)
    return BitSequence(np.packbits(bits).tobytes(), int(bits.size))


def load_timetags_text(path, kind: str, unit: str = "") -> TimeTagSeries:
    """One tag per line; digit groups may be separated by spaces (e.g.
    "592 342 ps"); a trailing non-numeric unit token is ignored."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tokens = line.split()
            if not tokens:
                continue
            digits = ""
            rest = []
            for pos, tok in enumerate(tokens):
                if tok.isdigit() and not rest:
                    digits += tok
                else:
                    rest = tokens[pos:]
                    break
            if not digits:
                raise FormatError(f"line {lineno}: no number found in {line.strip()!r}")
            if any(tok.isdigit() for tok in rest):
                raise FormatError(f"line {lineno}: number after unit token in {line.strip()!r}")
            values.append(int(digits))
    return TimeTagSeries(np.asarray(values, dtype=np.int64), unit, kind)


def load_timetags_binary(path, kind: str, unit: str = "") -> TimeTagSeries:
    """64-bit little-endian unsigned integers."""
    raw = np.fromfile(path, dtype="<u8")
    if raw.size and raw.max() > np.iinfo(np.int64).max:
        raise FormatError("time value exceeds signed 64-bit range")
    return TimeTagSeries(raw.astype(np.int64), unit, kind)


def write_timetags_text(series: TimeTagSeries, path) -> None:
    with open(path, "w") as fh:
        for v in series.values:
            fh.write(f"{int(v)}\n")


def write_timetags_binary(series: TimeTagSeries, path) -> None:
    series.values.astype("<u8").tofile(path)


@dataclass(frozen=True)
class DensitySpec:
    """A probability density on (a, b), with optional analytic derivative."""

    a: float
    b: float
    density: Callable[[float], float]
    derivative: Callable[[float], float] | None = None

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError("support interval must have b > a")
        mass, _ = quad(self.density, self.a, self.b, limit=200)
        if abs(mass - 1.0) > 1e-8:
            raise ValueError(f"density integrates to {mass}, not 1")

    def ddx(self, x: float) -> float:
        if self.derivative is not None:
            return self.derivative(x)
        h = (self.b - self.a) * 1e-6
        return (self.density(x + h) - self.density(x - h)) / (2.0 * h)


def parity_bias_estimate(density: DensitySpec, L: int) -> tuple[float, float]:
    """Odd-parity mass over a 2L-bin grid of (a, b).

    Returns (exact_odd, approx_odd): the exact odd-bin mass by adaptive
    quadrature, and the left-sum approximation
    1/2 + (1/2) * sum rho'(x_{2i}) * ((b-a)/2L)^2.
    """
    if L < 1:
        raise ValueError(f"half bin count L must be >= 1, got {L}")
    a, b = density.a, density.b
    h = (b - a) / (2 * L)
    exact = 0.0
    for i in range(L):
        lo = a + (2 * i + 1) * h
        hi = a + (2 * i + 2) * h
        mass, err = quad(density.density, lo, hi)
        if not np.isfinite(mass) or err > 1e-9 + 1e-6 * abs(mass):
            raise NumericError(f"quadrature failed on bin ({lo}, {hi}): {mass} +/- {err}")
        exact += mass
    approx = 0.5 + 0.5 * h * h * sum(density.ddx(a + 2 * i * h) for i in range(L))
    return exact, approx
