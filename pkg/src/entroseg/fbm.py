"""Fractional Brownian motion synthesis and fractal estimators.

Paths are built from exact fractional Gaussian noise via circulant
embedding (Davies-Harte), with a dense Cholesky factorisation as a
fallback when the embedding is not non-negative definite.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .core import Signal, SignalError, TooFewPoints, make_signal, rng
from .fitting import LineFit, ols_line

CHOLESKY_MAX_N = 4096


class SynthesisFailure(RuntimeError):
    pass


class DegenerateSignal(SignalError):
    pass


class Normalization(enum.Enum):
    UNIT_INTERVAL = "unit_interval"  # t_k = k / n
    UNIT_STEP = "unit_step"  # t_k = k


@dataclass(frozen=True)
class FbmSpec:
    hurst: float
    n: int
    variance_scale: float = 1.0
    seed: int = 0
    normalization: Normalization = Normalization.UNIT_STEP

    def __post_init__(self):
        if not (0 < self.hurst < 1):
            raise SignalError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.n < 2:
            raise TooFewPoints("n must be >= 2")
        if not self.variance_scale > 0:
            raise SignalError("variance_scale must be positive")


@dataclass(frozen=True)
class HurstSchedule:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple((float(h), int(n)) for h, n in self.blocks)
        if not blocks:
            raise SignalError("empty schedule")
        for h, n in blocks:
            if not (0 < h < 1):
                raise SignalError(f"hurst must lie in (0, 1), got {h}")
            if n < 2:
                raise TooFewPoints("every block needs at least 2 samples")
        if sum(n for _, n in blocks) < 4:
            raise TooFewPoints("schedule must total at least 4 samples")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def parse(cls, text: str) -> "HurstSchedule":
        """Parse ``"0.3:64,0.5:64"`` style schedules."""
        blocks = []
        for part in text.split(","):
            h, _, n = part.strip().partition(":")
            if not n:
                raise SignalError(f"bad schedule block {part!r}, expected H:len")
            blocks.append((float(h), int(n)))
        return cls(tuple(blocks))

    @property
    def total(self) -> int:
        return sum(n for _, n in self.blocks)


CANONICAL_SCHEDULE = HurstSchedule(((0.3, 64), (0.5, 64), (0.7, 64), (0.9, 64)))


def fgn_autocovariance(hurst: float, m: int) -> np.ndarray:
    """Autocovariance of unit fractional Gaussian noise at lags 0..m-1."""
    k = np.arange(m, dtype=float)
    h2 = 2 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2 * k ** h2 + np.abs(k - 1) ** h2)


def _fgn(hurst: float, m: int, g: np.random.Generator, method: str = "auto") -> np.ndarray:
    """``m`` samples of unit-variance fractional Gaussian noise.

    ``method`` is ``"auto"`` (circulant embedding, Cholesky when the
    embedding fails), ``"circulant"`` or ``"cholesky"``.
    """
    if m == 0:
        return np.empty(0)
    if m == 1:
        return g.standard_normal(1)
    gamma = fgn_autocovariance(hurst, m + 1)
    row = np.concatenate((gamma[:m + 1], gamma[m - 1:0:-1]))
    lam = np.fft.fft(row).real
    bad = lam.min() < -1e-10 * lam.max()
    if method == "cholesky" or (bad and method == "auto"):
        if m > CHOLESKY_MAX_N:
            raise SynthesisFailure("circulant embedding is not non-negative definite")
        cov = linalg.toeplitz(gamma[:m])
        return linalg.cholesky(cov, lower=True) @ g.standard_normal(m)
    if bad:
        raise SynthesisFailure("circulant embedding is not non-negative definite")
    lam = np.clip(lam, 0.0, None)
    size = row.size
    w = np.sqrt(lam / size) * (g.standard_normal(size) + 1j * g.standard_normal(size))
    return np.fft.fft(w).real[:m]


def _step(n: int, normalization: Normalization) -> float:
    if normalization is Normalization.UNIT_INTERVAL:
        return 1.0 / n
    return 1.0


def gen_fbm(spec: FbmSpec) -> Signal:
    """Sample an fBm path at ``spec.n`` grid points, starting at 0.

    Increments over a lag ``d`` (in grid time) have variance
    ``variance_scale * d ** (2 H)``.
    """
    return _fbm_path(spec.hurst, spec.n, spec.variance_scale, spec.normalization, rng(spec.seed))


def _fbm_path(hurst, n, v, normalization, g):
    dt = _step(n, normalization)
    inc = _fgn(hurst, n - 1, g) * np.sqrt(v) * dt ** hurst
    y = np.concatenate(([0.0], np.cumsum(inc)))
    x = np.arange(n, dtype=float) * dt
    return make_signal(x, y)


def gen_piecewise_fbm(schedule: HurstSchedule, seed=0, variance_scale: float = 1.0) -> Signal:
    """Concatenate independently synthesised fBm blocks.

    Each block lives on its own unit interval (grid step ``1 / len``), so
    its lag-1 increments have standard deviation ``len ** -H``.  Blocks
    after the first contribute ``len`` fresh increments that continue from
    the previous block's last value, so the path has no jump at a joint.
    The abscissa is the global sample index.
    """
    g = rng(seed)
    parts = []
    for b, (h, n) in enumerate(schedule.blocks):
        if b == 0:
            parts.append(_fbm_path(h, n, variance_scale, Normalization.UNIT_INTERVAL, g).y)
        else:
            inc = _fgn(h, n, g) * np.sqrt(variance_scale) * (1.0 / n) ** h
            parts.append(parts[-1][-1] + np.cumsum(inc))
    y = np.concatenate(parts)
    return make_signal(np.arange(y.size, dtype=float), y)


def block_boundaries(schedule: HurstSchedule) -> list[int]:
    """Sample indices where a new block begins (excluding 0)."""
    return list(np.cumsum([n for _, n in schedule.blocks])[:-1])


# ---------------------------------------------------------------------------
# estimators


@dataclass(frozen=True, eq=False)
class FractalScan:
    scales: np.ndarray
    counts: np.ndarray
    log_fit: LineFit
    dimension: float
    hurst_est: float


def box_counts(y: np.ndarray, r: int) -> int:
    """Grid boxes of side ``r`` samples covering the graph of ``y``.

    ``y`` is assumed normalised so the graph spans the unit square; each
    column of ``r`` sample intervals is covered from its min to its max,
    the column's right edge sample included so the graph stays connected.
    """
    n = y.size
    eps = r / (n - 1)
    total = 0
    for start in range(0, n - 1, r):
        seg = y[start:start + r + 1]
        total += int(np.floor(seg.max() / eps) - np.floor(seg.min() / eps)) + 1
    return total


def box_counting_dimension(s: Signal, scales=None) -> FractalScan:
    """Box-counting dimension of the graph of ``s``.

    The graph is mapped onto the unit square and covered with square boxes
    of side ``r`` samples for dyadic ``r`` in 1..n/4.  ``D`` is minus the
    slope of ``log C(r)`` against ``log r``; ``hurst_est = 2 - D``.
    """
    y = np.asarray(s.y, dtype=float)
    n = y.size
    if n < 16:
        raise TooFewPoints("box counting needs at least 16 samples")
    span = np.ptp(y)
    if span == 0:
        raise DegenerateSignal("signal has zero range")
    yn = (y - y.min()) / span
    if scales is None:
        scales = 2 ** np.arange(int(np.log2(n / 4)) + 1)
    scales = np.asarray(scales, dtype=int)
    if np.any(np.diff(scales) <= 0) or scales[0] < 1:
        raise SignalError("scales must be positive and strictly increasing")
    counts = np.array([box_counts(yn, int(r)) for r in scales])
    fit = ols_line(np.log(scales), np.log(counts))
    d = float(np.clip(-fit.a, 1.0, 2.0))
    return FractalScan(scales, counts, fit, d, float(np.clip(2.0 - d, 0.0, 1.0)))


DEFAULT_LAGS = (1, 2, 4, 8, 16)


def increment_variances(y, lags=DEFAULT_LAGS) -> np.ndarray:
    """Mean squared increment at each lag (increments have zero mean)."""
    y = np.asarray(y, dtype=float)
    return np.array([np.mean((y[l:] - y[:-l]) ** 2) for l in lags])


def variance_scaling_hurst(s: Signal, lags=DEFAULT_LAGS) -> float:
    """Half the log-log slope of increment variance against lag, in [0, 1]."""
    if len(s) < 64:
        raise TooFewPoints("variance scaling needs at least 64 samples")
    lags = np.asarray(lags)
    v = increment_variances(s.y, lags)
    if np.any(v <= 0):
        raise DegenerateSignal("zero increment variance")
    slope = ols_line(np.log(lags), np.log(v)).a
    return float(np.clip(slope / 2, 0.0, 1.0))
