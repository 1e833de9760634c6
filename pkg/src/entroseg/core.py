"""Shared signal type, validation errors and the seeded random source.

Every random draw in the package goes through :func:`rng`, which wraps
numpy's PCG64 bit generator. Normal variates come from numpy's ziggurat
sampler, so a given seed yields the same stream everywhere in the package.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SignalError(ValueError):
    """Base class for rejected inputs."""


class LengthMismatch(SignalError):
    pass


class NonMonotonicAbscissa(SignalError):
    pass


class NonFiniteValue(SignalError):
    pass


class TooFewPoints(SignalError):
    pass


class OutOfDomain(SignalError):
    pass


def rng(seed: int | np.random.SeedSequence | None = 0) -> np.random.Generator:
    """Return a PCG64 generator for ``seed`` (an unsigned 64-bit integer)."""
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    if seed is None:
        seed = 0
    if seed < 0 or seed >= 2**64:
        raise SignalError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def trial_seeds(seed: int, trials: int) -> list[np.random.SeedSequence]:
    """Independent per-trial seed sequences derived from ``(seed, trial)``.

    Trial ``i`` always receives the same stream regardless of how many
    trials are requested or in which order they run.
    """
    return [np.random.SeedSequence([int(seed), i]) for i in range(trials)]


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Signal:
    """Sampled 1D series with strictly increasing abscissae.

    Build through :func:`make_signal`; the arrays are read-only.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _frozen(self.x)
        y = _frozen(self.y)
        if x.ndim != 1 or y.ndim != 1:
            raise SignalError("x and y must be one-dimensional")
        if x.size != y.size:
            raise LengthMismatch(f"x has {x.size} samples but y has {y.size}")
        if x.size < 2:
            raise TooFewPoints("a signal needs at least 2 samples")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise NonFiniteValue("signal contains NaN or infinite values")
        if np.any(np.diff(x) <= 0):
            raise NonMonotonicAbscissa("x must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self) -> int:
        return self.x.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Signal):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    __hash__ = None

    def with_y(self, y) -> "Signal":
        return Signal(self.x, y)


def make_signal(x, y) -> Signal:
    """Validate ``x``/``y`` and return a :class:`Signal`.

    Raises
    ------
    LengthMismatch, NonMonotonicAbscissa, NonFiniteValue, TooFewPoints
    """
    return Signal(np.asarray(x, dtype=float), np.asarray(y, dtype=float))


def index_signal(y) -> Signal:
    """Signal sampled at integer positions 0, 1, ..., n-1."""
    y = np.asarray(y, dtype=float)
    return make_signal(np.arange(y.size, dtype=float), y)


def eval_piecewise_test_signal(x: float) -> float:
    """Three-branch affine test function on [-4, 4].

    ``-x`` on [-4, 0], ``x`` on (0, 2) and ``2 + 3x`` on [2, 4].
    """
    if not np.isfinite(x):
        raise NonFiniteValue("x must be finite")
    if x < -4 or x > 4:
        raise OutOfDomain(f"x={x} outside [-4, 4]")
    if x <= 0:
        return -x
    if x < 2:
        return x
    return 2 + 3 * x


def piecewise_test_signal(step: float = 0.2) -> Signal:
    """The 41-sample fixture of the three-branch test function.

    The grid is built from integer multiples of ``step`` so that x=0 and
    x=2 are hit exactly and land on the branches the inequalities assign.
    """
    k = int(round(8 / step))
    x = np.round(-4 + step * np.arange(k + 1), 12)
    y = np.array([eval_piecewise_test_signal(v) for v in x])
    return make_signal(x, y)


def add_gaussian_noise(s: Signal, std: float, seed: int | np.random.SeedSequence = 0) -> Signal:
    """Add i.i.d. zero-mean Gaussian noise of standard deviation ``std``."""
    if not np.isfinite(std):
        raise NonFiniteValue("noise std must be finite")
    if std < 0:
        raise SignalError("noise std must be non-negative")
    if std == 0:
        return s
    eps = rng(seed).standard_normal(len(s)) * std
    return s.with_y(s.y + eps)


def read_signal_csv(source) -> Signal:
    """Read a two-column ``x,y`` CSV (one optional header line).

    ``source`` is a path or an open text stream.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text()
    else:
        text = source.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise TooFewPoints("empty CSV")
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    xs, ys = [], []
    for lineno, row in enumerate(rows, 1):
        if len(row) < 2:
            raise SignalError(f"row {lineno}: expected 2 columns, got {len(row)}")
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except ValueError as exc:
            raise SignalError(f"row {lineno}: {exc}") from None
    return make_signal(xs, ys)


def write_columns_csv(stream, header: tuple[str, ...], *columns) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([repr(float(v)) for v in row])


def write_signal_csv(s: Signal, stream) -> None:
    write_columns_csv(stream, ("x", "y"), s.x, s.y)
