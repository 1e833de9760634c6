"""Recursive shrinking-window line detection and Hough-space classification.

The detector anchors a window at the first unexplained sample ``A`` and
its far end ``j`` at the last sample.  While the least-squares line on
``[A, j]`` has ``R^2`` below the threshold, ``j`` moves one sample back.
The accepted window becomes a segment, the next window is anchored at
``j`` (the joint sample belongs to both fits) and the scan restarts from
the end of the data.

Each segment then maps one-to-one onto a Hough point (position, length,
slope angle, intercept).  Short segments are singularities (abrupt
changes), long ones homogeneous zones.
"""
from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import SignalError, TooFewPoints, make_signal
from .fitting import LineFit, ols_line


class TooManyLines(SignalError):
    """More than ``max_lines`` segments would be needed.

    ``segments`` holds the capped result, whose last segment absorbs all
    remaining samples.
    """

    def __init__(self, message, segments):
        super().__init__(message)
        self.segments = segments


class EmptyInput(SignalError):
    pass


@dataclass(frozen=True)
class SegmentationConfig:
    rm2: float = 0.998
    max_lines: int = 1000
    min_len: int = 2
    # "left": windows anchored at the first sample, shrunk from the right.
    # "right": the mirrored scan.
    direction: str = "left"

    def __post_init__(self):
        if not (0 < self.rm2 <= 1):
            raise SignalError(f"rm2 must lie in (0, 1], got {self.rm2}")
        if self.min_len < 2:
            raise SignalError("min_len must be >= 2")
        if self.max_lines < 1:
            raise SignalError("max_lines must be >= 1")
        if self.direction not in ("left", "right"):
            raise SignalError(f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class LineSegment:
    start_idx: int
    end_idx: int
    fit: LineFit
    alpha_deg: float
    length_pts: int
    position: float
    # why the window was accepted: "r2", "exact" or "min_len"
    accepted_by: str = "r2"
    iterations: int = 1


@dataclass(frozen=True)
class HoughPoint:
    position: float
    length_pts: int
    alpha_deg: float
    intercept: float
    mean_abs_error: float


class SegmentLabel(enum.Enum):
    HOMOGENEOUS = "homogeneous"
    SINGULARITY = "singularity"


@dataclass(frozen=True)
class TraceStep:
    line: int
    start: int
    j: int
    r2: float
    mean_abs_error: float
    accepted: bool
    accepted_by: str | None = None


@dataclass
class DetectionTrace:
    steps: list = field(default_factory=list)

    def iterations_per_line(self) -> list[int]:
        counts: dict[int, int] = {}
        for s in self.steps:
            counts[s.line] = counts.get(s.line, 0) + 1
        return [counts[k] for k in sorted(counts)]


def slope_angle(a: float) -> float:
    """Slope angle in degrees, ``180/pi * atan(a)``."""
    return math.degrees(math.atan(a))


def _make_segment(x, y, start, end, accepted_by="r2", iterations=1, fit=None):
    if fit is None:
        fit = ols_line(x[start:end + 1], y[start:end + 1])
    return LineSegment(start, end, fit, slope_angle(fit.a), end - start + 1,
                       float(x[end]), accepted_by, iterations)


def _acceptance(fit, width, cfg):
    if fit.mean_abs_error == 0:
        return "exact"
    if fit.r2 >= cfg.rm2:
        return "r2"
    if width <= cfg.min_len:
        return "min_len"
    return None


def _prefix_r2(x, y, A):
    """R^2 of every window [A, j], j >= A, from running sums.

    Only used to screen candidates; decisions are confirmed with an exact
    fit.  Values for one-point windows are meaningless.
    """
    xs = x[A:] - x[A]
    ys = y[A:] - y[A]
    m = np.arange(1, xs.size + 1, dtype=float)
    sx, sy, qxx, qxy, qyy = np.cumsum(np.stack((xs, ys, xs * xs, xs * ys, ys * ys)), axis=1)
    sxx = qxx - sx * sx / m
    sxy = qxy - sx * sy / m
    syy = qyy - sy * sy / m
    with np.errstate(divide="ignore", invalid="ignore"):
        r2 = np.where((sxx > 0) & (syy > 0), sxy * sxy / (sxx * syy), 0.0)
    # near-exact windows might be accepted by the exact-fit escape
    maybe_exact = (syy <= 1e-12 * np.maximum(qyy, 1e-300)) | (r2 > 1 - 1e-9)
    return r2, maybe_exact


def _scan_window(x, y, A, cfg):
    """Largest accepted window end for anchor ``A``: (j, how, iterations, fit)."""
    n = x.size
    r2, maybe_exact = _prefix_r2(x, y, A)
    floor_j = min(A + cfg.min_len - 1, n - 1)
    candidates = np.flatnonzero((r2 >= cfg.rm2 - 1e-9) | maybe_exact) + A
    for j in candidates[::-1]:
        if j <= floor_j:
            break
        fit = ols_line(x[A:j + 1], y[A:j + 1])
        how = _acceptance(fit, j - A + 1, cfg)
        if how is not None:
            return int(j), how, n - j, fit
    j = floor_j
    fit = ols_line(x[A:j + 1], y[A:j + 1])
    return j, _acceptance(fit, j - A + 1, cfg) or "min_len", n - j, fit


def _scan(x, y, cfg: SegmentationConfig, trace: DetectionTrace | None):
    """Left-anchored scan; returns (ranges, capped) with ranges as
    (start, end, accepted_by, iterations, fit) tuples."""
    n = x.size
    ranges = []
    A = 0
    while A < n - 1:
        line = len(ranges)
        if line == cfg.max_lines - 1:
            fit = ols_line(x[A:], y[A:])
            if not (fit.r2 >= cfg.rm2 or fit.mean_abs_error == 0):
                ranges.append((A, n - 1, "cap", 1, fit))
                return ranges, True
        if trace is None:
            j, how, its, fit = _scan_window(x, y, A, cfg)
        else:
            # reference path: one exact fit per shrink step, every step logged
            j = n - 1
            its = 0
            while True:
                its += 1
                fit = ols_line(x[A:j + 1], y[A:j + 1])
                how = _acceptance(fit, j - A + 1, cfg)
                trace.steps.append(TraceStep(line, A, j, fit.r2, fit.mean_abs_error,
                                             how is not None, how))
                if how is not None:
                    break
                j -= 1
        ranges.append((A, j, how, its, fit))
        A = j
    return ranges, False


def _run(x, y, cfg, trace=None):
    s = make_signal(x, y)
    x, y = s.x, s.y
    n = x.size
    if n < 2:
        raise TooFewPoints("need at least 2 samples")
    if cfg.direction == "left":
        ranges, capped = _scan(x, y, cfg, trace)
    else:
        ranges, capped = _scan(-x[::-1], y[::-1], cfg, trace)
        # fits were made on the mirrored data, so they are redone below
        ranges = [(n - 1 - e, n - 1 - s_, how, its, None)
                  for s_, e, how, its, _ in reversed(ranges)]
        if trace is not None:
            trace.steps = [TraceStep(t.line, n - 1 - t.start, n - 1 - t.j, t.r2,
                                     t.mean_abs_error, t.accepted, t.accepted_by)
                           for t in trace.steps]
    segs = [_make_segment(x, y, *r) for r in ranges]
    if capped:
        raise TooManyLines(f"more than {cfg.max_lines} lines needed", segs)
    return segs


def segment(x, y, cfg: SegmentationConfig | None = None) -> list[LineSegment]:
    """Detect contiguous line segments in ``(x, y)``.

    Consecutive segments share their joint sample:
    ``segs[i+1].start_idx == segs[i].end_idx``.
    """
    return _run(x, y, cfg or SegmentationConfig())


def detection_trace(x, y, cfg: SegmentationConfig | None = None) -> DetectionTrace:
    """Per-iteration log of the scan behind :func:`segment`.

    On a :class:`TooManyLines` error the trace up to the cap is still
    attached to the exception as ``exc.trace``.
    """
    trace = DetectionTrace()
    try:
        _run(x, y, cfg or SegmentationConfig(), trace)
    except TooManyLines as exc:
        exc.trace = trace
        raise
    return trace


def to_hough(segments) -> list[HoughPoint]:
    if not segments:
        raise EmptyInput("no segments")
    return [HoughPoint(s.position, s.length_pts, s.alpha_deg, s.fit.b, s.fit.mean_abs_error)
            for s in segments]


def classify(points, short_frac: float = 0.25) -> list[tuple[HoughPoint, SegmentLabel]]:
    """Label each Hough point.

    A point is a singularity when its length is at most 2 samples or below
    ``short_frac`` times the median length; otherwise it is homogeneous.
    """
    if not points:
        raise EmptyInput("no points")
    if not (0 < short_frac < 1):
        raise SignalError("short_frac must lie in (0, 1)")
    lengths = np.array([p.length_pts for p in points])
    cut = short_frac * float(np.median(lengths))
    out = []
    for p in points:
        short = p.length_pts <= 2 or p.length_pts < cut
        out.append((p, SegmentLabel.SINGULARITY if short else SegmentLabel.HOMOGENEOUS))
    return out


def breakpoints(segments) -> list[int]:
    """Internal boundary indices (joint samples)."""
    return [s.end_idx for s in segments[:-1]]


def report(segments, labels, cfg: SegmentationConfig, **extra) -> dict:
    """JSON-ready report of a segmentation run."""
    rows = []
    for s, (_, lab) in zip(segments, labels):
        rows.append({
            "start": s.start_idx, "end": s.end_idx, "a": s.fit.a, "b": s.fit.b,
            "r2": s.fit.r2, "error": s.fit.mean_abs_error, "alpha_deg": s.alpha_deg,
            "length": s.length_pts, "position": s.position, "label": lab.value,
        })
    conf = asdict(cfg)
    conf.update(extra)
    return {"segments": rows, "config": conf}
