"""SVG figures for the CLI. Text is kept as text and no external assets are
referenced, so each file stands alone."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .segmentation import SegmentLabel  # noqa: E402

plt.rcParams["svg.fonttype"] = "none"


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def _hough_axes(ax, hough, labels=None, color_by="alpha"):
    pos = [p.position for p in hough]
    length = [p.length_pts for p in hough]
    c = [p.alpha_deg if color_by == "alpha" else p.mean_abs_error for p in hough]
    sc = ax.scatter(pos, length, c=c, cmap="viridis", s=40, zorder=3)
    if labels is not None:
        for p, lab in zip(hough, labels):
            if lab is SegmentLabel.SINGULARITY:
                ax.scatter([p.position], [p.length_pts], s=120, facecolors="none",
                           edgecolors="red", zorder=4)
    ax.set_xlabel("position")
    ax.set_ylabel("length (samples)")
    ax.figure.colorbar(sc, ax=ax, label="slope angle (deg)" if color_by == "alpha" else "mean |error|")


def plot_segments(x, y, segments, hough, labels, path, title=""):
    """Signal with detected lines, next to the Hough scatter."""
    fig, (a1, a2) = plt.subplots(1, 2, figsize=(11, 4))
    a1.plot(x, y, "o", ms=3, color="0.3")
    colors = plt.cm.tab10(np.arange(len(segments)) % 10)
    for s, col in zip(segments, colors):
        xs = np.asarray(x[s.start_idx:s.end_idx + 1])
        a1.plot(xs, s.fit.a * xs + s.fit.b, "-", color=col, lw=2)
    a1.set_xlabel("x")
    a1.set_ylabel("y")
    a1.set_title(title or f"{len(segments)} detected lines")
    _hough_axes(a2, hough, labels)
    a2.set_title("Hough parameters")
    _save(fig, path)


def plot_entropy(x, y, h, path):
    fig, (a1, a2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    a1.plot(x, y, "-", lw=1)
    a1.set_ylabel("signal")
    a2.plot(x, h, "-", lw=1.5)
    k = np.arange(h.size, dtype=float)
    slope, icpt = np.polyfit(k, h, 1)
    a2.plot(x, slope * k + icpt, "--", lw=1, label=f"linear fit, slope {slope:.4g} / sample")
    a2.set_ylabel("entropy")
    a2.set_xlabel("x")
    a2.legend()
    _save(fig, path)


def plot_sweep(result, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r.noise_std for r in result.rows if r.optimal_rm2 is not None]
    ys = [r.optimal_rm2 for r in result.rows if r.optimal_rm2 is not None]
    ax.plot(xs, ys, "o-")
    for r in result.rows:
        if r.optimal_rm2 is None:
            ax.axvline(r.noise_std, color="red", ls=":", lw=1)
    ax.set_xlabel("noise std")
    ax.set_ylabel("optimal R^2")
    ax.set_title(f"{result.target_lines} lines, {result.trials} trials (dotted: none)")
    _save(fig, path)


def plot_tangent(study, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    hs = np.array([s[0] for s in study.samples])
    ts = np.array([s[1] for s in study.samples])
    ax.plot(hs, ts, ".", alpha=0.4, label="trials")
    med = study.medians()
    ax.plot(list(med), list(med.values()), "s", label="median")
    hh = np.linspace(hs.min(), hs.max(), 100)
    f = study.fit
    ax.plot(hh, f.a * np.exp(f.b * hh), "-", label=f"{f.a:.4g} exp({f.b:.4g} H), R^2={f.r2:.3f}")
    ax.set_xlabel("Hurst exponent")
    ax.set_ylabel("tangent of dominant line")
    ax.legend()
    _save(fig, path)


def plot_beam(fx, report, entropy_h, path):
    fig, axes = plt.subplots(1, 3, figsize=(15, 4))
    x = fx.signal.x
    axes[0].plot(x, fx.signal.y, "o-", ms=3, label="mode shape")
    axes[0].plot(x, entropy_h, "-", label="entropy")
    axes[0].axvline(fx.damage_idx, color="red", ls=":")
    axes[0].legend()
    _hough_axes(axes[1], report.hough, report.labels)
    axes[1].set_title("Hough parameters")
    _hough_axes(axes[2], report.hough, None, color_by="error")
    axes[2].set_title("length vs position")
    _save(fig, path)
