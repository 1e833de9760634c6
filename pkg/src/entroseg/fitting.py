"""Least-squares kernels: straight lines and the ``a * exp(b * x)`` model."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .core import SignalError, TooFewPoints


class DegenerateAbscissa(SignalError):
    pass


class DegenerateInput(SignalError):
    pass


class NoConvergence(RuntimeError):
    def __init__(self, message, fit):
        super().__init__(message)
        self.fit = fit


@dataclass(frozen=True)
class LineFit:
    a: float  # slope
    b: float  # intercept
    r2: float
    mean_abs_error: float


def _prep(x, y, min_len=2):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise SignalError("x and y must be 1D arrays of equal length")
    if x.size < min_len:
        raise TooFewPoints(f"need at least {min_len} points, got {x.size}")
    return x, y


def _moments(x, y):
    # sum / n is what ndarray.mean computes, without its per-call overhead
    n = x.size
    xm, ym = x.sum() / n, y.sum() / n
    dx, dy = x - xm, y - ym
    return xm, ym, dx @ dx, dx @ dy, dy @ dy


def _r2_from_moments(n, sxx, sxy, syy):
    if sxx == 0:
        raise DegenerateAbscissa("all x values are identical")
    if syy == 0:
        # flat data: two points still determine a line
        return 1.0 if n == 2 else 0.0
    r2 = sxy * sxy / (sxx * syy)
    return min(max(r2, 0.0), 1.0)


def r_squared(x, y) -> float:
    """Squared Pearson correlation of ``x`` and ``y``.

    Constant ``y`` over more than two points gives 0 rather than NaN.
    """
    x, y = _prep(x, y)
    _, _, sxx, sxy, syy = _moments(x, y)
    return _r2_from_moments(x.size, sxx, sxy, syy)


def ols_line(x, y) -> LineFit:
    """Ordinary least-squares line ``y ~ a x + b``."""
    x, y = _prep(x, y)
    xm, ym, sxx, sxy, syy = _moments(x, y)
    if sxx == 0:
        raise DegenerateAbscissa("all x values are identical")
    a = sxy / sxx
    b = ym - a * xm
    err = float(np.abs(y - (a * x + b)).sum() / x.size)
    return LineFit(float(a), float(b), _r2_from_moments(x.size, sxx, sxy, syy), err)


# ---------------------------------------------------------------------------
# exponential model


def exp_model(p, x):
    return p[0] * np.exp(p[1] * x)


def exp_jacobian(p, x):
    """d/da and d/db of ``a exp(b x)``, one row per sample."""
    e = np.exp(p[1] * x)
    return np.column_stack((e, p[0] * x * e))


@dataclass(frozen=True)
class ExpFit:
    a: float
    b: float
    r2: float
    iterations: int
    converged: bool
    sse: float
    init_sse: float
    gradient_norm: float
    # 95% bounds from the linearised covariance, (lo, hi) per parameter
    a_ci: tuple = field(default=(np.nan, np.nan))
    b_ci: tuple = field(default=(np.nan, np.nan))


def exp_initial_guess(x, y):
    """Log-linear start on the positive samples; ``(mean(y), 0)`` otherwise."""
    if np.all(y > 0) and np.ptp(x) > 0:
        lf = ols_line(x, np.log(y))
        return np.array([np.exp(lf.b), lf.a])
    return np.array([float(np.mean(y)), 0.0])


def fit_exponential(x, y, init=None, *, max_iter=200, ftol=1e-10, gtol=1e-10,
                    raise_on_failure=False) -> ExpFit:
    """Fit ``y ~ a exp(b x)`` by Levenberg-Marquardt.

    Steps that would increase the sum of squares are rejected and the
    damping is raised instead, so the returned SSE never exceeds the SSE of
    the starting point.  Iteration stops when the relative SSE improvement
    drops below ``ftol`` or the gradient infinity norm below ``gtol``.
    Without convergence the best point found is returned with
    ``converged=False`` (or :class:`NoConvergence` is raised when
    ``raise_on_failure`` is set).
    """
    x, y = _prep(x, y, min_len=3)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateInput("non-finite data")
    if np.all(y == 0):
        raise DegenerateInput("y is identically zero")
    p = exp_initial_guess(x, y) if init is None else np.asarray(init, dtype=float)

    def sse_of(q):
        # overflowing trial steps come back as inf and are rejected
        with np.errstate(over="ignore", invalid="ignore"):
            r = y - exp_model(q, x)
            return float(r @ r), r

    sse, r = sse_of(p)
    init_sse = sse
    lam = 1e-3
    converged = False
    grad_norm = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        J = exp_jacobian(p, x)
        g = J.T @ r
        grad_norm = float(np.max(np.abs(g)))
        if grad_norm < gtol:
            converged = True
            break
        A = J.T @ J
        scale = np.diag(A).copy()
        scale[scale == 0] = 1.0
        improved = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.diag(scale), g)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            trial = p + step
            new_sse, new_r = sse_of(trial)
            if np.isfinite(new_sse) and new_sse <= sse:
                improved = True
                break
            lam *= 10
        if not improved:
            # no descent direction left at machine precision
            converged = True
            break
        rel = (sse - new_sse) / sse if sse > 0 else 0.0
        p, sse, r = trial, new_sse, new_r
        lam = max(lam / 10, 1e-12)
        if rel < ftol:
            grad_norm = float(np.max(np.abs(exp_jacobian(p, x).T @ r)))
            converged = True
            break
    sst = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - sse / sst if sst > 0 else (1.0 if sse == 0 else 0.0)
    a_ci, b_ci = _confidence(p, x, sse)
    fit = ExpFit(float(p[0]), float(p[1]), r2, it, converged, sse, init_sse,
                 grad_norm, a_ci, b_ci)
    if not converged and raise_on_failure:
        raise NoConvergence(f"no convergence after {max_iter} iterations", fit)
    return fit


def _confidence(p, x, sse, level=0.95):
    dof = x.size - 2
    if dof <= 0:
        return (np.nan, np.nan), (np.nan, np.nan)
    J = exp_jacobian(p, x)
    try:
        cov = np.linalg.inv(J.T @ J) * (sse / dof)
    except np.linalg.LinAlgError:
        return (np.nan, np.nan), (np.nan, np.nan)
    t = stats.t.ppf(0.5 + level / 2, dof)
    half = t * np.sqrt(np.abs(np.diag(cov)))
    return ((float(p[0] - half[0]), float(p[0] + half[0])),
            (float(p[1] - half[1]), float(p[1] + half[1])))
