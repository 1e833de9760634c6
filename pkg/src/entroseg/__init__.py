"""Signal segmentation with the entropy of curves and Hough-space line
classification."""
from .core import (Signal, add_gaussian_noise, eval_piecewise_test_signal, make_signal,
                   piecewise_test_signal, read_signal_csv)
from .entropy import DiffStats, EntropyCurve, entropy_linear_mean_check, entropy_transform
from .fitting import ExpFit, LineFit, fit_exponential, ols_line, r_squared
from .segmentation import (HoughPoint, LineSegment, SegmentationConfig, SegmentLabel, classify,
                           detection_trace, segment, to_hough)

__version__ = "0.1.0"

__all__ = [
    "Signal", "make_signal", "add_gaussian_noise", "eval_piecewise_test_signal",
    "piecewise_test_signal", "read_signal_csv",
    "DiffStats", "EntropyCurve", "entropy_transform", "entropy_linear_mean_check",
    "LineFit", "ExpFit", "ols_line", "r_squared", "fit_exponential",
    "SegmentationConfig", "LineSegment", "HoughPoint", "SegmentLabel",
    "segment", "detection_trace", "to_hough", "classify",
]
