import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from entroseg.core import (LengthMismatch, NonFiniteValue, NonMonotonicAbscissa,
                           OutOfDomain, Signal, SignalError, TooFewPoints,
                           add_gaussian_noise, eval_piecewise_test_signal,
                           index_signal, make_signal, piecewise_test_signal,
                           read_signal_csv, rng, trial_seeds, write_signal_csv)


def test_minimal_signal():
    s = make_signal([0, 1], [0, 0])
    assert len(s) == 2
    assert isinstance(s, Signal)


@pytest.mark.parametrize("x, y, exc", [
    ([0, 0], [1, 2], NonMonotonicAbscissa),
    ([1, 0], [1, 2], NonMonotonicAbscissa),
    ([0, 1, 2], [1, 2], LengthMismatch),
    ([0, np.nan], [1, 2], NonFiniteValue),
    ([0, 1], [1, np.inf], NonFiniteValue),
    ([0], [1], TooFewPoints),
])
def test_rejects(x, y, exc):
    with pytest.raises(exc):
        make_signal(x, y)


def test_errors_are_value_errors():
    assert issubclass(NonMonotonicAbscissa, SignalError)
    assert issubclass(SignalError, ValueError)


def test_signal_is_immutable():
    s = make_signal([0, 1, 2], [3, 4, 5])
    with pytest.raises(ValueError):
        s.y[0] = 1.0
    with pytest.raises(AttributeError):
        s.x = np.zeros(3)


def test_input_arrays_are_copied():
    y = np.array([1.0, 2.0, 3.0])
    s = index_signal(y)
    y[0] = 99
    assert s.y[0] == 1.0


@pytest.mark.parametrize("x, expected", [(0, 0), (-4, 4), (4, 14), (1, 1), (2, 8), (-2, 2)])
def test_eval_test_signal(x, expected):
    assert eval_piecewise_test_signal(x) == pytest.approx(expected)


@pytest.mark.parametrize("x", [-4.01, 4.5])
def test_eval_out_of_domain(x):
    with pytest.raises(OutOfDomain):
        eval_piecewise_test_signal(x)


def test_eval_nan():
    with pytest.raises(NonFiniteValue):
        eval_piecewise_test_signal(np.nan)


def test_fixture_sampling(fixture_signal):
    s = fixture_signal
    assert len(s) == 41
    assert s.x[0] == -4 and s.x[-1] == 4
    assert np.allclose(np.diff(s.x), 0.2)
    # x=0 on the first branch, x=2 on the third
    assert s.y[20] == 0
    assert s.y[30] == pytest.approx(8)
    assert s.y[29] == pytest.approx(1.8)


def test_noise_zero_is_identity(fixture_signal):
    assert add_gaussian_noise(fixture_signal, 0.0, 3) == fixture_signal


def test_noise_reproducible(fixture_signal):
    a = add_gaussian_noise(fixture_signal, 0.1, 7)
    b = add_gaussian_noise(fixture_signal, 0.1, 7)
    c = add_gaussian_noise(fixture_signal, 0.1, 8)
    assert np.array_equal(a.y, b.y)
    assert not np.array_equal(a.y, c.y)
    assert np.array_equal(a.x, fixture_signal.x)


def test_noise_rejects_bad_std(fixture_signal):
    with pytest.raises(NonFiniteValue):
        add_gaussian_noise(fixture_signal, np.inf, 0)
    with pytest.raises(SignalError):
        add_gaussian_noise(fixture_signal, -1.0, 0)


def test_noise_moments():
    n = 100_000
    s = index_signal(np.zeros(n))
    eps = add_gaussian_noise(s, 0.3, 2024).y
    assert abs(eps.mean()) <= 0.01
    assert abs(eps.std() / 0.3 - 1) <= 0.02


def test_rng_seed_range():
    with pytest.raises(SignalError):
        rng(-1)
    with pytest.raises(SignalError):
        rng(2**64)
    rng(2**64 - 1)


def test_trial_seeds_prefix_stable():
    a = [rng(s).random() for s in trial_seeds(5, 3)]
    b = [rng(s).random() for s in trial_seeds(5, 10)][:3]
    assert a == b
    assert len(set(a)) == 3


def test_csv_roundtrip(fixture_signal):
    buf = io.StringIO()
    write_signal_csv(fixture_signal, buf)
    back = read_signal_csv(io.StringIO(buf.getvalue()))
    assert back == fixture_signal


def test_csv_without_header(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("0,1\n1,2.5\n2,-3\n")
    s = read_signal_csv(p)
    assert list(s.y) == [1, 2.5, -3]


def test_csv_bad_row(tmp_path):
    p = tmp_path / "s.csv"
    p.write_text("x,y\n0,1\n1,abc\n")
    with pytest.raises(SignalError):
        read_signal_csv(p)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=40))
def test_index_signal_accepts_finite(values):
    s = index_signal(values)
    assert np.all(np.diff(s.x) > 0)
    assert len(s) == len(values)
