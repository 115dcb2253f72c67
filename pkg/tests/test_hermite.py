import numpy as np
import pytest
from numpy.polynomial import hermite as H
from scipy.special import factorial

from hermitegf.basis import BasisSpec
from hermitegf.errors import DomainError
from hermitegf.hermite import (
    HERMITE_BOUND,
    PI_QUARTER,
    generating_oracle,
    hermite_function_1d,
    hermite_scaled_1d,
    hlim,
    mehler_closed,
    mehler_partial,
)


def physicists(l, x):
    c = np.zeros(l + 1)
    c[l] = 1.0
    return H.hermval(x, c)


def test_scaled_values_by_hand():
    tab = hermite_scaled_1d([0.0, 1.0, -2.5], 2)
    assert tab.kind == "scaled-polynomial"
    np.testing.assert_array_equal(tab.values[:, 0], 1.0)
    assert tab.values[1, 1] == pytest.approx(np.sqrt(2.0), rel=1e-15)
    assert tab.values[0, 2] == pytest.approx(-1.0 / np.sqrt(2.0), rel=1e-15)


def test_scaled_against_numpy_hermite():
    xs = np.linspace(-3, 3, 13)
    tab = hermite_scaled_1d(xs, 20)
    for l in range(21):
        ref = physicists(l, xs) / np.sqrt(2.0 ** l * factorial(l))
        np.testing.assert_allclose(tab.values[:, l], ref, rtol=1e-11, atol=1e-11)


def test_scaled_bound():
    xs = np.linspace(-10, 10, 401)
    tab = hermite_scaled_1d(xs, 200)
    assert np.all(np.abs(tab.values) <= HERMITE_BOUND * np.exp(xs * xs / 2)[:, None])


def test_hermite_functions():
    tab = hermite_function_1d([0.0], 3)
    assert tab.values[0, 0] == pytest.approx(0.7511255445, rel=1e-10)
    assert tab.values[0, 1] == 0.0
    ys = np.linspace(-3, 3, 31)
    psi = hermite_function_1d(ys, 30).values
    h = hermite_scaled_1d(ys, 30).values
    np.testing.assert_allclose(psi * np.exp(ys ** 2 / 2)[:, None] / PI_QUARTER, h, rtol=1e-12, atol=1e-12)


def test_hermite_functions_bounded():
    ys = np.linspace(-50, 50, 2001)
    psi = hermite_function_1d(ys, 500).values
    assert np.all(np.isfinite(psi))
    assert np.max(np.abs(psi)) <= 1.0


def test_generating_oracle():
    p, c = generating_oracle([0.0], [0.7], 10)
    assert p == pytest.approx(1.0) and c == pytest.approx(1.0)
    p, c = generating_oracle([0.5], [1.0], 40)
    assert c == pytest.approx(np.exp(0.75), rel=1e-15)
    assert abs(p - c) <= 1e-12
    p, c = generating_oracle([0.3, -0.2], [0.5, 1.0], 40)
    assert abs(p - c) <= 1e-12


def test_generating_oracle_convergence():
    for a, b in [([0.6, 0.5], [0.2, -0.4]), ([0.9], [1.1]), ([0.3, 0.3, 0.3], [0.1, 0.5, -0.2])]:
        p10, c = generating_oracle(a, b, 10)
        p40, _ = generating_oracle(a, b, 40)
        assert abs(p40 - c) * 10 <= abs(p10 - c) or abs(p40 - c) < 1e-14


def test_mehler_closed_values():
    assert mehler_closed([0.0], [0.0], 0.4) == pytest.approx(1.0910894512, rel=1e-10)
    for d in (1, 2, 3):
        assert mehler_closed(np.zeros(d), np.zeros(d), 0.3) == pytest.approx((1 - 0.09) ** (-d / 2))


def test_mehler_partial_converges():
    x, y = [0.5, -0.3], [0.1, 0.7]
    assert abs(mehler_partial(x, y, 0.4, 60) - mehler_closed(x, y, 0.4)) <= 1e-12


def test_mehler_partial_monotone_on_diagonal():
    x = [0.8, -0.4]
    sums = [mehler_partial(x, x, 0.6, j) for j in range(0, 30)]
    assert np.all(np.diff(sums) >= -1e-15)
    assert sums[-1] <= mehler_closed(x, x, 0.6) * (1 + 1e-13)


@pytest.mark.parametrize("t", [0.0, 1.0, -0.2, 1.5])
def test_mehler_domain(t):
    with pytest.raises(DomainError):
        mehler_closed([0.0], [0.0], t)
    with pytest.raises(DomainError):
        mehler_partial([0.0], [0.0], t, 3)


def test_hlim_values():
    spec = BasisSpec.isotropic(1.0, 1.0, 0.4, [0.0], 0)
    assert hlim([0.0], spec) == pytest.approx(1 / np.sqrt(1 - 0.16))
    ref = np.exp(-2 + 0.8 / 1.4) / np.sqrt(0.84)
    assert hlim([1.0], spec) == pytest.approx(ref, rel=1e-13)
    assert ref == pytest.approx(0.2614807178, rel=1e-9)
