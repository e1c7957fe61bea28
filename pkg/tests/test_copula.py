import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmmcopula import (
    BivariateCopula,
    DomainError,
    Rectangle,
    builtin,
    clayton,
    efgm,
    flip_first,
    flip_second,
    independence,
    lower_bound,
    upper_bound,
    validate_copula,
    volume,
)

unit = st.floats(0.0, 1.0)


def test_builtin_values():
    assert independence()(0.4, 0.7) == pytest.approx(0.28)
    assert upper_bound()(0.4, 0.7) == 0.4
    assert lower_bound()(0.3, 0.8) == pytest.approx(0.1)
    assert efgm(-1)(0.5, 0.5) == pytest.approx(0.1875)
    # Clayton with theta = 1: uv / (u + v - uv)
    assert clayton(1.0)(0.5, 0.5) == pytest.approx(1.0 / 3.0)
    assert clayton(-0.7)(0.0, 0.5) == 0.0


def test_builtin_by_name_and_errors():
    assert builtin("EFGM", 0.3)(0.5, 0.5) == pytest.approx(efgm(0.3)(0.5, 0.5))
    with pytest.raises(DomainError):
        builtin("gumbel")
    with pytest.raises(DomainError):
        builtin("pi", 1.0)
    with pytest.raises(DomainError):
        efgm(2.0)
    with pytest.raises(DomainError):
        clayton(0.0)
    with pytest.raises(DomainError):
        clayton(-1.5)


def test_domain_checks():
    with pytest.raises(DomainError):
        independence()(1.2, 0.5)
    with pytest.raises(DomainError):
        independence()(0.5, np.nan)


def test_array_evaluation_and_diagonal():
    t = np.linspace(0, 1, 5)
    np.testing.assert_allclose(upper_bound().diagonal(t), t)
    np.testing.assert_allclose(independence()(t, 0.5), 0.5 * t)


def test_flip_of_bounds():
    # flipping M in either variable gives W
    u, v = np.meshgrid(np.linspace(0, 1, 11), np.linspace(0, 1, 11))
    np.testing.assert_allclose(flip_second(upper_bound())(u, v), lower_bound()(u, v), atol=1e-15)
    np.testing.assert_allclose(flip_first(upper_bound())(u, v), lower_bound()(u, v), atol=1e-15)
    np.testing.assert_allclose(flip_second(independence())(u, v), u * v, atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(unit, unit, st.floats(-1, 1))
def test_flip_is_involution(u, v, theta):
    C = efgm(theta)
    assert flip_second(flip_second(C))(u, v) == pytest.approx(C(u, v), abs=1e-14)
    assert flip_first(flip_first(C))(u, v) == pytest.approx(C(u, v), abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(unit, unit, st.floats(-1, 5).filter(lambda x: abs(x) > 1e-3))
def test_frechet_bounds(u, v, theta):
    val = clayton(theta)(u, v)
    assert max(0.0, u + v - 1.0) - 1e-12 <= val <= min(u, v) + 1e-12


def test_volume_and_rectangle():
    rect = Rectangle(0.2, 0.6, 0.1, 0.5)
    assert volume(independence(), rect) == pytest.approx(0.4 * 0.4)
    assert volume(upper_bound(), Rectangle(0.0, 0.5, 0.5, 1.0)) == pytest.approx(0.0)
    with pytest.raises(DomainError):
        Rectangle(0.5, 0.2, 0.0, 1.0)
    with pytest.raises(DomainError):
        Rectangle(0.0, 1.5, 0.0, 1.0)


@pytest.mark.parametrize("C", [independence(), upper_bound(), lower_bound(), efgm(-1), efgm(1), clayton(-0.7), clayton(2.0)])
def test_validate_builtins(C):
    report = validate_copula(C, grid_n=101, tol=1e-9)
    assert report.passed, str(report)


def test_validate_detects_non_copulas():
    squared = BivariateCopula(lambda u, v: np.minimum(u, v) ** 2, "min^2")
    report = validate_copula(squared, grid_n=21)
    assert not report.passed
    assert any("margins" in f for f in report.failures)
    too_strong = BivariateCopula(lambda u, v: u * v * (1 + 3 * (1 - u) * (1 - v)), "efgm(3)")
    report = validate_copula(too_strong, grid_n=21)
    assert any("volume" in f for f in report.failures)
    assert str(report).startswith("FAIL")
