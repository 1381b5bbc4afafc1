import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from rnn_linz import nonlinearity as nl
from rnn_linz.errors import InverseRangeError, NonFiniteError

TANH = nl.Nonlinearity("tanh")
LOGISTIC = nl.Nonlinearity("logistic")
IDENTITY = nl.Nonlinearity("identity")

ALL_KINDS = [TANH, LOGISTIC, IDENTITY]


def test_apply_tanh_zero():
    assert_allclose(nl.apply(TANH, [0.0, 0.0]), [0.0, 0.0], atol=0)


def test_apply_identity_passthrough():
    x = np.array([0.3, -1.2])
    assert_allclose(nl.apply(IDENTITY, x), x, atol=0)


def test_apply_tanh_reference_value():
    # reference: 40-digit mpmath evaluation of tanh(1)
    mp.mp.dps = 40
    expected = float(mp.tanh(1))
    assert expected == 0.7615941559557649
    assert_allclose(nl.apply(TANH, [1.0]), [expected], rtol=1e-15)


def test_derivative_trivial_values():
    assert_allclose(nl.derivative(TANH, [0.0]), [1.0], atol=0)
    assert_allclose(nl.derivative(LOGISTIC, [0.0]), [0.25], rtol=1e-15)
    assert_allclose(nl.derivative(IDENTITY, [5.0, -3.0, 0.0]), [1.0, 1.0, 1.0], atol=0)


def test_inverse_trivial_and_roundtrip():
    assert_allclose(nl.inverse(TANH, [0.0]), [0.0], atol=0)
    r = nl.apply(TANH, [1.0])
    assert_allclose(nl.inverse(TANH, r), [1.0], atol=1e-10)


def test_inverse_rejects_range_boundary():
    with pytest.raises(InverseRangeError) as exc:
        nl.inverse(TANH, [0.0, 1.0])
    assert exc.value.index == 1
    # within the rejection margin of the boundary counts as out of range
    with pytest.raises(InverseRangeError):
        nl.inverse(TANH, [1.0 - 1e-13])
    for bad in ([0.0], [1.0], [-0.1], [1.1]):
        with pytest.raises(InverseRangeError):
            nl.inverse(LOGISTIC, bad)


def test_non_finite_input_rejected():
    for fn in (nl.apply, nl.derivative, nl.inverse):
        with pytest.raises(NonFiniteError):
            fn(TANH, [0.0, np.nan])
        with pytest.raises(NonFiniteError):
            fn(TANH, [np.inf])


def test_bad_constructor_args():
    with pytest.raises(ValueError):
        nl.Nonlinearity("relu")
    with pytest.raises(ValueError):
        nl.Nonlinearity("tanh", param=0.0)
    with pytest.raises(ValueError):
        nl.Nonlinearity("tanh", param=-2.0)


def test_param_scales_slope():
    scaled = nl.Nonlinearity("tanh", param=2.0)
    assert_allclose(nl.derivative(scaled, [0.0]), [2.0], rtol=1e-15)
    assert_allclose(nl.inverse(scaled, nl.apply(scaled, [0.3])), [0.3], atol=1e-12)


def test_dict_roundtrip():
    for obj in ALL_KINDS + [nl.Nonlinearity("logistic", param=0.5)]:
        assert nl.from_dict(nl.to_dict(obj)) == obj
    assert nl.to_dict(TANH) == {"kind": "tanh"}


@pytest.mark.parametrize("obj", ALL_KINDS, ids=lambda o: o.kind)
@given(x=arrays(np.float64, (6,), elements=st.floats(-7.0, 7.0)))
@settings(max_examples=100, deadline=None)
def test_roundtrip_property(obj, x):
    assert np.max(np.abs(nl.inverse(obj, nl.apply(obj, x)) - x)) <= 1e-10


def test_roundtrip_relative_error_moderate_range():
    x = np.linspace(-6.0, 6.0, 4001)
    for obj in ALL_KINDS:
        err = np.abs(nl.inverse(obj, nl.apply(obj, x)) - x)
        assert np.all(err <= 1e-12 * np.maximum(1.0, np.abs(x)))


def test_roundtrip_saturated_range():
    # Near tanh saturation the float64 spacing of g(x) corresponds to steps
    # of about 1e-8 in x around |x| = 10, so no inverse can do better than
    # that; the tight 1e-10 bound applies on |x| <= 7 only.
    x = np.linspace(-10.0, 10.0, 4001)
    err = np.abs(nl.inverse(TANH, nl.apply(TANH, x)) - x)
    assert np.max(err) <= 2e-8
    errl = np.abs(nl.inverse(LOGISTIC, nl.apply(LOGISTIC, x)) - x)
    assert np.max(errl) <= 1e-10


@pytest.mark.parametrize("obj", ALL_KINDS, ids=lambda o: o.kind)
@given(x=arrays(np.float64, (8,), elements=st.floats(-3.0, 3.0)))
@settings(max_examples=100, deadline=None)
def test_derivative_matches_central_difference(obj, x):
    h = 1e-5
    fd = (nl.apply(obj, x + h) - nl.apply(obj, x - h)) / (2 * h)
    assert np.max(np.abs(nl.derivative(obj, x) - fd)) <= 1e-6


@pytest.mark.parametrize("obj", ALL_KINDS, ids=lambda o: o.kind)
def test_strict_monotonicity_and_positive_slope(obj):
    x = np.linspace(-9.0, 9.0, 500)
    y = nl.apply(obj, x)
    assert np.all(np.diff(y) > 0)
    assert np.all(nl.derivative(obj, x) > 0)


def test_logistic_inverse_reference():
    mp.mp.dps = 40
    r = 0.3
    expected = float(mp.log(mp.mpf("0.3") / mp.mpf("0.7")))
    assert_allclose(nl.inverse(LOGISTIC, [r]), [expected], rtol=1e-14)
