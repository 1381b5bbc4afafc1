import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose, assert_array_equal

from rnn_linz import (
    ACTIVATION,
    ACTIVITY,
    GainMatrix,
    InputSequence,
    Nonlinearity,
    RnnModel,
    Trajectory,
    check_equivalence,
    find_fixed_point,
    gain_matrix,
    linearization_error,
    linearize_activation,
    linearize_activity,
    map_r_to_x,
    map_x_to_r,
    simulate,
    simulate_linear,
    step,
)
from rnn_linz.errors import NearZeroGainError

from oracles import DERIVED_GAIN, central_diff_jacobian


def synthetic_fp(x0, nl=Nonlinearity("tanh"), c=None):
    """A FixedPoint-shaped base for matrix-algebra tests (not solved)."""
    from rnn_linz import FixedPoint
    from rnn_linz.nonlinearity import apply as nl_apply

    x0 = np.asarray(x0, dtype=float)
    return FixedPoint(
        x0=x0,
        r0=nl_apply(nl, x0),
        c=np.zeros_like(x0) if c is None else np.asarray(c, float),
        residual=0.0,
        iterations=0,
    )


def test_gain_trivial_cases(derived_model):
    fp0 = find_fixed_point(derived_model, c=[0.0, 0.0])
    assert_array_equal(gain_matrix(derived_model, fp0).diag, [1.0, 1.0])
    m_id = RnnModel(W=np.array([[0.2, 0.0], [0.0, 0.2]]), nl=Nonlinearity("identity"))
    fp_id = find_fixed_point(m_id, c=[0.4, -0.2])
    assert_array_equal(gain_matrix(m_id, fp_id).diag, [1.0, 1.0])


def test_gain_derived_values(derived_model, derived_fp):
    # oracle: sech^2 at the pinned fixed point, evaluated with mpmath
    assert_allclose(gain_matrix(derived_model, derived_fp).diag, DERIVED_GAIN, atol=1e-12)


def test_activation_system_is_column_scaling():
    m = RnnModel(W=np.array([[0.0, 1.0], [1.0, 0.0]]), nl=Nonlinearity("tanh"))
    # pick x0 so that the gains are exactly (1, tanh'(atanh(sqrt(0.5)))) = (1, 0.5)
    x0 = np.array([0.0, np.arctanh(np.sqrt(0.5))])
    sys = linearize_activation(m, synthetic_fp(x0))
    assert_allclose(sys.A, [[0.0, 0.5], [1.0, 0.0]], rtol=0, atol=1e-15)
    assert_array_equal(sys.B, np.eye(2))
    assert sys.variant == ACTIVATION


def test_activity_system_is_row_scaling():
    m = RnnModel(W=np.array([[0.0, 1.0], [1.0, 0.0]]), nl=Nonlinearity("tanh"))
    x0 = np.array([0.0, np.arctanh(np.sqrt(0.5))])
    sys = linearize_activity(m, synthetic_fp(x0))
    assert_allclose(sys.A, [[0.0, 1.0], [0.5, 0.0]], rtol=0, atol=1e-15)
    assert_allclose(sys.B, np.diag([1.0, 0.5]), rtol=0, atol=1e-15)
    assert sys.variant == ACTIVITY


def test_identity_gain_collapses_both_systems(derived_model):
    fp0 = find_fixed_point(derived_model, c=[0.0, 0.0])
    act = linearize_activation(derived_model, fp0)
    rate = linearize_activity(derived_model, fp0)
    assert_array_equal(act.A, derived_model.W)
    assert_array_equal(rate.A, derived_model.W)
    assert_array_equal(act.B, np.eye(2))
    assert_array_equal(rate.B, np.eye(2))


def test_diagonal_w_commutes():
    m = RnnModel(W=np.diag([0.3, -0.6]), nl=Nonlinearity("tanh"))
    fp = synthetic_fp([0.5, -0.2])
    assert_array_equal(
        linearize_activation(m, fp).A, linearize_activity(m, fp).A
    )


@given(
    W=arrays(np.float64, (4, 4), elements=st.floats(-2, 2)),
    diag=arrays(np.float64, (4,), elements=st.floats(0.05, 1.5)),
)
@settings(max_examples=60, deadline=None)
def test_scaling_identities_exact(W, diag):
    # (W D)[:, j] = D_jj W[:, j] and (D W)[i, :] = D_ii W[i, :] entrywise
    wd = W * diag[None, :]
    dw = diag[:, None] * W
    for j in range(4):
        assert_array_equal(wd[:, j], diag[j] * W[:, j])
        assert_array_equal(dw[j, :], diag[j] * W[j, :])


def test_simulate_linear_trivial_cases():
    fp = synthetic_fp([0.0, 0.0])
    sys = linearize_activation(
        RnnModel(W=np.zeros((2, 2)), nl=Nonlinearity("tanh")), fp
    )
    # zero start, zero input: identically zero
    traj = simulate_linear(sys, [0.0, 0.0], horizon=5)
    assert_array_equal(traj.states, np.zeros((6, 2)))
    # A = 0, B = I: the pulse appears once and dies
    pulse = InputSequence.from_sparse(2, [(0, [1.0, 2.0])])
    traj = simulate_linear(sys, [0.0, 0.0], pulse, horizon=2)
    assert_array_equal(traj.states[1], [1.0, 2.0])
    assert_array_equal(traj.states[2], [0.0, 0.0])


def test_map_x_to_r_and_back():
    D = GainMatrix(diag=np.array([2.0, 0.5]))
    traj = Trajectory(ACTIVATION, np.array([[1.0, 1.0], [3.0, -2.0]]))
    mapped = map_x_to_r(D, traj)
    assert mapped.kind == ACTIVITY
    assert_array_equal(mapped.states[0], [2.0, 0.5])
    back = map_r_to_x(D, mapped)
    assert back.kind == ACTIVATION
    assert np.max(np.abs(back.states - traj.states)) <= 1e-13


def test_map_identity_gain_is_identity():
    D = GainMatrix(diag=np.ones(3))
    traj = Trajectory(ACTIVATION, np.arange(6.0).reshape(2, 3))
    assert_array_equal(map_x_to_r(D, traj).states, traj.states)


def test_map_r_to_x_near_zero_gain():
    D = GainMatrix(diag=np.array([1.0, 1e-15]))
    traj = Trajectory(ACTIVITY, np.ones((2, 2)))
    with pytest.raises(NearZeroGainError) as exc:
        map_r_to_x(D, traj)
    assert exc.value.index == 1


@given(
    states=arrays(np.float64, (5, 3), elements=st.floats(-10, 10)),
    diag=arrays(np.float64, (3,), elements=st.floats(1e-3, 10)),
)
@settings(max_examples=60, deadline=None)
def test_map_roundtrip_property(states, diag):
    D = GainMatrix(diag=diag)
    traj = Trajectory(ACTIVITY, states)
    back = map_x_to_r(D, map_r_to_x(D, traj))
    assert np.max(np.abs(back.states - states)) <= 1e-13 * max(1.0, np.max(np.abs(states)))


def test_equivalence_trivial_zero(derived_model, derived_fp):
    rep = check_equivalence(derived_model, derived_fp, [0.0, 0.0], None, 50)
    assert rep.max_gap == 0.0
    assert rep.passed


def test_equivalence_derived_case(derived_model, derived_fp):
    rng = np.random.default_rng(5)
    inputs = InputSequence.from_array(rng.normal(size=(100, 2)) * 1e-3)
    rep = check_equivalence(derived_model, derived_fp, [1e-3, 0.0], inputs, 100, tol=1e-12)
    assert rep.max_gap <= 1e-12
    assert rep.passed


def test_equivalence_identity_gain_bitwise_tolerant(derived_model):
    fp0 = find_fixed_point(derived_model, c=[0.0, 0.0])
    inputs = InputSequence.from_sparse(2, [(0, [1e-3, -2e-3])])
    rep = check_equivalence(derived_model, fp0, [1e-3, 1e-3], inputs, 100)
    assert rep.max_gap <= 1e-15


def test_equivalence_relative_form_larger_model():
    rng = np.random.default_rng(17)
    W = rng.normal(size=(10, 10)) * (0.9 / np.sqrt(10))
    m = RnnModel(W=W, nl=Nonlinearity("tanh"))
    fp = find_fixed_point(m, c=rng.normal(size=10) * 0.4)
    inputs = InputSequence.from_array(rng.normal(size=(100, 10)) * 1e-3)
    rep = check_equivalence(m, fp, rng.normal(size=10) * 1e-3, inputs, 100)
    assert rep.max_gap <= 1e-12 * (1.0 + rep.max_r_norm)
    assert rep.passed


def test_jacobians_match_central_differences(derived_model, derived_fp):
    m, fp = derived_model, derived_fp
    D = gain_matrix(m, fp)
    wd = m.W * D.diag[None, :]
    dw = D.diag[:, None] * m.W
    fx = lambda x: step(m, x, c=fp.c)
    fd_x = central_diff_jacobian(fx, fp.x0)
    assert np.max(np.abs(wd - fd_x)) <= 1e-6
    fr = lambda r: np.tanh(m.W @ r + fp.c)
    fd_r = central_diff_jacobian(fr, fp.r0)
    assert np.max(np.abs(dw - fd_r)) <= 1e-6


def test_linearization_error_zero_epsilon(derived_model, derived_fp):
    assert linearization_error(derived_model, derived_fp, [1.0, 0.0], 0.0, 10) == 0.0


def test_linearization_error_identity_nl_is_roundoff():
    m = RnnModel(W=np.array([[0.4, 0.1], [0.0, 0.3]]), nl=Nonlinearity("identity"))
    fp = find_fixed_point(m, c=[0.3, -0.2])
    err = linearization_error(m, fp, [1.0, 0.0], 1e-2, 10)
    assert err <= 1e-14  # the system is already linear; only roundoff remains


def test_taylor_order_derived_case(derived_model, derived_fp):
    d = np.array([1.0, 0.0])
    e_full = linearization_error(derived_model, derived_fp, d, 1e-2, 5)
    e_half = linearization_error(derived_model, derived_fp, d, 5e-3, 5)
    assert 3.5 <= e_full / e_half <= 4.5


def test_equivalence_one_step_algebraic_identity():
    # D (W D x + u) == D W (D x) + D u by associativity; one exact step
    rng = np.random.default_rng(23)
    W = rng.normal(size=(6, 6))
    d = rng.uniform(0.1, 1.0, size=6)
    x = rng.normal(size=6)
    u = rng.normal(size=6)
    lhs = d * (W * d[None, :] @ x + u)
    rhs = (d[:, None] * W) @ (d * x) + d * u
    assert np.max(np.abs(lhs - rhs)) <= 1e-14 * max(1.0, np.max(np.abs(lhs)))
