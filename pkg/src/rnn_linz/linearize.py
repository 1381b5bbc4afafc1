"""The two linearizations of the dynamics around a fixed point.

At a fixed point x0 with diagonal gain matrix D (D_jj = g'(x0_j)), the same
dynamics linearize two ways, depending on the coordinate chosen:

    activation space:  x^{k+1} = W D x^k + u^k          (A = W D, B = I)
    activity space:    r^{k+1} = D W r^k + D u^k        (A = D W, B = D)

States are deviations from the fixed point (x = xhat - x0, r = rhat - r0).
The two systems describe the same trajectories through the elementwise map
r = D x; check_equivalence certifies that numerically, and
linearization_error measures the first-order Taylor remainder against the
full nonlinear run.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nonlinearity as nlmod
from ._arrays import as_float_vector
from .dynamics import (
    ACTIVATION,
    ACTIVITY,
    InputSequence,
    RnnModel,
    Trajectory,
    _check_finite_state,
    simulate,
)
from .errors import NearZeroGainError, ShapeMismatchError
from .fixed_points import FixedPoint

# Gains with magnitude at or below this cannot be inverted meaningfully.
NEAR_ZERO_GAIN = 1e-12


@dataclass(frozen=True)
class GainMatrix:
    """Diagonal of g'(x0): the bridge between the two linearizations."""

    diag: np.ndarray

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def matrix(self) -> np.ndarray:
        return np.diag(self.diag)


@dataclass(frozen=True)
class LinearizedSystem:
    """One of the two linear systems; A is the dynamics, B the input matrix."""

    variant: str  # ACTIVATION or ACTIVITY
    A: np.ndarray
    B: np.ndarray
    base_fp: FixedPoint

    @property
    def n(self) -> int:
        return self.A.shape[0]


@dataclass(frozen=True)
class EquivalenceReport:
    """Per-step gap between D x^k and r^k for the two linear runs.

    Passing is judged in relative form: max_gap <= rel_tol * (1 + max ∞-norm
    of the activity-side states), so long marginally-stable runs are judged
    at their own scale.
    """

    gaps: np.ndarray
    max_gap: float
    max_r_norm: float
    rel_tol: float

    @property
    def threshold(self) -> float:
        return self.rel_tol * (1.0 + self.max_r_norm)

    @property
    def passed(self) -> bool:
        return self.max_gap <= self.threshold


def gain_matrix(model: RnnModel, fp: FixedPoint) -> GainMatrix:
    """Evaluate g' at the fixed point. Assumes fp was verified for model."""
    return GainMatrix(diag=nlmod.derivative(model.nl, fp.x0))


def linearize_activation(model: RnnModel, fp: FixedPoint) -> LinearizedSystem:
    """Activation-space system: A = W D (columns of W scaled), B = I."""
    D = gain_matrix(model, fp)
    return LinearizedSystem(
        variant=ACTIVATION,
        A=model.W * D.diag[None, :],
        B=np.eye(model.n),
        base_fp=fp,
    )


def linearize_activity(model: RnnModel, fp: FixedPoint) -> LinearizedSystem:
    """Activity-space system: A = D W (rows of W scaled), B = D."""
    D = gain_matrix(model, fp)
    return LinearizedSystem(
        variant=ACTIVITY,
        A=D.diag[:, None] * model.W,
        B=np.diag(D.diag),
        base_fp=fp,
    )


def simulate_linear(sys: LinearizedSystem, dev_init, inputs=None, horizon: int = 0) -> Trajectory:
    """Iterate state^{k+1} = A state^k + B u^k from state^0 = dev_init."""
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    n = sys.n
    state = as_float_vector(dev_init, n, name="dev_init")
    inputs = InputSequence.zeros(n) if inputs is None else inputs
    if inputs.n != n:
        raise ShapeMismatchError(f"inputs have width {inputs.n}, expected {n}")
    states = np.empty((horizon + 1, n))
    states[0] = state
    for k in range(horizon):
        nxt = sys.A @ states[k] + sys.B @ inputs.at(k)
        _check_finite_state(nxt, k + 1)
        states[k + 1] = nxt
    return Trajectory(sys.variant, states)


def map_x_to_r(D: GainMatrix, x_traj: Trajectory) -> Trajectory:
    """Apply r = D x to every state; flips the trajectory kind."""
    if x_traj.n != D.n:
        raise ShapeMismatchError(f"trajectory width {x_traj.n} != gain width {D.n}")
    return Trajectory(ACTIVITY, x_traj.states * D.diag[None, :])


def map_r_to_x(D: GainMatrix, r_traj: Trajectory) -> Trajectory:
    """Apply x = D^{-1} r; requires every gain above NEAR_ZERO_GAIN."""
    if r_traj.n != D.n:
        raise ShapeMismatchError(f"trajectory width {r_traj.n} != gain width {D.n}")
    small = np.flatnonzero(np.abs(D.diag) <= NEAR_ZERO_GAIN)
    if small.size:
        raise NearZeroGainError(small[0], D.diag[small[0]])
    return Trajectory(ACTIVATION, r_traj.states / D.diag[None, :])


def check_equivalence(
    model: RnnModel,
    fp: FixedPoint,
    dev_init,
    inputs=None,
    horizon: int = 100,
    tol: float = 1e-12,
) -> EquivalenceReport:
    """Certify that the two linearizations describe the same trajectories.

    Runs the activation-space system from dev_init and the activity-space
    system from D dev_init under the same inputs, then reports the per-step
    ∞-norm gap between D x^k and r^k.
    """
    D = gain_matrix(model, fp)
    dev_init = as_float_vector(dev_init, model.n, name="dev_init")
    x_traj = simulate_linear(linearize_activation(model, fp), dev_init, inputs, horizon)
    r_traj = simulate_linear(linearize_activity(model, fp), D.diag * dev_init, inputs, horizon)
    gaps = np.max(np.abs(x_traj.states * D.diag[None, :] - r_traj.states), axis=1)
    return EquivalenceReport(
        gaps=gaps,
        max_gap=float(np.max(gaps)),
        max_r_norm=float(np.max(np.abs(r_traj.states))),
        rel_tol=float(tol),
    )


def linearization_error(
    model: RnnModel,
    fp: FixedPoint,
    direction,
    epsilon: float,
    horizon: int,
) -> float:
    """Max ∞-norm gap between the nonlinear and linearized deviation runs.

    The nonlinear system starts at x0 + epsilon * direction (no external
    input beyond the context absorbed in the fixed point); the
    activation-space linear system starts at epsilon * direction. The Taylor
    remainder makes this O(epsilon^2) for small epsilon.
    """
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    direction = as_float_vector(direction, model.n, name="direction")
    if epsilon == 0.0:
        return 0.0
    x_traj, _ = simulate(model, fp.x0 + epsilon * direction, None, fp.c, horizon)
    lin_traj = simulate_linear(
        linearize_activation(model, fp), epsilon * direction, None, horizon
    )
    return float(np.max(np.abs((x_traj.states - fp.x0[None, :]) - lin_traj.states)))
