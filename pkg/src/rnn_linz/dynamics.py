"""The nonlinear RNN and its exact simulation.

The update is

    x^{k+1} = W g(x^k) + u^k + c
    r^k     = g(x^k)

where x is the vector of unit activations (net inputs), r the vector of unit
activities (outputs), W the recurrent weight matrix, u^k an external input at
step k and c a constant context input held fixed over a run. Inputs are zero
before k = 0 and after the provided sequence ends.

Simulation returns the same run in both coordinates: the activation
trajectory obeys the update above, and the activity trajectory is g applied
to it pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import nonlinearity as nlmod
from ._arrays import as_float_matrix, as_float_vector
from .errors import DivergenceError, ShapeMismatchError

ACTIVATION = "activation"
ACTIVITY = "activity"

# States with ∞-norm beyond this (or any non-finite entry) abort a run.
DIVERGENCE_NORM = 1e12


@dataclass(frozen=True)
class RnnModel:
    """A recurrent network: square weight matrix W plus a pointwise g."""

    W: np.ndarray
    nl: nlmod.Nonlinearity

    def __post_init__(self):
        W = as_float_matrix(self.W, name="W")
        if W.shape[0] != W.shape[1]:
            raise ShapeMismatchError(f"W must be square, got shape {W.shape}")
        object.__setattr__(self, "W", W)

    @property
    def n(self) -> int:
        return self.W.shape[0]


@dataclass(frozen=True)
class InputSequence:
    """External inputs u^k for k = 0, 1, ...; zero beyond the stored steps."""

    n: int
    steps: np.ndarray  # shape (T, n); T may be 0

    def __post_init__(self):
        steps = np.asarray(self.steps, dtype=float)
        if steps.size == 0:
            steps = steps.reshape(0, self.n)
        if steps.ndim != 2 or steps.shape[1] != self.n:
            raise ShapeMismatchError(
                f"input steps must have shape (T, {self.n}), got {steps.shape}"
            )
        if not np.all(np.isfinite(steps)):
            raise ShapeMismatchError("input steps contain non-finite entries")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def zeros(cls, n: int) -> "InputSequence":
        return cls(n, np.zeros((0, n)))

    @classmethod
    def from_array(cls, steps) -> "InputSequence":
        steps = np.asarray(steps, dtype=float)
        return cls(steps.shape[1], steps)

    @classmethod
    def from_sparse(cls, n: int, entries) -> "InputSequence":
        """Build from (k, vector) pairs; unlisted steps are zero."""
        entries = [(int(k), as_float_vector(u, n, name=f"u[{k}]")) for k, u in entries]
        if not entries:
            return cls.zeros(n)
        length = max(k for k, _ in entries) + 1
        steps = np.zeros((length, n))
        for k, u in entries:
            if k < 0:
                raise ShapeMismatchError(f"input step index {k} is negative")
            steps[k] += u
        return cls(n, steps)

    def at(self, k: int) -> np.ndarray:
        if 0 <= k < self.steps.shape[0]:
            return self.steps[k]
        return np.zeros(self.n)


@dataclass(frozen=True)
class Trajectory:
    """States of one run, one vector per timepoint starting at k = 0."""

    kind: str  # ACTIVATION or ACTIVITY
    states: np.ndarray  # shape (horizon + 1, n)

    def __post_init__(self):
        if self.kind not in (ACTIVATION, ACTIVITY):
            raise ValueError(f"unknown trajectory kind {self.kind!r}")

    @property
    def horizon(self) -> int:
        return self.states.shape[0] - 1

    @property
    def n(self) -> int:
        return self.states.shape[1]


def step(model: RnnModel, x, u=None, c=None) -> np.ndarray:
    """One exact update: W g(x) + u + c."""
    n = model.n
    x = as_float_vector(x, n, name="x")
    u = np.zeros(n) if u is None else as_float_vector(u, n, name="u")
    c = np.zeros(n) if c is None else as_float_vector(c, n, name="c")
    return model.W @ nlmod.apply(model.nl, x) + u + c


def simulate(model: RnnModel, x_init, inputs=None, c=None, horizon: int = 0):
    """Run the nonlinear dynamics for `horizon` steps.

    Returns (activation_trajectory, activity_trajectory) for the same run;
    the activity states are g of the activation states, computed pointwise.

    Raises DivergenceError (with the step index) if a state goes non-finite
    or its ∞-norm exceeds DIVERGENCE_NORM.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    n = model.n
    x = as_float_vector(x_init, n, name="x_init")
    c = np.zeros(n) if c is None else as_float_vector(c, n, name="c")
    inputs = InputSequence.zeros(n) if inputs is None else inputs
    if inputs.n != n:
        raise ShapeMismatchError(f"inputs have width {inputs.n}, expected {n}")

    xs = np.empty((horizon + 1, n))
    rs = np.empty((horizon + 1, n))
    xs[0] = x
    rs[0] = nlmod.apply(model.nl, x)
    for k in range(horizon):
        nxt = model.W @ rs[k] + inputs.at(k) + c
        _check_finite_state(nxt, k + 1)
        xs[k + 1] = nxt
        rs[k + 1] = nlmod.apply(model.nl, nxt)
    return Trajectory(ACTIVATION, xs), Trajectory(ACTIVITY, rs)


def _check_finite_state(v, step_index):
    if not np.all(np.isfinite(v)) or np.max(np.abs(v)) > DIVERGENCE_NORM:
        raise DivergenceError(step_index)
