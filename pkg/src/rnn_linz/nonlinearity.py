"""Pointwise nonlinearities with exact derivatives and inverses.

Every catalogued nonlinearity is strictly increasing on the reals, so it is
invertible on its range and its slope is positive everywhere. Derivatives are
closed forms, never finite differences: the diagonal gains built from them
feed theorems that are checked near machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._arrays import as_float_vector
from .errors import InverseRangeError

TANH = "tanh"
LOGISTIC = "logistic"
IDENTITY = "identity"

KINDS = (TANH, LOGISTIC, IDENTITY)

# Inverse inputs closer than this to a range boundary are rejected, not
# clamped: clamping would silently corrupt recovered operating points.
BOUNDARY_MARGIN = 1e-12


@dataclass(frozen=True)
class Nonlinearity:
    """A pointwise map g with slope parameter `param` (g is param-scaled).

    kind:  one of "tanh", "logistic", "identity"
    param: positive slope/gain; g(x) = base(param * x) for tanh/logistic
           and g(x) = param * x for identity. Default 1.0.
    """

    kind: str
    param: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown nonlinearity kind {self.kind!r}")
        if not (np.isfinite(self.param) and self.param > 0):
            raise ValueError(f"param must be finite and positive, got {self.param!r}")

    @property
    def range_bounds(self):
        """Open interval (lo, hi) of attainable output values."""
        if self.kind == TANH:
            return (-1.0, 1.0)
        if self.kind == LOGISTIC:
            return (0.0, 1.0)
        return (-np.inf, np.inf)


def apply(nl: Nonlinearity, x) -> np.ndarray:
    """Elementwise g(x)."""
    x = as_float_vector(x, name="x")
    a = nl.param
    if nl.kind == TANH:
        return np.tanh(a * x)
    if nl.kind == LOGISTIC:
        return _logistic(a * x)
    return a * x


def derivative(nl: Nonlinearity, x) -> np.ndarray:
    """Elementwise g'(x); strictly positive for every catalogued kind."""
    x = as_float_vector(x, name="x")
    a = nl.param
    if nl.kind == TANH:
        return a * (1.0 - np.tanh(a * x) ** 2)
    if nl.kind == LOGISTIC:
        s = _logistic(a * x)
        return a * s * (1.0 - s)
    return np.full_like(x, a)


def inverse(nl: Nonlinearity, r) -> np.ndarray:
    """Elementwise g^{-1}(r).

    Each entry must lie strictly inside the range of g, with a margin of
    BOUNDARY_MARGIN; offending entries raise InverseRangeError naming the
    first bad index.
    """
    r = as_float_vector(r, name="r")
    lo, hi = nl.range_bounds
    if np.isfinite(lo):
        bad = np.flatnonzero((r <= lo + BOUNDARY_MARGIN) | (r >= hi - BOUNDARY_MARGIN))
        if bad.size:
            raise InverseRangeError(bad[0], r[bad[0]])
    a = nl.param
    if nl.kind == TANH:
        return np.arctanh(r) / a
    if nl.kind == LOGISTIC:
        # log-ratio form, stable near both boundaries
        return (np.log(r) - np.log1p(-r)) / a
    return r / a


def _logistic(z):
    # piecewise form avoids overflow in exp for large |z|
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def from_dict(d: dict) -> Nonlinearity:
    """Build from the model-file form {"kind": ..., "param": optional}."""
    return Nonlinearity(kind=d["kind"], param=float(d.get("param", 1.0)))


def to_dict(nl: Nonlinearity) -> dict:
    """Model-file form; `param` emitted only when it differs from 1."""
    d = {"kind": nl.kind}
    if nl.param != 1.0:
        d["param"] = nl.param
    return d
