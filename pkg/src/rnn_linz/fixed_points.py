"""Fixed points of the dynamics under a constant context input.

A fixed point satisfies x0 = W g(x0) + c. It is located by damped Newton
iteration on the residual map G(x) = W g(x) + c - x, whose Jacobian is
W D(x) - I with D(x) the diagonal of g'(x). Newton certifies the point to
machine precision and, unlike forward simulation, also works at unstable
fixed points.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgWarning, lapack, lu_factor, lu_solve

from . import nonlinearity as nlmod
from ._arrays import as_float_vector
from .dynamics import RnnModel
from .errors import NonConvergenceError, SingularJacobianError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100

# Condition estimates beyond this mark the Newton system as singular.
COND_LIMIT = 1e14

# How many times a rejected Newton step is halved before giving up.
MAX_HALVINGS = 30


@dataclass(frozen=True)
class FixedPoint:
    """A certified fixed point.

    r0 is derived from x0 (r0 = g(x0)), never stored independently of that
    relation. `residual` is the ∞-norm of W g(x0) + c - x0 at acceptance;
    `residual_history` traces the solver, one entry per Newton iterate
    starting with the initial guess.
    """

    x0: np.ndarray
    r0: np.ndarray
    c: np.ndarray
    residual: float
    iterations: int
    residual_history: tuple = ()

    @property
    def n(self) -> int:
        return self.x0.shape[0]


def residual_norm(model: RnnModel, x, c) -> float:
    """∞-norm of the fixed-point residual W g(x) + c - x."""
    return float(np.max(np.abs(model.W @ nlmod.apply(model.nl, x) + c - x)))


def find_fixed_point(
    model: RnnModel,
    c=None,
    x_guess=None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> FixedPoint:
    """Damped Newton solve of W g(x) + c = x.

    Parameters
    ----------
    model : RnnModel
    c : context vector, default zero.
    x_guess : starting activation vector, default zero.
    tol : required ∞-norm of the residual (> 0).
    max_iter : Newton iteration budget (>= 1).

    Returns
    -------
    FixedPoint with residual <= tol.

    Raises
    ------
    NonConvergenceError
        residual still above tol after max_iter iterations, or no damped
        step could reduce it. Carries the best residual seen.
    SingularJacobianError
        the factorized Newton system has condition estimate > 1e14;
        the caller may retry from a different guess.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    n = model.n
    c = np.zeros(n) if c is None else as_float_vector(c, n, name="c")
    x = np.zeros(n) if x_guess is None else as_float_vector(x_guess, n, name="x_guess").copy()

    res = residual_norm(model, x, c)
    history = [res]
    iterations = 0
    for _ in range(max_iter):
        if res <= tol:
            break
        gvec = model.W @ nlmod.apply(model.nl, x) + c - x
        jac = model.W * nlmod.derivative(model.nl, x)[None, :] - np.eye(n)
        anorm = np.linalg.norm(jac, 1)
        with warnings.catch_warnings():
            # exact singularity is diagnosed below via the rcond estimate
            warnings.simplefilter("ignore", LinAlgWarning)
            lu, piv = lu_factor(jac)
        rcond, info = lapack.dgecon(lu, anorm)
        if info != 0 or rcond < 1.0 / COND_LIMIT:
            raise SingularJacobianError(np.inf if rcond == 0 else 1.0 / max(rcond, 1e-300))
        delta = lu_solve((lu, piv), -gvec)

        step_ok = False
        cand, cres = x, res
        for _ in range(MAX_HALVINGS + 1):
            cand = x + delta
            cres = residual_norm(model, cand, c)
            if cres < res:
                step_ok = True
                break
            delta = 0.5 * delta
        if not step_ok:
            break  # stalled: no damped step improves the residual
        x, res = cand, cres
        iterations += 1
        history.append(res)

    if res > tol:
        raise NonConvergenceError(best_residual=res, iterations=iterations)
    return FixedPoint(
        x0=x,
        r0=nlmod.apply(model.nl, x),
        c=c,
        residual=res,
        iterations=iterations,
        residual_history=tuple(history),
    )


def verify_fixed_point(model: RnnModel, fp: FixedPoint, tol: float) -> bool:
    """Recompute the residual from scratch and compare against tol."""
    x0 = as_float_vector(fp.x0, model.n, name="x0")
    c = as_float_vector(fp.c, model.n, name="c")
    return residual_norm(model, x0, c) <= tol
