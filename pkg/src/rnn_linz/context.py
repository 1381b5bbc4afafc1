"""Context-dependent instantiations of one network.

A context is a constant input vector c_R held fixed during a run. Each
context selects its own fixed point, hence its own gain matrix D_R and its
own pair of linearized systems:

    x^{k+1} = W D_R x^k + u^k
    r^{k+1} = D_R W r^k + D_R u^k

The input matrix is the identity in activation space for every context, but
D_R in activity space — so context-dependent modulation of a probe input u
is observable only in the activity-space linearization. compare_contexts
makes that dichotomy an explicit, testable output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._arrays import as_float_vector
from .dynamics import RnnModel
from .errors import RnnLinzError, ZeroProbeError
from .fixed_points import FixedPoint, find_fixed_point
from .linearize import (
    GainMatrix,
    LinearizedSystem,
    gain_matrix,
    linearize_activation,
    linearize_activity,
)
from .spectral import _greedy_nearest


@dataclass(frozen=True)
class Context:
    """A labelled constant input vector."""

    label: str
    c: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", as_float_vector(self.c, name="c"))


@dataclass(frozen=True)
class ContextInstantiation:
    """Fixed point, gains and both linear systems for one context."""

    context: Context
    fp: FixedPoint
    D: GainMatrix
    activation_sys: LinearizedSystem
    activity_sys: LinearizedSystem


@dataclass(frozen=True)
class ContextComparison:
    """How two contexts reshape the same probe input u.

    activation_input_identical records that both activation-space input
    matrices are exactly the identity; the modulation lives entirely in the
    activity-space effective inputs D_A u vs D_B u.
    """

    labels: tuple
    effective_input_angle_deg: float
    effective_input_norm_ratio: float
    activation_input_identical: bool
    spectrum_gaps: np.ndarray
    max_spectrum_gap: float


@dataclass(frozen=True)
class SweepEntry:
    """One context's outcome inside a sweep; `error` is set on failure."""

    context: Context
    instantiation: ContextInstantiation | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.instantiation is not None


@dataclass(frozen=True)
class ContextSweep:
    entries: tuple
    comparisons: tuple


def instantiate_context(
    model: RnnModel,
    ctx: Context,
    x_guess=None,
    tol: float = 1e-12,
) -> ContextInstantiation:
    """Solve the fixed point under ctx.c and build D plus both systems."""
    fp = find_fixed_point(model, c=ctx.c, x_guess=x_guess, tol=tol)
    return ContextInstantiation(
        context=ctx,
        fp=fp,
        D=gain_matrix(model, fp),
        activation_sys=linearize_activation(model, fp),
        activity_sys=linearize_activity(model, fp),
    )


def compare_contexts(
    model: RnnModel,
    ctx_a: Context,
    ctx_b: Context,
    u,
    tol: float = 1e-12,
) -> ContextComparison:
    """Compare the effective inputs and spectra of two context instantiations."""
    inst_a = instantiate_context(model, ctx_a, tol=tol)
    inst_b = instantiate_context(model, ctx_b, tol=tol)
    return compare_instantiations(inst_a, inst_b, u)


def compare_instantiations(
    inst_a: ContextInstantiation,
    inst_b: ContextInstantiation,
    u,
) -> ContextComparison:
    """As compare_contexts, for already-solved instantiations."""
    n = inst_a.D.n
    u = as_float_vector(u, n, name="u")
    if not np.any(u):
        raise ZeroProbeError("probe input u is zero")
    eff_a = inst_a.D.diag * u
    eff_b = inst_b.D.diag * u
    identity = np.eye(n)
    ident_ok = bool(
        np.array_equal(inst_a.activation_sys.B, identity)
        and np.array_equal(inst_b.activation_sys.B, identity)
    )
    ev_a = np.linalg.eigvals(inst_a.activation_sys.A)
    ev_b = np.linalg.eigvals(inst_b.activation_sys.A)
    order = np.lexsort((-ev_a.imag, -ev_a.real))
    ev_a = ev_a[order]
    gaps = np.abs(ev_a - ev_b[_greedy_nearest(ev_a, ev_b)])
    return ContextComparison(
        labels=(inst_a.context.label, inst_b.context.label),
        effective_input_angle_deg=angle_between_deg(eff_a, eff_b),
        effective_input_norm_ratio=float(np.linalg.norm(eff_a) / np.linalg.norm(eff_b)),
        activation_input_identical=ident_ok,
        spectrum_gaps=gaps,
        max_spectrum_gap=float(np.max(gaps)) if gaps.size else 0.0,
    )


def context_sweep(
    model: RnnModel,
    contexts,
    u,
    tol: float = 1e-12,
) -> ContextSweep:
    """Instantiate every context and compare all pairs.

    Solves warm-start from the previous context's fixed point; per-context
    failures are recorded in place and excluded from the comparisons.
    Output order is deterministic: input order for entries, lexicographic
    index pairs for comparisons.
    """
    contexts = list(contexts)
    if not contexts:
        raise ValueError("context_sweep needs at least one context")
    entries = []
    guess = None
    for ctx in contexts:
        try:
            inst = instantiate_context(model, ctx, x_guess=guess, tol=tol)
        except RnnLinzError as exc:
            entries.append(SweepEntry(context=ctx, error=f"{type(exc).__name__}: {exc}"))
            continue
        entries.append(SweepEntry(context=ctx, instantiation=inst))
        guess = inst.fp.x0
    comparisons = []
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if entries[i].ok and entries[j].ok:
                comparisons.append(
                    compare_instantiations(entries[i].instantiation, entries[j].instantiation, u)
                )
    return ContextSweep(entries=tuple(entries), comparisons=tuple(comparisons))


def angle_between_deg(a, b) -> float:
    """Angle between two nonzero vectors in degrees.

    Uses the two-argument arctangent form (half-angle of the normalized sum
    and difference), which is stable near 0 and 180 degrees.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    na = a / np.linalg.norm(a)
    nb = b / np.linalg.norm(b)
    return math.degrees(
        2.0 * math.atan2(np.linalg.norm(na - nb), np.linalg.norm(na + nb))
    )
