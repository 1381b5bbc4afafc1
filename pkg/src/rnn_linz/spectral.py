"""Eigenstructure of the two dynamics matrices W D and D W.

The two matrices share their spectrum, and their eigenvectors map onto each
other through the diagonal gain matrix D:

    left:   s_r^T left eigenvector of D W  =>  s_r^T D left eigenvector of W D
    right:  rho_r right eigenvector of D W =>  D^{-1} rho_r right eigenvector of W D

both at the same eigenvalue, which also preserves the left-right dot product
s^T rho. All checks here are residual-based: mapped vectors are certified by
how well they satisfy the eigen equations, never by comparison against an
independently computed (and arbitrarily scaled) eigenvector.

Conventions: left eigenvectors are stored as plain vectors s used in row
form, s^T A = lambda s^T (transpose, not conjugate transpose). Complex
arithmetic is used throughout, even for real matrices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import RnnModel
from .errors import EigensolverError, NearZeroGainError
from .fixed_points import FixedPoint
from .linearize import NEAR_ZERO_GAIN, GainMatrix, gain_matrix

# Eigenvalues closer than this to a neighbor are treated as near-degenerate:
# their individual eigenvectors are ill-conditioned, so per-vector checks
# are skipped and only the multiset spectrum identity is asserted.
SIMPLE_GAP = 1e-6


@dataclass(frozen=True)
class EigenTriple:
    """One eigenvalue with paired right (A rho = lambda rho) and left
    (s^T A = lambda s^T) eigenvectors.

    The right vector has unit 2-norm with its largest-magnitude component
    rotated to the positive real axis; the left vector follows the same
    convention. Mapped vectors (see map_* functions) are never re-normalized.
    """

    eigenvalue: complex
    right: np.ndarray
    left: np.ndarray


@dataclass(frozen=True)
class SpectrumPairing:
    """Bijection between the eigenvalue multisets of W D and D W."""

    pairs: tuple  # ((index into eig(WD), index into eig(DW)), ...)
    eigenvalues_x: np.ndarray  # eig(WD), canonical order
    eigenvalues_r: np.ndarray  # eig(DW), original order; pairs index into it
    gaps: np.ndarray
    max_eigenvalue_gap: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_eigenvalue_gap <= self.tol


@dataclass(frozen=True)
class DotPreservationRow:
    eigenvalue: complex
    direct: complex  # s_r^T rho_r
    mapped: complex  # (s_r^T D)(D^{-1} rho_r)
    difference: float
    skipped: bool
    reason: str = ""


@dataclass(frozen=True)
class DotPreservationReport:
    rows: tuple
    max_difference: float  # over rows actually checked
    rel_tol: float
    abs_tol: float

    @property
    def passed(self) -> bool:
        return all(
            row.skipped or row.difference <= self.rel_tol * abs(row.direct) + self.abs_tol
            for row in self.rows
        )


def eigendecompose(A) -> list:
    """Full dense nonsymmetric eigendecomposition of A.

    Returns n EigenTriples (with multiplicity), in canonical order: real part
    descending, then imaginary part descending, so conjugate pairs are
    adjacent. Left vectors are computed as right eigenvectors of A^T and
    re-paired to the eigenvalues of A by nearest-value matching.
    """
    A = np.asarray(A, dtype=float)
    try:
        evals, V = np.linalg.eig(A)
        evals_t, U = np.linalg.eig(A.T)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"dense eigensolver failed: {exc}", cond_estimate=_cond_or_none(A)
        ) from exc
    order = np.lexsort((-evals.imag, -evals.real))
    evals, V = evals[order], V[:, order]
    left_idx = _greedy_nearest(evals, evals_t)

    triples = []
    for i, lam in enumerate(evals):
        right = _normalize_phase(V[:, i].astype(complex))
        left = _normalize_phase(U[:, left_idx[i]].astype(complex))
        triples.append(EigenTriple(eigenvalue=complex(lam), right=right, left=left))
    return triples


def right_residual(A, rho, eigenvalue) -> float:
    """2-norm of A rho - lambda rho."""
    return float(np.linalg.norm(A @ rho - eigenvalue * rho))


def left_residual(A, s, eigenvalue) -> float:
    """2-norm of s^T A - lambda s^T (plain transpose)."""
    return float(np.linalg.norm(s @ A - eigenvalue * s))


def map_left_eigvec(s_r, D: GainMatrix) -> np.ndarray:
    """s_x = s_r^T D componentwise: a left eigenvector of W D."""
    return np.asarray(s_r, dtype=complex) * D.diag


def map_right_eigvec(rho_r, D: GainMatrix) -> np.ndarray:
    """rho_x = D^{-1} rho_r componentwise: a right eigenvector of W D."""
    small = np.flatnonzero(np.abs(D.diag) <= NEAR_ZERO_GAIN)
    if small.size:
        raise NearZeroGainError(small[0], D.diag[small[0]])
    return np.asarray(rho_r, dtype=complex) / D.diag


def verify_spectrum_identity(model: RnnModel, fp: FixedPoint, tol: float) -> SpectrumPairing:
    """Pair the eigenvalue multisets of W D and D W and measure the gaps."""
    D = gain_matrix(model, fp)
    wd = model.W * D.diag[None, :]
    dw = D.diag[:, None] * model.W
    ev_x = np.linalg.eigvals(wd)
    ev_r = np.linalg.eigvals(dw)
    order = np.lexsort((-ev_x.imag, -ev_x.real))
    ev_x = ev_x[order]
    match = _greedy_nearest(ev_x, ev_r)
    gaps = np.abs(ev_x - ev_r[match])
    return SpectrumPairing(
        pairs=tuple((i, int(match[i])) for i in range(len(ev_x))),
        eigenvalues_x=ev_x,
        eigenvalues_r=ev_r,
        gaps=gaps,
        max_eigenvalue_gap=float(np.max(gaps)) if gaps.size else 0.0,
        tol=float(tol),
    )


def verify_dot_preservation(
    triples_x,
    triples_r,
    pairing: SpectrumPairing,
    D: GainMatrix,
    rel_tol: float = 1e-12,
    abs_tol: float = 1e-14,
) -> DotPreservationReport:
    """Check s_r^T rho_r == (s_r^T D)(D^{-1} rho_r) over the pairing.

    The identity is exact algebra on the mapped vectors, so it holds
    regardless of eigenvector normalization; the tolerances cover floating
    point only. Near-degenerate eigenvalues are flagged and skipped.
    """
    gaps_x = _min_neighbor_gap([t.eigenvalue for t in triples_x])
    gaps_r = _min_neighbor_gap([t.eigenvalue for t in triples_r])
    rows = []
    checked = [0.0]
    for ix, ir in pairing.pairs:
        lam = triples_r[ir].eigenvalue
        if gaps_x[ix] < SIMPLE_GAP or gaps_r[ir] < SIMPLE_GAP:
            rows.append(
                DotPreservationRow(
                    eigenvalue=lam,
                    direct=0j,
                    mapped=0j,
                    difference=0.0,
                    skipped=True,
                    reason="skipped: near-degenerate",
                )
            )
            continue
        s_r = triples_r[ir].left
        rho_r = triples_r[ir].right
        direct = complex(s_r @ rho_r)  # bilinear, no conjugation
        mapped = complex(map_left_eigvec(s_r, D) @ map_right_eigvec(rho_r, D))
        diff = abs(direct - mapped)
        rows.append(
            DotPreservationRow(
                eigenvalue=lam, direct=direct, mapped=mapped, difference=diff, skipped=False
            )
        )
        checked.append(diff)
    return DotPreservationReport(
        rows=tuple(rows),
        max_difference=max(checked),
        rel_tol=float(rel_tol),
        abs_tol=float(abs_tol),
    )


@dataclass(frozen=True)
class MapResidualRow:
    """Residuals of the mapped eigenvectors of one pair against W D."""

    eigenvalue: complex
    left_residual: float
    right_residual: float
    simple: bool


@dataclass(frozen=True)
class CorrespondenceReport:
    """Everything the eigen analysis produces for one model + fixed point."""

    wd_norm: float
    pairing: SpectrumPairing
    map_rows: tuple
    residual_tol: float
    dot: DotPreservationReport

    @property
    def maps_passed(self) -> bool:
        return all(
            (not row.simple)
            or (row.left_residual <= self.residual_tol and row.right_residual <= self.residual_tol)
            for row in self.map_rows
        )

    @property
    def passed(self) -> bool:
        return self.pairing.passed and self.maps_passed and self.dot.passed


def correspondence_report(
    model: RnnModel,
    fp: FixedPoint,
    pairing_tol_factor: float = 1e-10,
    residual_tol_factor: float = 1e-8,
    dot_rel_tol: float = 1e-12,
    dot_abs_tol: float = 1e-14,
) -> CorrespondenceReport:
    """Run the full spectral correspondence analysis at one fixed point.

    Tolerance factors are scaled by the 2-norm of W D.
    """
    D = gain_matrix(model, fp)
    wd = model.W * D.diag[None, :]
    dw = D.diag[:, None] * model.W
    wd_norm = float(np.linalg.norm(wd, 2))
    pairing = verify_spectrum_identity(model, fp, tol=pairing_tol_factor * wd_norm)
    triples_x = eigendecompose(wd)
    triples_r = eigendecompose(dw)
    gaps_x = _min_neighbor_gap([t.eigenvalue for t in triples_x])
    gaps_r = _min_neighbor_gap([t.eigenvalue for t in triples_r])

    rows = []
    for ix, ir in pairing.pairs:
        t_r = triples_r[ir]
        simple = bool(gaps_x[ix] >= SIMPLE_GAP and gaps_r[ir] >= SIMPLE_GAP)
        if simple:
            lres = left_residual(wd, map_left_eigvec(t_r.left, D), t_r.eigenvalue)
            rres = right_residual(wd, map_right_eigvec(t_r.right, D), t_r.eigenvalue)
        else:
            lres = rres = float("nan")
        rows.append(
            MapResidualRow(
                eigenvalue=t_r.eigenvalue,
                left_residual=lres,
                right_residual=rres,
                simple=simple,
            )
        )
    dot = verify_dot_preservation(
        triples_x, triples_r, pairing, D, rel_tol=dot_rel_tol, abs_tol=dot_abs_tol
    )
    return CorrespondenceReport(
        wd_norm=wd_norm,
        pairing=pairing,
        map_rows=tuple(rows),
        residual_tol=residual_tol_factor * wd_norm,
        dot=dot,
    )


def _normalize_phase(v):
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    pivot = v[k]
    return v * (np.conj(pivot) / abs(pivot))


def _greedy_nearest(ref, pool):
    """For each ref value in order, index of the nearest unused pool value."""
    pool = np.asarray(pool)
    used = np.zeros(len(pool), dtype=bool)
    out = np.empty(len(ref), dtype=int)
    for i, lam in enumerate(ref):
        dist = np.abs(pool - lam)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        used[j] = True
        out[i] = j
    return out


def _min_neighbor_gap(eigenvalues):
    ev = np.asarray(eigenvalues)
    n = len(ev)
    if n <= 1:
        return np.full(n, np.inf)
    dist = np.abs(ev[:, None] - ev[None, :])
    np.fill_diagonal(dist, np.inf)
    return dist.min(axis=1)


def _cond_or_none(A):
    try:
        return float(np.linalg.cond(A))
    except np.linalg.LinAlgError:
        return None
