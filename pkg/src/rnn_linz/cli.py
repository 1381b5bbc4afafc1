"""Command-line front-end.

    rnn-linz <simulate|linearize|eigen|equiv|context> --config <path>
             [--out <path>] [--format csv|json]

Each subcommand loads a JSON experiment config (the model path inside it is
resolved relative to the config file), runs one analysis and emits a
deterministic report. Exit codes: 0 success, 2 config/parse error,
3 numerical failure (non-convergence, divergence), 4 property-check failure
(a report was produced but its check did not pass).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import context as ctxmod
from . import linearize as linmod
from . import spectral
from .dynamics import InputSequence, simulate
from .errors import (
    ConfigError,
    DivergenceError,
    EigensolverError,
    InverseRangeError,
    NearZeroGainError,
    NonConvergenceError,
    NonFiniteError,
    RnnLinzError,
    ShapeMismatchError,
    SingularJacobianError,
    ZeroProbeError,
)
from .fixed_points import find_fixed_point
from .model_io import (
    SCHEMA_VERSION,
    ConfigView,
    complex_pair,
    dumps_csv,
    dumps_json,
    load_config,
    load_model,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_PROPERTY = 4

_NUMERICAL_ERRORS = (
    NonConvergenceError,
    SingularJacobianError,
    DivergenceError,
    EigensolverError,
    NearZeroGainError,
)
_INPUT_ERRORS = (
    NonFiniteError,
    ShapeMismatchError,
    InverseRangeError,
    ZeroProbeError,
)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text, code = _run(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _INPUT_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERICAL_ERRORS as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RnnLinzError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rnn-linz",
        description="Fixed points and the two linearizations of discrete-time RNN dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("simulate", "run the exact nonlinear dynamics"),
        ("linearize", "fixed point, gain matrix and both linear systems"),
        ("eigen", "spectrum identity and eigenvector correspondence report"),
        ("equiv", "trajectory equivalence and Taylor-order report"),
        ("context", "per-context instantiations and input-modulation comparison"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="experiment config (JSON)")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--format", default=None, choices=("csv", "json"), dest="fmt")
    return parser


def _run(args) -> tuple:
    cfg = load_config(args.config)
    model_path = cfg.string("model", required=True)
    base = os.path.dirname(os.path.abspath(args.config))
    model = load_model(os.path.join(base, model_path))
    handler = {
        "simulate": _cmd_simulate,
        "linearize": _cmd_linearize,
        "eigen": _cmd_eigen,
        "equiv": _cmd_equiv,
        "context": _cmd_context,
    }[args.command]
    return handler(cfg, model, args.fmt)


def _pick_format(cfg: ConfigView, fmt, command, default, allowed):
    fmt = fmt or default
    if fmt not in allowed:
        cfg.fail("--format", f"{command} supports {'/'.join(sorted(allowed))}, got {fmt!r}")
    return fmt


def _inputs_from_config(cfg: ConfigView, n) -> InputSequence:
    rows = cfg.rows("inputs")
    if rows is None:
        return InputSequence.zeros(n)
    entries = []
    for idx, item in enumerate(rows):
        if not isinstance(item, dict) or "k" not in item or "u" not in item:
            cfg.fail("inputs", f'entry {idx} must be an object {{"k": int, "u": [...]}}')
        k = item["k"]
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            cfg.fail("inputs", f"entry {idx}: k must be a nonnegative integer")
        u = item["u"]
        if not isinstance(u, list) or len(u) != n:
            cfg.fail("inputs", f"entry {idx}: u must be a list of {n} numbers")
        entries.append((k, np.array(u, dtype=float)))
    return InputSequence.from_sparse(n, entries)


def _cmd_simulate(cfg: ConfigView, model, fmt):
    fmt = _pick_format(cfg, fmt, "simulate", "csv", {"csv", "json"})
    n = model.n
    horizon = cfg.integer("horizon", required=True, minimum=0)
    x_init = cfg.vector("x_init", n, default=np.zeros(n))
    c = cfg.vector("c", n, default=np.zeros(n))
    inputs = _inputs_from_config(cfg, n)
    traj_x, traj_r = simulate(model, x_init, inputs, c, horizon)
    if fmt == "json":
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": "simulate",
            "horizon": horizon,
            "activation": traj_x.states,
            "activity": traj_r.states,
        }
        return dumps_json(report), EXIT_OK
    header = (
        ["k"] + [f"x_{i + 1}" for i in range(n)] + [f"r_{i + 1}" for i in range(n)]
    )
    rows = [
        [k] + list(traj_x.states[k]) + list(traj_r.states[k]) for k in range(horizon + 1)
    ]
    return dumps_csv(header, rows), EXIT_OK


def _solve_fp(cfg: ConfigView, model):
    n = model.n
    c = cfg.vector("c", n, default=np.zeros(n))
    x_guess = cfg.vector("x_guess", n, default=np.zeros(n))
    tol = cfg.number("tol", default=1e-12)
    max_iter = cfg.integer("max_iter", default=100, minimum=1)
    return find_fixed_point(model, c=c, x_guess=x_guess, tol=tol, max_iter=max_iter)


def _cmd_linearize(cfg: ConfigView, model, fmt):
    _pick_format(cfg, fmt, "linearize", "json", {"json"})
    fp = _solve_fp(cfg, model)
    D = linmod.gain_matrix(model, fp)
    act = linmod.linearize_activation(model, fp)
    rate = linmod.linearize_activity(model, fp)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "linearize",
        "fixed_point": {
            "x0": fp.x0,
            "r0": fp.r0,
            "c": fp.c,
            "residual": fp.residual,
            "iterations": fp.iterations,
        },
        "gain": D.diag,
        "activation": {"A": act.A, "B": act.B},
        "activity": {"A": rate.A, "B": rate.B},
    }
    return dumps_json(report), EXIT_OK


def _cmd_eigen(cfg: ConfigView, model, fmt):
    _pick_format(cfg, fmt, "eigen", "json", {"json"})
    fp = _solve_fp(cfg, model)
    rep = spectral.correspondence_report(
        model,
        fp,
        pairing_tol_factor=cfg.number("pairing_tol_factor", default=1e-10),
        residual_tol_factor=cfg.number("residual_tol_factor", default=1e-8),
        dot_rel_tol=cfg.number("dot_rel_tol", default=1e-12),
        dot_abs_tol=cfg.number("dot_abs_tol", default=1e-14),
    )
    pairing = rep.pairing
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "eigen",
        "fixed_point_residual": fp.residual,
        "wd_norm": rep.wd_norm,
        "pairing": {
            "pairs": [list(p) for p in pairing.pairs],
            "eigenvalues_x": [complex_pair(z) for z in pairing.eigenvalues_x],
            "eigenvalues_r": [
                complex_pair(pairing.eigenvalues_r[j]) for _, j in pairing.pairs
            ],
            "gaps": pairing.gaps,
            "max_gap": pairing.max_eigenvalue_gap,
            "tol": pairing.tol,
            "passed": pairing.passed,
        },
        "eigenvector_maps": {
            "rows": [
                {
                    "eigenvalue": complex_pair(row.eigenvalue),
                    "left_residual": row.left_residual if row.simple else None,
                    "right_residual": row.right_residual if row.simple else None,
                    "simple": row.simple,
                }
                for row in rep.map_rows
            ],
            "tol": rep.residual_tol,
            "passed": rep.maps_passed,
        },
        "dot_preservation": {
            "rows": [
                {
                    "eigenvalue": complex_pair(row.eigenvalue),
                    "direct": None if row.skipped else complex_pair(row.direct),
                    "mapped": None if row.skipped else complex_pair(row.mapped),
                    "difference": None if row.skipped else row.difference,
                    "skipped": row.skipped,
                    "reason": row.reason,
                }
                for row in rep.dot.rows
            ],
            "rel_tol": rep.dot.rel_tol,
            "abs_tol": rep.dot.abs_tol,
            "passed": rep.dot.passed,
        },
        "passed": rep.passed,
    }
    return dumps_json(report), EXIT_OK if rep.passed else EXIT_PROPERTY


def _cmd_equiv(cfg: ConfigView, model, fmt):
    _pick_format(cfg, fmt, "equiv", "json", {"json"})
    n = model.n
    fp = _solve_fp(cfg, model)
    dev_init = cfg.vector("dev_init", n, required=True)
    horizon = cfg.integer("horizon", default=100, minimum=0)
    rel_tol = cfg.number("equiv_tol", default=1e-12)
    inputs = _inputs_from_config(cfg, n)
    eq = linmod.check_equivalence(model, fp, dev_init, inputs, horizon, tol=rel_tol)

    taylor = None
    traw = cfg.raw.get("taylor")
    if traw is not None:
        if not isinstance(traw, dict):
            cfg.fail("taylor", "must be an object")
        tview = ConfigView(traw, cfg.path)
        direction = tview.vector("direction", n, required=True)
        norm = np.linalg.norm(direction)
        if norm == 0:
            cfg.fail("taylor", "direction must be nonzero")
        direction = direction / norm
        epsilon = tview.number("epsilon", default=1e-2)
        thorizon = tview.integer("horizon", default=5, minimum=1)
        err_full = linmod.linearization_error(model, fp, direction, epsilon, thorizon)
        err_half = linmod.linearization_error(model, fp, direction, epsilon / 2.0, thorizon)
        taylor = {
            "epsilon": epsilon,
            "horizon": thorizon,
            "error_full": err_full,
            "error_half": err_half,
            "ratio": (err_full / err_half) if err_half > 0 else None,
        }

    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "equiv",
        "equivalence": {
            "gaps": eq.gaps,
            "max_gap": eq.max_gap,
            "max_r_norm": eq.max_r_norm,
            "rel_tol": eq.rel_tol,
            "threshold": eq.threshold,
            "passed": eq.passed,
        },
        "taylor": taylor,
        "passed": eq.passed,
    }
    return dumps_json(report), EXIT_OK if eq.passed else EXIT_PROPERTY


def _cmd_context(cfg: ConfigView, model, fmt):
    fmt = _pick_format(cfg, fmt, "context", "json", {"csv", "json"})
    n = model.n
    raw_contexts = cfg.rows("contexts", required=True)
    if not raw_contexts:
        cfg.fail("contexts", "must list at least one context")
    contexts = []
    for idx, item in enumerate(raw_contexts):
        if not isinstance(item, dict) or "label" not in item or "c" not in item:
            cfg.fail("contexts", f'entry {idx} must be an object {{"label": ..., "c": [...]}}')
        sub = ConfigView(item, cfg.path)
        contexts.append(
            ctxmod.Context(
                label=sub.string("label", required=True),
                c=sub.vector("c", n, required=True),
            )
        )
    probe_u = cfg.vector("probe_u", n, required=True)
    tol = cfg.number("tol", default=1e-12)
    sweep = ctxmod.context_sweep(model, contexts, probe_u, tol=tol)

    comparison_rows = [
        [
            comp.labels[0],
            comp.labels[1],
            comp.effective_input_angle_deg,
            comp.effective_input_norm_ratio,
            comp.max_spectrum_gap,
        ]
        for comp in sweep.comparisons
    ]
    all_ok = all(e.ok for e in sweep.entries)
    if fmt == "csv":
        header = ["labelA", "labelB", "angle_deg", "norm_ratio", "max_spectrum_gap"]
        return dumps_csv(header, comparison_rows), EXIT_OK if all_ok else EXIT_NUMERICAL

    entries = []
    for e in sweep.entries:
        if e.ok:
            inst = e.instantiation
            entries.append(
                {
                    "label": e.context.label,
                    "ok": True,
                    "x0": inst.fp.x0,
                    "gain": inst.D.diag,
                    "residual": inst.fp.residual,
                    "iterations": inst.fp.iterations,
                }
            )
        else:
            entries.append({"label": e.context.label, "ok": False, "error": e.error})
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "context",
        "probe_u": probe_u,
        "entries": entries,
        "comparisons": [
            {
                "label_a": comp.labels[0],
                "label_b": comp.labels[1],
                "angle_deg": comp.effective_input_angle_deg,
                "norm_ratio": comp.effective_input_norm_ratio,
                "max_spectrum_gap": comp.max_spectrum_gap,
                "activation_input_identical": comp.activation_input_identical,
            }
            for comp in sweep.comparisons
        ],
        "all_converged": all_ok,
    }
    return dumps_json(report), EXIT_OK if all_ok else EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
