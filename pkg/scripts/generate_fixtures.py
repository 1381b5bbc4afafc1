"""One-shot generator for the committed test fixtures.

Produces 20 tanh models (five per size in {2, 5, 10, 50}) spanning stable and
unstable fixed points at varied nonzero contexts, together with the committed
deviation vectors, input sequences and probe directions the acceptance suite
replays. Every case is validated here, at generation time, against the same
bounds the acceptance criteria assert, so the committed corpus is known-good.

The tool itself contains no RNG; randomness lives only in this script, which
is run once and its outputs committed. Regenerate with:

    python scripts/generate_fixtures.py
"""

import json
from pathlib import Path

import numpy as np

from rnn_linz import (
    InputSequence,
    Nonlinearity,
    RnnModel,
    check_equivalence,
    correspondence_report,
    find_fixed_point,
    gain_matrix,
    linearization_error,
    save_model,
    verify_fixed_point,
)
from rnn_linz.errors import RnnLinzError

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

SIZES = [2, 5, 10, 50]
# target spectral radius of W and context ∞-norm, five cases per size
RADII = [0.5, 0.8, 0.95, 1.15, 1.35]
CONTEXT_NORMS = [0.8, 0.6, 1.0, 0.3, 0.3]

HORIZON = 100
DEV_NORM = 1e-3
INPUT_NORM = 1e-3


def spectral_radius(A):
    return float(np.max(np.abs(np.linalg.eigvals(A))))


def make_case(n, case_idx, radius, c_norm):
    """Search seeds deterministically until a case passes every validation."""
    for attempt in range(50):
        seed = 1_000_000 + 10_000 * n + 100 * case_idx + attempt
        rng = np.random.default_rng(seed)
        G = rng.normal(size=(n, n)) / np.sqrt(n)
        W = np.round(G * (radius / spectral_radius(G)), 9)
        c = rng.normal(size=n)
        c = np.round(c * (c_norm / np.max(np.abs(c))), 9)
        dev = rng.normal(size=n)
        dev = np.round(dev * (DEV_NORM / np.max(np.abs(dev))), 9)
        raw = rng.normal(size=(HORIZON, n))
        inputs = np.round(raw * (INPUT_NORM / np.max(np.abs(raw))), 9)
        direction = rng.normal(size=n)
        direction = np.round(direction / np.linalg.norm(direction), 12)

        case = validate_case(n, W, c, dev, inputs, direction, seed)
        if case is not None:
            return case
    raise RuntimeError(f"no valid case found for n={n}, case={case_idx}")


def validate_case(n, W, c, dev, inputs, direction, seed):
    model = RnnModel(W=W, nl=Nonlinearity("tanh"))
    try:
        fp = find_fixed_point(model, c=c, tol=1e-12)
    except RnnLinzError:
        return None
    if not verify_fixed_point(model, fp, 1e-12):
        return None
    if np.max(np.abs(fp.x0)) < 0.1:
        return None  # too linear: the Taylor check would see cubic terms

    D = gain_matrix(model, fp)
    wd = W * D.diag[None, :]
    wd_radius = spectral_radius(wd)
    wd_norm = float(np.linalg.norm(wd, 2))

    seq = InputSequence.from_array(inputs)
    try:
        eq = check_equivalence(model, fp, dev, seq, HORIZON, tol=1e-12)
    except RnnLinzError:
        return None
    if not eq.passed:
        return None

    rep = correspondence_report(model, fp)
    if not rep.passed:
        return None
    simple = [row for row in rep.map_rows if row.simple]
    if len(simple) < max(1, n // 2):
        return None  # too many near-degenerate eigenvalues to be useful
    if any(
        row.left_residual > 0.5e-8 * wd_norm or row.right_residual > 0.5e-8 * wd_norm
        for row in simple
    ):
        return None

    if n in (2, 5):
        full = linearization_error(model, fp, direction, 1e-2, 5)
        half = linearization_error(model, fp, direction, 5e-3, 5)
        if half == 0 or not 3.6 <= full / half <= 4.4:
            return None

    return {
        "seed": seed,
        "n": n,
        "W": W,
        "c": c,
        "dev_init": dev,
        "inputs": inputs,
        "taylor_direction": direction,
        "wd_radius": wd_radius,
        "stable": wd_radius < 1.0,
    }


def main():
    models_dir = FIXTURES / "models"
    cli_dir = FIXTURES / "cli"
    models_dir.mkdir(parents=True, exist_ok=True)
    cli_dir.mkdir(parents=True, exist_ok=True)

    cases = []
    for n in SIZES:
        batch = []
        for idx, (radius, c_norm) in enumerate(zip(RADII, CONTEXT_NORMS)):
            case = make_case(n, idx, radius, c_norm)
            name = f"case{len(cases):02d}_n{n}"
            model_file = f"models/{name}.json"
            save_model(
                RnnModel(W=case["W"], nl=Nonlinearity("tanh")), FIXTURES / model_file
            )
            batch.append(case)
            cases.append(
                {
                    "name": name,
                    "model": model_file,
                    "n": n,
                    "seed": case["seed"],
                    "c": case["c"].tolist(),
                    "dev_init": case["dev_init"].tolist(),
                    "inputs": case["inputs"].tolist(),
                    "taylor_direction": case["taylor_direction"].tolist(),
                    "wd_radius": case["wd_radius"],
                    "stable": case["stable"],
                }
            )
            print(
                f"{name}: radius(WD)={case['wd_radius']:.3f} "
                f"{'stable' if case['stable'] else 'unstable'}"
            )
        if not any(b["stable"] for b in batch) or all(b["stable"] for b in batch):
            raise RuntimeError(f"n={n}: need a mix of stable and unstable cases")

    with open(FIXTURES / "cases.json", "w") as fh:
        json.dump(cases, fh, separators=(",", ":"))
        fh.write("\n")

    write_cli_fixtures(cli_dir)
    print(f"wrote {len(cases)} cases to {FIXTURES}")


def write_cli_fixtures(cli_dir):
    """Small committed configs exercising every CLI subcommand."""
    derived = {"n": 2, "W": [[0.0, 0.5], [0.5, 0.0]], "nonlinearity": {"kind": "tanh"}}
    identity = {"n": 2, "W": [[0.3, 0.1], [0.0, 0.2]], "nonlinearity": {"kind": "identity"}}
    docs = {
        "model_derived.json": derived,
        "model_identity.json": identity,
        "simulate.json": {
            "model": "model_derived.json",
            "horizon": 50,
            "x_init": [0.1, 0.0],
            "inputs": [{"k": 0, "u": [0.05, 0.0]}, {"k": 10, "u": [0.0, -0.02]}],
        },
        "linearize.json": {"model": "model_derived.json", "c": [0.1, 0.0]},
        "eigen.json": {"model": "model_derived.json", "c": [0.1, 0.0]},
        "equiv.json": {
            "model": "model_derived.json",
            "c": [0.1, 0.0],
            "dev_init": [0.001, 0.0],
            "inputs": [{"k": 0, "u": [0.001, -0.001]}],
            "horizon": 100,
            "taylor": {"direction": [1.0, 0.0], "epsilon": 0.01, "horizon": 5},
        },
        "context_saturating.json": {
            "model": "model_derived.json",
            "contexts": [{"label": "A", "c": [1.5, 0.0]}, {"label": "B", "c": [0.0, 0.6]}],
            "probe_u": [1.0, 1.0],
        },
        "context_identity.json": {
            "model": "model_identity.json",
            "contexts": [{"label": "A", "c": [2.0, 0.0]}, {"label": "B", "c": [0.0, -3.0]}],
            "probe_u": [1.0, 1.0],
        },
    }
    for name, doc in docs.items():
        with open(cli_dir / name, "w") as fh:
            json.dump(doc, fh, indent=1)
            fh.write("\n")


if __name__ == "__main__":
    main()
