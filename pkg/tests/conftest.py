import json
from pathlib import Path

import numpy as np
import pytest

from rnn_linz import Nonlinearity, RnnModel, find_fixed_point

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def derived_model():
    """The 2x2 tanh model used by the worked examples."""
    return RnnModel(W=np.array([[0.0, 0.5], [0.5, 0.0]]), nl=Nonlinearity("tanh"))


@pytest.fixture
def derived_fp(derived_model):
    """Its fixed point at context (0.1, 0)."""
    return find_fixed_point(derived_model, c=np.array([0.1, 0.0]), tol=1e-12)


def load_fixture_cases():
    """All committed fixture cases (model + context + committed sequences)."""
    with open(FIXTURES / "cases.json") as fh:
        cases = json.load(fh)
    return cases
