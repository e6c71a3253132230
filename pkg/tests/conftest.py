import math

import numpy as np
import pytest

from yocurves import closure

# Figure-caption parameter sets: the six-panel inner-window family, the two
# lambda variants, the two outer-window trefoils, and the Legendrian special
# case (lambda = 1/sqrt(3)).
FIG_SETS = [
    (3, 2, -3.85, 0.0),
    (3, 2, -3.25, 0.0),
    (3, 2, -2.5, 0.0),
    (3, 2, -1.75, 0.0),
    (3, 2, -0.7, 0.0),
    (3, 2, 0.2, 0.0),
    (1, 3, -2.2, 0.0),
    (1, 3, -2.2, 3.1),
    (1, 2, 4.6, 0.0),
    (1, 2, 31.0, 0.0),
    (1, 1, 2.0, 1.0 / math.sqrt(3.0)),
]

FLAGSHIP = (3, 2, -2.5, 0.0)
LEGENDRIAN_CASE = (1, 1, 2.0, 1.0 / math.sqrt(3.0))


def set_id(params):
    p, q, k, lam = params
    return f"p{p}q{q}k{k:g}lam{lam:g}"


@pytest.fixture(scope="session")
def solutions():
    return {params: closure.closure_from_pq(*params) for params in FIG_SETS}


@pytest.fixture
def rng():
    return np.random.default_rng(20240815)
