import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from asymkit import SU2Group, SU2Rep, U1Group, U1Rep, builtin_group, spin_generators

BUILTIN_NAMES = ["Z5", "Z6", "S3", "D4", "Q8"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(params=BUILTIN_NAMES)
def group_and_table(request):
    return builtin_group(request.param)


@pytest.fixture
def u1_rep():
    return U1Rep(U1Group(4), [0, 1])


@pytest.fixture
def spin_half():
    return SU2Rep(SU2Group(1), *spin_generators(1))


@pytest.fixture
def spin_one():
    return SU2Rep(SU2Group(2), *spin_generators(2))
