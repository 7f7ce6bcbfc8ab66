from fractions import Fraction

import pytest
from hypothesis import settings as hypothesis_settings

from app.models.models import ScalarMode
from app.services.arithmetic import ExactArithmetic, MachineArithmetic
from app.services.families import complete_graph, example3, ladder
from app.services.graph import build_graph
from app.services.laplacian import solve_system

hypothesis_settings.register_profile("pmgraph", deadline=None,
                                     max_examples=50)
hypothesis_settings.load_profile("pmgraph")

K4_UNIFORM = [Fraction(1, 6)] * 6


@pytest.fixture
def exact():
    return ExactArithmetic()


@pytest.fixture
def machine():
    return MachineArithmetic()


@pytest.fixture
def exact_mode():
    return ScalarMode.exact()


@pytest.fixture
def k4():
    return complete_graph(4, K4_UNIFORM)


@pytest.fixture
def k4_system(k4):
    return solve_system(k4)


@pytest.fixture
def triangle():
    return build_graph(["v0", "v1", "v2"],
                       [("v0", "v1", 1), ("v1", "v2", 1), ("v2", "v0", 1)])


@pytest.fixture
def segment():
    return build_graph([("v0", 1), ("v1", 1)], [("v0", "v1", 3)])


@pytest.fixture
def ladder5():
    return ladder(5)


@pytest.fixture
def example3_graph():
    return example3()
